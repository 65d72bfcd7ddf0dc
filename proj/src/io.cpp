// SPDX-License-Identifier: Apache-2.0
//
// mmwchan: statistical channel model for 60 GHz industrial environments
// Copyright (C) 2026 The mmwchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "mmwchan/io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace mmwchan::io
{
    using json = nlohmann::ordered_json;

    namespace
    {
        std::string json_string(std::string_view s)
        {
            return json(std::string(s)).dump();
        }

        const json &member(const json &obj, const char *key, std::size_t line)
        {
            auto it = obj.find(key);
            if (it == obj.end())
                throw ParseError(fmt::format("missing field \"{}\"", key), line);
            return *it;
        }

        double number(const json &v, const char *what, std::size_t line)
        {
            if (!v.is_number())
                throw ParseError(fmt::format("\"{}\" must be a number", what), line);
            return v.get<double>();
        }

        std::string text(const json &v, const char *what, std::size_t line)
        {
            if (!v.is_string())
                throw ParseError(fmt::format("\"{}\" must be a string", what), line);
            return v.get<std::string>();
        }

        long long integer(const json &v, const char *what, std::size_t line)
        {
            if (v.is_number_integer())
                return v.get<long long>();
            if (v.is_number_float())
            {
                const double d = v.get<double>();
                if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15)
                    return static_cast<long long>(d);
            }
            throw ParseError(fmt::format("\"{}\" must be an integer", what), line);
        }

        void check_schema(const json &obj, std::size_t line)
        {
            auto it = obj.find("schema_version");
            if (it == obj.end())
                return;
            if (!it->is_number_integer() || it->get<long long>() != schema_version)
                throw ParseError(fmt::format("unsupported schema_version {} (expected {})", it->dump(), schema_version),
                                 line);
        }

        json parse_document(std::string_view text_in, const char *what)
        {
            try
            {
                json doc = json::parse(text_in.begin(), text_in.end());
                if (!doc.is_object())
                    throw ParseError(fmt::format("{}: top level must be an object", what));
                return doc;
            }
            catch (const json::parse_error &e)
            {
                throw ParseError(fmt::format("{}: {}", what, e.what()));
            }
        }

        json nullable(double v)
        {
            return std::isfinite(v) ? json(v) : json(nullptr);
        }

        json spec_json(const DistributionSpec &spec)
        {
            json params = json::object();
            const auto names = parameter_names(spec.family());
            const auto values = spec.parameters();
            for (std::size_t i = 0; i < values.size(); ++i)
                params[std::string(names[i])] = values[i];
            return {{"family", std::string(to_string(spec.family()))}, {"params", params}};
        }

        DistributionSpec parse_spec(const json &j, const std::string &where)
        {
            if (!j.is_object())
                throw ParseError(where + ": distribution must be an object");
            const Family family = [&]
            {
                try
                {
                    return family_from_string(text(member(j, "family", 0), "family", 0));
                }
                catch (const std::invalid_argument &e)
                {
                    throw ParseError(fmt::format("{}: {}", where, e.what()));
                }
            }();
            const json &params = member(j, "params", 0);
            if (!params.is_object())
                throw ParseError(where + ": \"params\" must be an object");
            std::vector<double> values;
            for (std::string_view name : parameter_names(family))
            {
                auto it = params.find(std::string(name));
                if (it == params.end())
                    throw ParseError(fmt::format("{}: missing parameter \"{}\"", where, name));
                values.push_back(number(*it, std::string(name).c_str(), 0));
            }
            try
            {
                return DistributionSpec::from_parameters(family, values);
            }
            catch (const std::invalid_argument &e)
            {
                throw ParseError(fmt::format("{}: {}", where, e.what()));
            }
        }

        json quartiles_json(const std::optional<std::array<double, 3>> &q)
        {
            if (!q)
                return nullptr;
            return json::array({(*q)[0], (*q)[1], (*q)[2]});
        }
    }

    std::string format_double(double value)
    {
        return fmt::format("{:.17g}", value);
    }

    std::string trace_line(const TapSeries &s)
    {
        std::string out = fmt::format(
            "{{\"schema_version\":{},\"location\":{},\"beam_id\":{},\"scenario\":{},\"beamwidth_deg\":{},"
            "\"capture_index\":{},\"taps\":[",
            schema_version, json_string(s.meta.location_id), s.meta.beam_id, json_string(s.meta.scenario),
            format_double(s.meta.beamwidth_deg), s.meta.capture_index);
        for (std::size_t i = 0; i < s.taps.size(); ++i)
        {
            if (i)
                out += ',';
            out += fmt::format("[{},{}]", format_double(s.taps[i].delay), format_double(s.taps[i].amplitude));
        }
        out += "]}";
        return out;
    }

    void write_traces(std::ostream &out, const std::vector<TapSeries> &captures)
    {
        for (const auto &s : captures)
            out << trace_line(s) << '\n';
    }

    TapSeries parse_trace_line(std::string_view line, std::size_t n)
    {
        json obj;
        try
        {
            obj = json::parse(line.begin(), line.end());
        }
        catch (const json::parse_error &e)
        {
            throw ParseError(fmt::format("line {}: {}", n, e.what()), n);
        }
        const auto fail = [n](const ParseError &e) { return ParseError(fmt::format("line {}: {}", n, e.what()), n); };
        try
        {
            if (!obj.is_object())
                throw ParseError("capture must be a JSON object", n);
            check_schema(obj, n);

            TapSeries s;
            s.meta.location_id = text(member(obj, "location", n), "location", n);
            const long long beam = integer(member(obj, "beam_id", n), "beam_id", n);
            if (beam < 0 || beam > 31)
                throw ParseError(fmt::format("beam_id {} outside [0, 31]", beam), n);
            s.meta.beam_id = static_cast<int>(beam);
            s.meta.scenario = text(member(obj, "scenario", n), "scenario", n);
            s.meta.beamwidth_deg = number(member(obj, "beamwidth_deg", n), "beamwidth_deg", n);
            if (auto it = obj.find("capture_index"); it != obj.end())
            {
                const long long idx = integer(*it, "capture_index", n);
                if (idx < 0)
                    throw ParseError("capture_index must be >= 0", n);
                s.meta.capture_index = static_cast<std::size_t>(idx);
            }

            const json &taps = member(obj, "taps", n);
            if (!taps.is_array())
                throw ParseError("\"taps\" must be an array", n);
            s.taps.reserve(taps.size());
            for (const auto &t : taps)
            {
                if (!t.is_array() || t.size() != 2)
                    throw ParseError("each tap must be [delay_seconds, amplitude]", n);
                s.taps.push_back(Tap{number(t[0], "delay", n), number(t[1], "amplitude", n)});
            }
            try
            {
                validate(s);
            }
            catch (const InvalidTapSeries &e)
            {
                throw ParseError(e.what(), n);
            }
            return s;
        }
        catch (const ParseError &e)
        {
            throw fail(e);
        }
    }

    std::vector<TapSeries> read_traces(std::istream &in)
    {
        std::vector<TapSeries> out;
        std::string line;
        std::size_t n = 0;
        while (std::getline(in, line))
        {
            ++n;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.find_first_not_of(" \t") == std::string::npos)
                continue;
            const bool has_index = line.find("\"capture_index\"") != std::string::npos;
            TapSeries s = parse_trace_line(line, n);
            if (!has_index)
                s.meta.capture_index = out.size();
            out.push_back(std::move(s));
        }
        if (in.bad())
            throw IoError("read error");
        return out;
    }

    std::vector<TapSeries> corpus_taps(const ScenarioProfile &profile, const std::vector<ChannelRealization> &corpus)
    {
        std::vector<TapSeries> out;
        out.reserve(corpus.size());
        for (std::size_t i = 0; i < corpus.size(); ++i)
            out.push_back(realization_to_taps(corpus[i], profile.tap_grid, synthetic_capture_meta(profile, i)));
        return out;
    }

    void write_realizations(std::ostream &out, const ScenarioProfile &profile,
                            const std::vector<ChannelRealization> &corpus)
    {
        out << fmt::format("{{\"schema_version\":{},\"profile_id\":{},\"tap_grid\":{},\"realizations\":[", schema_version,
                           json_string(profile.id), format_double(profile.tap_grid));
        for (std::size_t i = 0; i < corpus.size(); ++i)
        {
            const auto &r = corpus[i];
            out << (i ? ",\n" : "\n") << fmt::format("{{\"index\":{},\"seed\":{},\"clusters\":[", i, r.seed);
            for (std::size_t c = 0; c < r.clusters.size(); ++c)
            {
                const auto &cl = r.clusters[c];
                out << (c ? "," : "")
                    << fmt::format("{{\"delay\":{},\"amplitude\":{},\"paths\":[", format_double(cl.delay),
                                   format_double(cl.amplitude));
                for (std::size_t p = 0; p < cl.paths.size(); ++p)
                    out << (p ? "," : "")
                        << fmt::format("[{},{}]", format_double(cl.paths[p].offset),
                                       format_double(cl.paths[p].amplitude));
                out << "]}";
            }
            out << "]}";
        }
        out << (corpus.empty() ? "]}\n" : "\n]}\n");
    }

    std::string profile_json(const ScenarioProfile &profile)
    {
        json params = json::object();
        for (Parameter p : all_parameters)
        {
            json entry = spec_json(profile.spec(p));
            if (auto it = profile.calibration.find(p); it != profile.calibration.end())
                entry["calibration"] = {{"residual", nullable(it->second.residual)},
                                        {"within_threshold", it->second.within_threshold},
                                        {"within_range", it->second.within_range},
                                        {"note", it->second.note}};
            params[std::string(to_string(p))] = std::move(entry);
        }
        json doc = {{"schema_version", schema_version},
                    {"id", profile.id},
                    {"scenario", std::string(to_string(profile.scenario))},
                    {"beamwidth_deg", profile.beamwidth_deg},
                    {"tap_grid", profile.tap_grid},
                    {"max_count", profile.max_count},
                    {"provenance", profile.provenance},
                    {"parameters", std::move(params)}};
        return doc.dump(2) + "\n";
    }

    ScenarioProfile parse_profile(std::string_view text_in)
    {
        const json doc = parse_document(text_in, "profile");
        check_schema(doc, 0);
        ScenarioProfile p;
        try
        {
            p.scenario = scenario_from_string(text(member(doc, "scenario", 0), "scenario", 0));
        }
        catch (const ParseError &)
        {
            throw;
        }
        catch (const std::invalid_argument &e)
        {
            throw ParseError(fmt::format("profile: {}", e.what()));
        }
        p.beamwidth_deg = number(member(doc, "beamwidth_deg", 0), "beamwidth_deg", 0);
        if (!(p.beamwidth_deg > 0.0))
            throw ParseError("profile: beamwidth_deg must be > 0");
        if (auto it = doc.find("id"); it != doc.end())
            p.id = text(*it, "id", 0);
        else
            p.id = profile_id(p.scenario, p.beamwidth_deg);
        if (auto it = doc.find("tap_grid"); it != doc.end())
            p.tap_grid = number(*it, "tap_grid", 0);
        if (auto it = doc.find("max_count"); it != doc.end())
        {
            const long long m = integer(*it, "max_count", 0);
            if (m < 1 || m > 1'000'000)
                throw ParseError("profile: max_count must lie in [1, 1000000]");
            p.max_count = static_cast<int>(m);
        }
        if (auto it = doc.find("provenance"); it != doc.end())
            p.provenance = text(*it, "provenance", 0);

        const json &params = member(doc, "parameters", 0);
        if (!params.is_object())
            throw ParseError("profile: \"parameters\" must be an object");
        for (Parameter par : all_parameters)
        {
            const std::string name(to_string(par));
            auto it = params.find(name);
            if (it == params.end())
                throw ParseError(fmt::format("profile: missing parameter \"{}\"", name));
            p.spec(par) = parse_spec(*it, "profile." + name);
            if (auto c = it->find("calibration"); c != it->end() && c->is_object())
            {
                CalibrationInfo info;
                if (auto r = c->find("residual"); r != c->end() && r->is_number())
                    info.residual = r->get<double>();
                else
                    info.residual = std::numeric_limits<double>::infinity();
                info.within_threshold = c->value("within_threshold", true);
                info.within_range = c->value("within_range", true);
                info.note = c->value("note", std::string());
                p.calibration[par] = std::move(info);
            }
        }
        try
        {
            validate(p);
        }
        catch (const InvalidProfile &e)
        {
            throw ParseError(e.what());
        }
        return p;
    }

    std::map<Parameter, QuartileTarget> parse_targets(std::string_view text_in)
    {
        const json doc = parse_document(text_in, "targets");
        check_schema(doc, 0);
        const json &targets = member(doc, "targets", 0);
        if (!targets.is_object())
            throw ParseError("targets: \"targets\" must be an object");
        std::map<Parameter, QuartileTarget> out;
        for (const auto &[name, entry] : targets.items())
        {
            Parameter par;
            try
            {
                par = parameter_from_string(name);
            }
            catch (const std::invalid_argument &)
            {
                throw ParseError(fmt::format("targets: unknown parameter \"{}\"", name));
            }
            if (!entry.is_object())
                throw ParseError(fmt::format("targets.{} must be an object", name));
            QuartileTarget t;
            t.q1 = number(member(entry, "q1", 0), "q1", 0);
            t.q2 = number(member(entry, "median", 0), "median", 0);
            t.q3 = number(member(entry, "q3", 0), "q3", 0);
            t.discretized = is_count(par);
            try
            {
                validate(t);
            }
            catch (const InvalidTarget &e)
            {
                throw ParseError(fmt::format("targets.{}: {}", name, e.what()));
            }
            out[par] = t;
        }
        return out;
    }

    std::string fit_report_json(const TraceFit &fit, const TraceFitOptions &settings)
    {
        const FitReport &report = fit.report;
        json params = json::array();
        for (const auto &f : report.parameters)
        {
            json candidates = json::array();
            json chosen = nullptr;
            if (f.selection)
            {
                chosen = spec_json(f.selection->chosen);
                for (const auto &c : f.selection->scores)
                {
                    json entry = {{"family", std::string(to_string(c.family))}, {"ks", nullable(c.ks)}};
                    entry["params"] = c.spec ? spec_json(*c.spec)["params"] : json(nullptr);
                    if (!c.error.empty())
                        entry["error"] = c.error;
                    candidates.push_back(std::move(entry));
                }
            }
            json entry = {{"parameter", std::string(to_string(f.parameter))},
                          {"sample_count", f.sample_count},
                          {"quartiles", quartiles_json(f.quartiles)},
                          {"insufficient_data", f.insufficient_data},
                          {"chosen", std::move(chosen)},
                          {"candidates", std::move(candidates)}};
            if (!f.error.empty())
                entry["error"] = f.error;
            params.push_back(std::move(entry));
        }
        json doc = {
            {"schema_version", schema_version},
            {"scenario", report.scenario},
            {"beamwidth_deg", report.beamwidth_deg},
            {"settings",
             {{"captures", fit.captures},
              {"dropped_captures", fit.dropped},
              {"gap_threshold", settings.gap_threshold},
              {"noise_floor", settings.noise_floor ? json(*settings.noise_floor) : json("relative-0.01")},
              {"mode", std::string(to_string(settings.mode))}}},
            {"parameters", std::move(params)},
            {"intra_path_delays",
             {{"count", report.intra_path_delays.count},
              {"quartiles", quartiles_json(report.intra_path_delays.quartiles)},
              {"mean", report.intra_path_delays.mean}}}};
        return doc.dump(2) + "\n";
    }

    void write_ecdf_csv(std::ostream &out, const ParameterSamples &samples)
    {
        out << "parameter,value,empirical_cdf\n";
        for (Parameter p : all_parameters)
        {
            auto v = values(samples, p);
            std::sort(v.begin(), v.end());
            const auto n = static_cast<double>(v.size());
            const std::string name(to_string(p));
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                if (i + 1 < v.size() && v[i + 1] == v[i])
                    continue;
                out << name << ',' << format_double(v[i]) << ','
                    << format_double(static_cast<double>(i + 1) / n) << '\n';
            }
        }
    }

    void write_metrics_csv(std::ostream &out, const std::vector<CaptureMetrics> &rows)
    {
        out << "capture_index,location,beam_id,taps,delay_spread_s,coherence_bandwidth_hz,flatness_deviation,"
               "peak_to_average\n";
        for (const auto &m : rows)
        {
            std::string loc = m.location_id;
            if (loc.find_first_of(",\"\n") != std::string::npos)
            {
                std::string q = "\"";
                for (char c : loc)
                    q += c == '"' ? std::string("\"\"") : std::string(1, c);
                loc = q + "\"";
            }
            out << m.capture_index << ',' << loc << ',' << m.beam_id << ',' << m.taps << ','
                << format_double(m.delay_spread) << ',' << format_double(m.coherence_bandwidth) << ','
                << format_double(m.flatness_deviation) << ',' << format_double(m.peak_to_average) << '\n';
        }
    }

    std::string validation_json(const std::vector<ProfileValidation> &results)
    {
        json profiles = json::array();
        bool all = true;
        for (const auto &r : results)
        {
            all = all && r.pass;
            json checks = json::array();
            for (const auto &c : r.checks)
                checks.push_back({{"parameter", std::string(to_string(c.parameter))},
                                  {"target", {c.target.q1, c.target.q2, c.target.q3}},
                                  {"simulated", {nullable(c.simulated[0]), nullable(c.simulated[1]),
                                                 nullable(c.simulated[2])}},
                                  {"error", {nullable(c.error[0]), nullable(c.error[1]), nullable(c.error[2])}},
                                  {"error_kind", is_count(c.parameter) ? "absolute" : "relative"},
                                  {"pass", c.pass}});
            profiles.push_back({{"profile", r.profile_id},
                                {"n", r.n},
                                {"seed", r.seed},
                                {"tolerance", r.tolerance},
                                {"count_tolerance", r.count_tolerance},
                                {"pass", r.pass},
                                {"checks", std::move(checks)}});
        }
        json doc = {{"schema_version", schema_version}, {"pass", all}, {"profiles", std::move(profiles)}};
        return doc.dump(2) + "\n";
    }

    std::string validation_table(const std::vector<ProfileValidation> &results)
    {
        std::string out = fmt::format("{:<22} {:<20} {:>36} {:>36} {:>8} {}\n", "profile", "parameter",
                                      "target (q1 median q3)", "simulated (q1 median q3)", "max err", "result");
        for (const auto &r : results)
            for (const auto &c : r.checks)
            {
                const double worst = std::max({c.error[0], c.error[1], c.error[2]});
                out += fmt::format("{:<22} {:<20} {:>36} {:>36} {:>8.3g} {}\n", r.profile_id, to_string(c.parameter),
                                   fmt::format("{:.4g} {:.4g} {:.4g}", c.target.q1, c.target.q2, c.target.q3),
                                   fmt::format("{:.4g} {:.4g} {:.4g}", c.simulated[0], c.simulated[1],
                                               c.simulated[2]),
                                   worst, c.pass ? "PASS" : "FAIL");
            }
        return out;
    }

    std::string read_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError(fmt::format("cannot open '{}' for reading", path));
        std::ostringstream ss;
        ss << in.rdbuf();
        if (in.bad())
            throw IoError(fmt::format("error reading '{}'", path));
        return ss.str();
    }

    void write_file(const std::string &path, std::string_view contents)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError(fmt::format("cannot open '{}' for writing", path));
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.close();
        if (!out)
            throw IoError(fmt::format("error writing '{}'", path));
    }
}
