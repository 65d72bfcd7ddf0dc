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

// mmwchan command-line tool. Everything goes through the C interface.

#include "mmwchan/mmwchan.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace
{
    using json = nlohmann::ordered_json;

    enum Exit
    {
        ok = 0,
        validation_failed = 1,
        input_error = 2,
        io_error = 3,
        internal_error = 4
    };

    // Carries a status out of a subcommand; the message is already formatted.
    struct Failure
    {
        int code;
        std::string message;
    };

    void check(mmwchan_status s)
    {
        if (s != MMWCHAN_OK)
            throw Failure{static_cast<int>(s), mmwchan_last_error()};
    }

    template <class T, void (*Free)(T *)>
    struct Deleter
    {
        void operator()(T *p) const { Free(p); }
    };
    using Profile = std::unique_ptr<mmwchan_profile, Deleter<mmwchan_profile, mmwchan_profile_free>>;
    using Corpus = std::unique_ptr<mmwchan_corpus, Deleter<mmwchan_corpus, mmwchan_corpus_free>>;
    using Traces = std::unique_ptr<mmwchan_traces, Deleter<mmwchan_traces, mmwchan_traces_free>>;
    using Report = std::unique_ptr<mmwchan_fit_report, Deleter<mmwchan_fit_report, mmwchan_fit_report_free>>;
    using Validation = std::unique_ptr<mmwchan_validation, Deleter<mmwchan_validation, mmwchan_validation_free>>;
    using CString = std::unique_ptr<char, Deleter<char, mmwchan_string_free>>;

    std::string take(char *s)
    {
        CString owned(s);
        return owned ? std::string(owned.get()) : std::string();
    }

    // "-" or empty means stdout.
    void emit(const std::string &path, const std::string &contents)
    {
        if (path.empty() || path == "-")
        {
            std::cout << contents;
            std::cout.flush();
            if (!std::cout)
                throw Failure{io_error, "error writing to stdout"};
            return;
        }
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Failure{io_error, "cannot open '" + path + "' for writing"};
        out << contents;
        out.close();
        if (!out)
            throw Failure{io_error, "error writing '" + path + "'"};
    }

    std::string utc_timestamp()
    {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    // Shared state of one invocation.
    struct Run
    {
        std::vector<std::string> argv;
        unsigned threads = 0; // 0 = library default (MMWCHAN_THREADS or hardware)

        json manifest(const std::string &command) const
        {
            return {{"schema_version", 1},
                    {"command", command},
                    {"argv", argv},
                    {"tool_version", mmwchan_version()},
                    {"threads", threads ? threads : mmwchan_default_threads()},
                    {"timestamp", utc_timestamp()}};
        }
    };

    Profile load_profile(const std::string &id, const std::string &file)
    {
        mmwchan_profile *p = nullptr;
        if (!file.empty())
            check(mmwchan_profile_load(file.c_str(), &p));
        else
            check(mmwchan_profile_builtin(id.c_str(), &p));
        return Profile(p);
    }

    Traces load_traces(const std::string &path)
    {
        mmwchan_traces *t = nullptr;
        check(mmwchan_traces_load(path.c_str(), &t));
        return Traces(t);
    }

    std::vector<std::string> builtin_ids()
    {
        std::vector<std::string> ids;
        for (size_t i = 0; i < mmwchan_builtin_profile_count(); ++i)
        {
            const char *id = nullptr;
            check(mmwchan_builtin_profile_id(i, &id));
            ids.emplace_back(id);
        }
        return ids;
    }

    struct GenerateArgs
    {
        std::string profile, profile_file, out, format = "taps-jsonl", manifest;
        std::uint64_t n = 1, seed = 1;
    };

    int cmd_generate(const Run &run, const GenerateArgs &a)
    {
        const Profile profile = load_profile(a.profile, a.profile_file);
        const mmwchan_corpus_format format =
            a.format == "realizations-json" ? MMWCHAN_FORMAT_REALIZATIONS_JSON : MMWCHAN_FORMAT_TAPS_JSONL;

        mmwchan_corpus *raw = nullptr;
        check(mmwchan_generate(profile.get(), a.n, a.seed, run.threads, &raw));
        const Corpus corpus(raw);
        check(mmwchan_corpus_write(corpus.get(), a.out.c_str(), format));

        const std::string manifest_path = a.manifest.empty() ? a.out + ".manifest.json" : a.manifest;
        json m = run.manifest("generate");
        m["profile_ids"] = {mmwchan_profile_id(profile.get())};
        if (!a.profile_file.empty())
            m["profile_file"] = a.profile_file;
        m["seed"] = a.seed;
        m["counts"] = {{"realizations", a.n}};
        m["format"] = a.format;
        m["outputs"] = {a.out};
        emit(manifest_path, m.dump(2) + "\n");
        std::cerr << "wrote " << a.n << " realizations of " << mmwchan_profile_id(profile.get()) << " to " << a.out
                  << "\n";
        return ok;
    }

    struct FitArgs
    {
        std::string in, out, csv, mode = "per-beam", manifest;
        double gap_threshold = 0.0, noise_floor = 0.0;
    };

    int cmd_fit(const Run &run, const FitArgs &a)
    {
        const Traces traces = load_traces(a.in);
        mmwchan_fit_options options = mmwchan_fit_options_default();
        if (a.gap_threshold > 0.0)
            options.gap_threshold = a.gap_threshold;
        options.noise_floor = a.noise_floor;
        options.pooling = a.mode == "pooled" ? MMWCHAN_POOLING_POOLED : MMWCHAN_POOLING_PER_BEAM;

        mmwchan_fit_report *raw = nullptr;
        check(mmwchan_fit(traces.get(), &options, &raw));
        const Report report(raw);

        char *text = nullptr;
        check(mmwchan_fit_report_to_json(report.get(), &text));
        emit(a.out, take(text));

        std::string csv = a.csv;
        if (csv.empty() && !a.out.empty() && a.out != "-")
            csv = a.out + ".ecdf.csv";
        if (!csv.empty())
            check(mmwchan_fit_report_write_csv(report.get(), csv.c_str()));

        const std::string manifest_path =
            !a.manifest.empty() ? a.manifest : (!a.out.empty() && a.out != "-" ? a.out + ".manifest.json" : "");
        if (!manifest_path.empty())
        {
            json m = run.manifest("fit");
            m["inputs"] = {a.in};
            m["counts"] = {{"captures", mmwchan_traces_size(traces.get())}};
            m["settings"] = {{"gap_threshold", options.gap_threshold},
                             {"noise_floor", a.noise_floor > 0.0 ? json(a.noise_floor) : json("relative-0.01")},
                             {"mode", a.mode}};
            m["outputs"] = json::array();
            if (!a.out.empty() && a.out != "-")
                m["outputs"].push_back(a.out);
            if (!csv.empty())
                m["outputs"].push_back(csv);
            emit(manifest_path, m.dump(2) + "\n");
        }
        return ok;
    }

    struct ValidateArgs
    {
        std::string profile = "all", profile_file, out, manifest;
        std::uint64_t n = 100000, seed = 1;
        double tolerance = 0.15, count_tolerance = 1.0;
    };

    int cmd_validate(const Run &run, const ValidateArgs &a)
    {
        std::vector<Profile> profiles;
        if (!a.profile_file.empty())
            profiles.push_back(load_profile("", a.profile_file));
        else if (a.profile == "all")
            for (const auto &id : builtin_ids())
                profiles.push_back(load_profile(id, ""));
        else
            profiles.push_back(load_profile(a.profile, ""));

        std::vector<const mmwchan_profile *> handles;
        std::vector<std::string> ids;
        for (const auto &p : profiles)
        {
            handles.push_back(p.get());
            ids.emplace_back(mmwchan_profile_id(p.get()));
        }

        mmwchan_validation *raw = nullptr;
        check(mmwchan_validate(handles.data(), handles.size(), a.n, a.seed, a.tolerance, a.count_tolerance,
                               run.threads, &raw));
        const Validation v(raw);

        char *table = nullptr;
        check(mmwchan_validation_table(v.get(), &table));
        std::cout << take(table);
        const bool passed = mmwchan_validation_passed(v.get()) != 0;
        std::cout << (passed ? "PASS" : "FAIL") << "\n";

        if (!a.out.empty())
        {
            char *text = nullptr;
            check(mmwchan_validation_to_json(v.get(), &text));
            emit(a.out, take(text));
        }
        const std::string manifest_path =
            !a.manifest.empty() ? a.manifest : (!a.out.empty() && a.out != "-" ? a.out + ".manifest.json" : "");
        if (!manifest_path.empty())
        {
            json m = run.manifest("validate");
            m["profile_ids"] = ids;
            if (!a.profile_file.empty())
                m["profile_file"] = a.profile_file;
            m["seed"] = a.seed;
            m["counts"] = {{"realizations", a.n}};
            m["tolerances"] = {{"relative", a.tolerance}, {"count_absolute", a.count_tolerance}};
            m["outputs"] = a.out.empty() ? json::array() : json::array({a.out});
            m["pass"] = passed;
            emit(manifest_path, m.dump(2) + "\n");
        }
        return passed ? ok : validation_failed;
    }

    struct CalibrateArgs
    {
        std::string scenario, targets, out;
        int beamwidth = 0;
    };

    int cmd_calibrate(const Run &, const CalibrateArgs &a)
    {
        std::string targets;
        if (!a.targets.empty())
        {
            std::ifstream in(a.targets, std::ios::binary);
            if (!in)
                throw Failure{io_error, "cannot open '" + a.targets + "' for reading"};
            targets.assign(std::istreambuf_iterator<char>(in), {});
        }
        mmwchan_profile *raw = nullptr;
        check(mmwchan_calibrate(a.scenario.c_str(), a.beamwidth, a.targets.empty() ? nullptr : targets.c_str(), &raw));
        const Profile profile(raw);

        char *text = nullptr;
        check(mmwchan_profile_to_json(profile.get(), &text));
        const std::string doc = take(text);
        emit(a.out, doc);

        int code = ok;
        const json parsed = json::parse(doc);
        for (const auto &[name, entry] : parsed.at("parameters").items())
        {
            const auto &c = entry.value("calibration", json::object());
            if (!c.value("within_threshold", true))
            {
                std::cerr << "calibration of " << name << " misses the residual threshold (residual "
                          << c.value("residual", json()).dump() << ")\n";
                code = validation_failed;
            }
            else if (!c.value("within_range", true))
                std::cerr << "note: " << name << ": " << c.value("note", "")
                          << "\n";
        }
        return code;
    }

    struct MetricsArgs
    {
        std::string in, out;
        double bandwidth = 0.0, threshold = 0.0, gap_threshold = 0.0;
        std::size_t points = 0;
    };

    int cmd_metrics(const Run &run, const MetricsArgs &a)
    {
        const Traces traces = load_traces(a.in);
        mmwchan_metrics_options o = mmwchan_metrics_options_default();
        if (a.bandwidth > 0.0)
            o.bandwidth = a.bandwidth;
        if (a.points > 0)
            o.points = a.points;
        if (a.threshold > 0.0)
            o.correlation_threshold = a.threshold;
        if (a.gap_threshold > 0.0)
            o.gap_threshold = a.gap_threshold;
        char *csv = nullptr;
        check(mmwchan_metrics_csv(traces.get(), &o, run.threads, &csv));
        emit(a.out, take(csv));
        return ok;
    }

    int cmd_profiles_list(bool as_json)
    {
        json all = json::array();
        for (const auto &id : builtin_ids())
        {
            const Profile p = load_profile(id, "");
            char *text = nullptr;
            check(mmwchan_profile_to_json(p.get(), &text));
            json doc = json::parse(take(text));
            if (as_json)
            {
                all.push_back(std::move(doc));
                continue;
            }
            std::cout << id << "\n";
            for (const auto &[name, entry] : doc.at("parameters").items())
            {
                std::string params;
                for (const auto &[k, v] : entry.at("params").items())
                    params += (params.empty() ? "" : ", ") + k + "=" + v.dump();
                const auto &c = entry.value("calibration", json::object());
                std::cout << "  " << name << ": " << entry.at("family").get<std::string>() << "(" << params << ")"
                          << "  residual " << c.value("residual", json()).dump()
                          << (c.value("within_range", true) ? "" : "  [outside published range]") << "\n";
            }
        }
        if (as_json)
            std::cout << all.dump(2) << "\n";
        return ok;
    }
}

int main(int argc, char **argv)
{
    Run run;
    run.argv.assign(argv, argv + argc);

    CLI::App app{"mmwchan: statistical 60 GHz industrial channel model"};
    app.set_version_flag("--version", std::string(mmwchan_version()));
    app.require_subcommand(1);
    app.add_option("--threads", run.threads, "worker threads (default: MMWCHAN_THREADS or all cores)");

    GenerateArgs gen;
    auto *g = app.add_subcommand("generate", "generate a synthetic channel corpus");
    auto *g_profile = g->add_option("--profile", gen.profile, "built-in profile id");
    auto *g_file = g->add_option("--profile-file", gen.profile_file, "profile JSON file");
    g_profile->excludes(g_file);
    g->add_option("--n", gen.n, "number of realizations")->capture_default_str();
    g->add_option("--seed", gen.seed, "corpus seed")->capture_default_str();
    g->add_option("--out", gen.out, "output file")->required();
    g->add_option("--format", gen.format, "taps-jsonl or realizations-json")
        ->check(CLI::IsMember({"taps-jsonl", "realizations-json"}))
        ->capture_default_str();
    g->add_option("--manifest", gen.manifest, "manifest path (default: <out>.manifest.json)");

    FitArgs fit;
    auto *f = app.add_subcommand("fit", "fit distribution families to tap traces");
    f->add_option("--in", fit.in, "trace JSON-lines file")->required();
    f->add_option("--gap-threshold", fit.gap_threshold, "cluster gap threshold in seconds (default 2.4e-9)")
        ->check(CLI::PositiveNumber);
    f->add_option("--noise-floor", fit.noise_floor, "absolute amplitude floor (default 1% of each capture's peak)")
        ->check(CLI::PositiveNumber);
    f->add_option("--mode", fit.mode, "per-beam or pooled")
        ->check(CLI::IsMember({"per-beam", "pooled"}))
        ->capture_default_str();
    f->add_option("--out", fit.out, "report JSON (default stdout)");
    f->add_option("--csv", fit.csv, "empirical CDF CSV (default <out>.ecdf.csv)");
    f->add_option("--manifest", fit.manifest, "manifest path (default: <out>.manifest.json)");

    ValidateArgs val;
    auto *v = app.add_subcommand("validate", "compare simulated quartiles with the published targets");
    auto *v_profile = v->add_option("--profile", val.profile, "built-in profile id or 'all'")->capture_default_str();
    auto *v_file = v->add_option("--profile-file", val.profile_file, "profile JSON file");
    v_profile->excludes(v_file);
    v->add_option("--n", val.n, "realizations per profile")->capture_default_str()->check(CLI::PositiveNumber);
    v->add_option("--seed", val.seed, "seed")->capture_default_str();
    v->add_option("--tolerance", val.tolerance, "relative tolerance for continuous parameters")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    v->add_option("--count-tolerance", val.count_tolerance, "absolute tolerance for counts")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    v->add_option("--out", val.out, "result JSON");
    v->add_option("--manifest", val.manifest, "manifest path (default: <out>.manifest.json)");

    CalibrateArgs cal;
    auto *c = app.add_subcommand("calibrate", "calibrate a profile against quartile targets");
    c->add_option("--scenario", cal.scenario, "Tunnel, ExperimentalHall, MechanicalRoom, SideTunnel")->required();
    c->add_option("--beamwidth", cal.beamwidth, "antenna beamwidth in degrees")->required();
    c->add_option("--targets", cal.targets, "targets JSON (default: published targets)");
    c->add_option("--out", cal.out, "profile JSON (default stdout)");

    MetricsArgs met;
    auto *m = app.add_subcommand("metrics", "per-capture delay spread, coherence bandwidth, peak-to-average");
    m->add_option("--in", met.in, "trace JSON-lines file")->required();
    m->add_option("--bandwidth", met.bandwidth, "evaluated bandwidth in Hz (default 2.16e9)")
        ->check(CLI::PositiveNumber);
    m->add_option("--points", met.points, "frequency samples (default 1024)")->check(CLI::Range(2, 1 << 24));
    m->add_option("--threshold", met.threshold, "coherence correlation level (default 0.9)")
        ->check(CLI::Range(0.0, 1.0));
    m->add_option("--gap-threshold", met.gap_threshold, "cluster gap threshold in seconds")
        ->check(CLI::PositiveNumber);
    m->add_option("--out", met.out, "CSV (default stdout)");

    auto *p = app.add_subcommand("profiles", "built-in profiles");
    p->require_subcommand(1);
    bool list_json = false;
    auto *pl = p->add_subcommand("list", "list built-in profiles and their calibrated parameters");
    pl->add_flag("--json", list_json, "print the profile documents");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return input_error;
    }

    try
    {
        if (*g)
        {
            if (gen.profile.empty() && gen.profile_file.empty())
                throw Failure{input_error, "generate: one of --profile or --profile-file is required"};
            return cmd_generate(run, gen);
        }
        if (*f)
            return cmd_fit(run, fit);
        if (*v)
            return cmd_validate(run, val);
        if (*c)
            return cmd_calibrate(run, cal);
        if (*m)
            return cmd_metrics(run, met);
        if (*pl)
            return cmd_profiles_list(list_json);
    }
    catch (const Failure &e)
    {
        std::cerr << "mmwchan: error: " << e.message << "\n";
        return e.code;
    }
    catch (const std::exception &e)
    {
        std::cerr << "mmwchan: error: " << e.what() << "\n";
        return internal_error;
    }
    return internal_error;
}
