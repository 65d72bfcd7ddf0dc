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

#include <doctest.h>

#include "mmwchan/mmwchan.h"

#include <json.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{
    std::string take(char *s)
    {
        std::string out = s ? s : "";
        mmwchan_string_free(s);
        return out;
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    struct TempDir
    {
        fs::path path;
        TempDir()
        {
            path = fs::temp_directory_path() / ("mmwchan_capi_" + std::to_string(::getpid()));
            fs::create_directories(path);
        }
        ~TempDir() { fs::remove_all(path); }
    };
}

TEST_CASE("status strings and version")
{
    CHECK(std::strlen(mmwchan_version()) > 0);
    CHECK(std::string(mmwchan_status_string(MMWCHAN_OK)) != "");
    CHECK(std::string(mmwchan_status_string(MMWCHAN_IO_ERROR)) != std::string(mmwchan_status_string(MMWCHAN_OK)));
    CHECK(mmwchan_default_threads() >= 1);
}

TEST_CASE("builtin profiles through handles")
{
    REQUIRE(mmwchan_builtin_profile_count() == 8);
    const char *id = nullptr;
    REQUIRE(mmwchan_builtin_profile_id(0, &id) == MMWCHAN_OK);
    CHECK(std::string(id) == "tunnel-7");
    CHECK(mmwchan_builtin_profile_id(8, &id) == MMWCHAN_INPUT_ERROR);

    mmwchan_profile *p = nullptr;
    REQUIRE(mmwchan_profile_builtin("side-tunnel-20", &p) == MMWCHAN_OK);
    CHECK(std::string(mmwchan_profile_id(p)) == "side-tunnel-20");
    char *text = nullptr;
    REQUIRE(mmwchan_profile_to_json(p, &text) == MMWCHAN_OK);
    const std::string doc = take(text);
    CHECK(json::parse(doc)["scenario"] == "SideTunnel");

    mmwchan_profile *q = nullptr;
    REQUIRE(mmwchan_profile_from_json(doc.c_str(), &q) == MMWCHAN_OK);
    REQUIRE(mmwchan_profile_to_json(q, &text) == MMWCHAN_OK);
    CHECK(take(text) == doc);
    mmwchan_profile_free(q);
    mmwchan_profile_free(p);

    mmwchan_profile *bad = reinterpret_cast<mmwchan_profile *>(0x1);
    CHECK(mmwchan_profile_builtin("attic-20", &bad) == MMWCHAN_INPUT_ERROR);
    CHECK(bad == nullptr);
    CHECK(std::string(mmwchan_last_error()).find("unknown profile 'attic-20'") != std::string::npos);
    CHECK(mmwchan_profile_from_json("{", &bad) == MMWCHAN_INPUT_ERROR);
    CHECK(mmwchan_profile_load("/nonexistent/p.json", &bad) == MMWCHAN_IO_ERROR);
    CHECK(mmwchan_profile_builtin(nullptr, &bad) == MMWCHAN_INPUT_ERROR);
    CHECK(mmwchan_profile_builtin("tunnel-7", nullptr) == MMWCHAN_INPUT_ERROR);
}

TEST_CASE("generate, write and re-ingest")
{
    TempDir dir;
    mmwchan_profile *p = nullptr;
    REQUIRE(mmwchan_profile_builtin("tunnel-20", &p) == MMWCHAN_OK);

    mmwchan_corpus *a = nullptr, *b = nullptr;
    REQUIRE(mmwchan_generate(p, 300, 5, 1, &a) == MMWCHAN_OK);
    REQUIRE(mmwchan_generate(p, 300, 5, 3, &b) == MMWCHAN_OK);
    CHECK(mmwchan_corpus_size(a) == 300);
    const auto fa = dir.path / "a.jsonl", fb = dir.path / "b.jsonl";
    REQUIRE(mmwchan_corpus_write(a, fa.c_str(), MMWCHAN_FORMAT_TAPS_JSONL) == MMWCHAN_OK);
    REQUIRE(mmwchan_corpus_write(b, fb.c_str(), MMWCHAN_FORMAT_TAPS_JSONL) == MMWCHAN_OK);
    CHECK(slurp(fa) == slurp(fb));
    const auto fr = dir.path / "r.json";
    REQUIRE(mmwchan_corpus_write(a, fr.c_str(), MMWCHAN_FORMAT_REALIZATIONS_JSON) == MMWCHAN_OK);
    CHECK(json::parse(slurp(fr))["realizations"].size() == 300);
    CHECK(mmwchan_corpus_write(a, (dir.path / "no/such/dir/x").c_str(), MMWCHAN_FORMAT_TAPS_JSONL) == MMWCHAN_IO_ERROR);
    CHECK(mmwchan_corpus_write(a, fa.c_str(), static_cast<mmwchan_corpus_format>(7)) == MMWCHAN_INPUT_ERROR);

    mmwchan_traces *t = nullptr;
    REQUIRE(mmwchan_traces_load(fa.c_str(), &t) == MMWCHAN_OK);
    CHECK(mmwchan_traces_size(t) == 300);
    const auto fc = dir.path / "c.jsonl";
    REQUIRE(mmwchan_traces_write(t, fc.c_str()) == MMWCHAN_OK);
    CHECK(slurp(fc) == slurp(fa));

    mmwchan_traces *direct = nullptr;
    REQUIRE(mmwchan_corpus_traces(a, &direct) == MMWCHAN_OK);
    const auto fd = dir.path / "d.jsonl";
    REQUIRE(mmwchan_traces_write(direct, fd.c_str()) == MMWCHAN_OK);
    CHECK(slurp(fd) == slurp(fa));

    mmwchan_traces_free(direct);
    mmwchan_traces_free(t);
    mmwchan_corpus_free(b);
    mmwchan_corpus_free(a);
    mmwchan_profile_free(p);
}

TEST_CASE("trace parse errors carry the line")
{
    mmwchan_traces *t = nullptr;
    const char *text = "{\"location\":\"a\",\"beam_id\":0,\"scenario\":\"Tunnel\",\"beamwidth_deg\":7,\"taps\":[[0,1]]}\n"
                       "{\"location\":\"a\",\"beam_id\":1,\"scenario\":\"Tunnel\",\"beamwidth_deg\":7,\"taps\":[[0,x]]}\n";
    CHECK(mmwchan_traces_parse(text, &t) == MMWCHAN_INPUT_ERROR);
    CHECK(t == nullptr);
    CHECK(std::string(mmwchan_last_error()).find("line 2") != std::string::npos);
    CHECK(mmwchan_traces_load("/nonexistent/t.jsonl", &t) == MMWCHAN_IO_ERROR);

    REQUIRE(mmwchan_traces_parse("", &t) == MMWCHAN_OK);
    CHECK(mmwchan_traces_size(t) == 0);
    mmwchan_fit_report *r = nullptr;
    const auto o = mmwchan_fit_options_default();
    CHECK(mmwchan_fit(t, &o, &r) == MMWCHAN_INPUT_ERROR);
    CHECK(r == nullptr);
    mmwchan_traces_free(t);
}

TEST_CASE("fit report accessors")
{
    mmwchan_profile *p = nullptr;
    REQUIRE(mmwchan_profile_builtin("exp-hall-80", &p) == MMWCHAN_OK);
    mmwchan_corpus *c = nullptr;
    REQUIRE(mmwchan_generate(p, 500, 9, 0, &c) == MMWCHAN_OK);
    mmwchan_traces *t = nullptr;
    REQUIRE(mmwchan_corpus_traces(c, &t) == MMWCHAN_OK);

    auto o = mmwchan_fit_options_default();
    CHECK(o.pooling == MMWCHAN_POOLING_PER_BEAM);
    mmwchan_fit_report *r = nullptr;
    REQUIRE(mmwchan_fit(t, &o, &r) == MMWCHAN_OK);
    const char *family = mmwchan_fit_report_family(r, "cluster_amplitude");
    REQUIRE(family != nullptr);
    CHECK(std::string(family) == "GEV");
    double q[3] = {0, 0, 0};
    REQUIRE(mmwchan_fit_report_quartiles(r, "path_amplitude", q) == MMWCHAN_OK);
    CHECK(q[0] <= q[1]);
    CHECK(q[1] <= q[2]);
    CHECK(q[0] > 0.0);
    CHECK(mmwchan_fit_report_quartiles(r, "colour", q) == MMWCHAN_INPUT_ERROR);
    CHECK(mmwchan_fit_report_family(r, "colour") == nullptr);

    char *text = nullptr;
    REQUIRE(mmwchan_fit_report_to_json(r, &text) == MMWCHAN_OK);
    const json j = json::parse(take(text));
    CHECK(j["settings"]["captures"] == 500);

    mmwchan_fit_report *pooled = nullptr;
    o.pooling = MMWCHAN_POOLING_POOLED;
    REQUIRE(mmwchan_fit(t, &o, &pooled) == MMWCHAN_OK);
    REQUIRE(mmwchan_fit_report_to_json(pooled, &text) == MMWCHAN_OK);
    CHECK(json::parse(take(text))["settings"]["mode"] == "pooled");

    mmwchan_fit_report_free(pooled);
    mmwchan_fit_report_free(r);
    mmwchan_traces_free(t);
    mmwchan_corpus_free(c);
    mmwchan_profile_free(p);
}

TEST_CASE("validation and calibration")
{
    mmwchan_profile *p = nullptr;
    REQUIRE(mmwchan_profile_builtin("exp-hall-80", &p) == MMWCHAN_OK);
    const mmwchan_profile *list[] = {p};
    mmwchan_validation *v = nullptr;
    REQUIRE(mmwchan_validate(list, 1, 20000, 1, 0.15, 1.0, 0, &v) == MMWCHAN_OK);
    CHECK(mmwchan_validation_passed(v) == 1);
    char *text = nullptr;
    REQUIRE(mmwchan_validation_table(v, &text) == MMWCHAN_OK);
    CHECK(take(text).find("exp-hall-80") != std::string::npos);
    mmwchan_validation_free(v);

    REQUIRE(mmwchan_validate(list, 1, 20000, 1, 0.0, 0.0, 0, &v) == MMWCHAN_OK);
    CHECK(mmwchan_validation_passed(v) == 0);
    REQUIRE(mmwchan_validation_to_json(v, &text) == MMWCHAN_OK);
    CHECK(json::parse(take(text))["pass"] == false);
    mmwchan_validation_free(v);
    CHECK(mmwchan_validate(list, 1, 0, 1, 0.15, 1.0, 0, &v) == MMWCHAN_INPUT_ERROR);

    mmwchan_profile *cal = nullptr;
    const char *targets = R"({"schema_version":1,"targets":{"paths_per_cluster":{"q1":2,"median":4,"q3":7}}})";
    REQUIRE(mmwchan_calibrate("ExperimentalHall", 80, targets, &cal) == MMWCHAN_OK);
    REQUIRE(mmwchan_profile_to_json(cal, &text) == MMWCHAN_OK);
    const json j = json::parse(take(text));
    CHECK(j["provenance"].get<std::string>().find("supplied by the caller") != std::string::npos);
    mmwchan_profile_free(cal);

    CHECK(mmwchan_calibrate("ExperimentalHall", 80, R"({"targets":{"num_clusters":{"q1":3,"median":2,"q3":1}}})",
                            &cal) == MMWCHAN_INPUT_ERROR);
    CHECK(mmwchan_calibrate("Attic", 80, nullptr, &cal) == MMWCHAN_INPUT_ERROR);
    CHECK(mmwchan_calibrate("Tunnel", 45, nullptr, &cal) == MMWCHAN_INPUT_ERROR);
    mmwchan_profile_free(p);
}

TEST_CASE("metrics CSV")
{
    mmwchan_traces *t = nullptr;
    REQUIRE(mmwchan_traces_parse("{\"location\":\"a\",\"beam_id\":0,\"scenario\":\"Tunnel\",\"beamwidth_deg\":7,"
                                 "\"taps\":[[0,1],[1e-9,1]]}\n",
                                 &t) == MMWCHAN_OK);
    auto o = mmwchan_metrics_options_default();
    CHECK(o.bandwidth == 2.16e9);
    char *csv = nullptr;
    REQUIRE(mmwchan_metrics_csv(t, &o, 1, &csv) == MMWCHAN_OK);
    const std::string text = take(csv);
    std::istringstream in(text);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header.rfind("capture_index,location,beam_id,taps,delay_spread_s", 0) == 0);
    // two equal taps 1 ns apart: RMS delay spread is 0.5 ns
    const auto c4 = row.find(',', row.find(',', row.find(',', row.find(',') + 1) + 1) + 1);
    CHECK(std::stod(row.substr(c4 + 1)) == doctest::Approx(5e-10).epsilon(1e-12));
    CHECK(row.rfind("0,a,0,2,", 0) == 0);

    o.points = 1;
    CHECK(mmwchan_metrics_csv(t, &o, 1, &csv) == MMWCHAN_INPUT_ERROR);
    mmwchan_traces_free(t);
}
