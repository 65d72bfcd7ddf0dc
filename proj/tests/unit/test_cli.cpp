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

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{
    const fs::path &scratch()
    {
        static const fs::path dir = []
        {
            auto d = fs::temp_directory_path() / ("mmwchan_cli_" + std::to_string(::getpid()));
            fs::remove_all(d);
            fs::create_directories(d);
            return d;
        }();
        return dir;
    }

    struct Cleanup
    {
        ~Cleanup() { fs::remove_all(scratch()); }
    } cleanup;

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    struct Run
    {
        int code = -1;
        std::string out;
        std::string err;
    };

    // `env` is prepended verbatim (e.g. "MMWCHAN_THREADS=4 ").
    Run run(const std::string &args, const std::string &env = "")
    {
        const auto out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
        const std::string cmd = env + "'" MMWCHAN_CLI "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
        const int status = std::system(cmd.c_str());
        Run r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

    std::string path(const std::string &name) { return (scratch() / name).string(); }
}

TEST_CASE("generate is byte-identical across runs and thread counts")
{
    const auto a = run("generate --profile exp-hall-20 --n 400 --seed 11 --out " + path("a.jsonl"), "MMWCHAN_THREADS=1 ");
    const auto b = run("generate --profile exp-hall-20 --n 400 --seed 11 --out " + path("b.jsonl"), "MMWCHAN_THREADS=4 ");
    const auto c = run("--threads 3 generate --profile exp-hall-20 --n 400 --seed 11 --out " + path("c.jsonl"));
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    REQUIRE(c.code == 0);
    const auto text = slurp(path("a.jsonl"));
    CHECK(!text.empty());
    CHECK(text == slurp(path("b.jsonl")));
    CHECK(text == slurp(path("c.jsonl")));

    const auto other = run("generate --profile exp-hall-20 --n 400 --seed 12 --out " + path("d.jsonl"));
    REQUIRE(other.code == 0);
    CHECK(text != slurp(path("d.jsonl")));

    const json m = json::parse(slurp(path("a.jsonl.manifest.json")));
    CHECK(m["command"] == "generate");
    CHECK(m["seed"] == 11);
    CHECK(m["threads"] == 1);
    CHECK(m["profile_ids"][0] == "exp-hall-20");
    CHECK(m["schema_version"] == 1);
}

TEST_CASE("generate edge cases and failures")
{
    auto r = run("generate --profile tunnel-7 --n 0 --out " + path("empty.jsonl"));
    CHECK(r.code == 0);
    CHECK(fs::exists(path("empty.jsonl")));
    CHECK(fs::file_size(path("empty.jsonl")) == 0);

    r = run("generate --profile attic-20 --out " + path("x.jsonl"));
    CHECK(r.code == 2);
    CHECK(r.err.find("attic-20") != std::string::npos);

    r = run("generate --profile tunnel-7 --out /nonexistent/dir/x.jsonl");
    CHECK(r.code == 3);

    r = run("generate --out " + path("x.jsonl"));
    CHECK(r.code == 2);

    r = run("generate --profile tunnel-7 --n 3 --format realizations-json --out " + path("r.json"));
    REQUIRE(r.code == 0);
    CHECK(json::parse(slurp(path("r.json")))["realizations"].size() == 3);
}

TEST_CASE("profile files feed generate")
{
    REQUIRE(run("calibrate --scenario Tunnel --beamwidth 80 --out " + path("t80.json")).code == 0);
    REQUIRE(run("generate --profile-file " + path("t80.json") + " --n 50 --seed 3 --out " + path("pf.jsonl")).code == 0);
    REQUIRE(run("generate --profile tunnel-80 --n 50 --seed 3 --out " + path("pb.jsonl")).code == 0);
    CHECK(slurp(path("pf.jsonl")) == slurp(path("pb.jsonl")));
}

TEST_CASE("fit round trip and failures")
{
    REQUIRE(run("generate --profile exp-hall-80 --n 300 --seed 4 --out " + path("fit.jsonl")).code == 0);
    auto r = run("fit --in " + path("fit.jsonl") + " --out " + path("fit.json"));
    REQUIRE(r.code == 0);
    const json report = json::parse(slurp(path("fit.json")));
    CHECK(report["settings"]["captures"] == 300);
    CHECK(slurp(path("fit.json.ecdf.csv")).rfind("parameter,value,empirical_cdf\n", 0) == 0);
    CHECK(json::parse(slurp(path("fit.json.manifest.json")))["command"] == "fit");

    // stdout when --out is omitted
    r = run("fit --in " + path("fit.jsonl") + " --csv " + path("fit2.csv"));
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out) == report);

    std::ofstream(path("blank.jsonl")) << "";
    r = run("fit --in " + path("blank.jsonl") + " --out " + path("b.json"));
    CHECK(r.code == 2);

    std::ofstream(path("bad.jsonl"))
        << "{\"location\":\"a\",\"beam_id\":0,\"scenario\":\"Tunnel\",\"beamwidth_deg\":7,\"taps\":[[0,1]]}\n"
        << "{\"location\":\"a\",\"beam_id\":0,\"scenario\":\"Tunnel\",\"beamwidth_deg\":7,\"taps\":[[0,1]]}\n"
        << "{\"location\":\"a\",\"beam_id\":0,\"taps\":oops}\n";
    r = run("fit --in " + path("bad.jsonl") + " --out " + path("b.json"));
    CHECK(r.code == 2);
    CHECK(r.err.find("line 3") != std::string::npos);

    r = run("fit --in " + path("missing.jsonl") + " --out " + path("b.json"));
    CHECK(r.code == 3);
}

TEST_CASE("validate and calibrate exit codes")
{
    auto r = run("validate --profile exp-hall-80 --n 20000 --out " + path("v.json"));
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);
    CHECK(json::parse(slurp(path("v.json")))["pass"] == true);

    r = run("validate --profile exp-hall-80 --n 20000 --tolerance 0 --count-tolerance 0");
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL") != std::string::npos);

    std::ofstream(path("bad_targets.json"))
        << R"({"schema_version":1,"targets":{"num_clusters":{"q1":4,"median":3,"q3":2}}})";
    r = run("calibrate --scenario Tunnel --beamwidth 7 --targets " + path("bad_targets.json") + " --out " +
            path("c.json"));
    CHECK(r.code == 2);

    r = run("calibrate --scenario Attic --beamwidth 7 --out " + path("c.json"));
    CHECK(r.code == 2);
}

TEST_CASE("metrics and profile listing")
{
    REQUIRE(run("generate --profile side-tunnel-20 --n 100 --seed 2 --out " + path("m.jsonl")).code == 0);
    const auto a = run("metrics --in " + path("m.jsonl") + " --out " + path("m1.csv"), "MMWCHAN_THREADS=1 ");
    const auto b = run("metrics --in " + path("m.jsonl") + " --out " + path("m2.csv"), "MMWCHAN_THREADS=4 ");
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    const auto csv = slurp(path("m1.csv"));
    CHECK(csv == slurp(path("m2.csv")));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 101);

    CHECK(run("metrics --in " + path("m.jsonl") + " --points 1").code == 2);

    const auto list = run("profiles list --json");
    REQUIRE(list.code == 0);
    CHECK(json::parse(list.out).size() == 8);
}
