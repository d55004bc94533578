// Copyright 2026 The pstherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using pstherm::cli::run;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    Result r;
    r.code = run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("pstherm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string &name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, pipeline_is_byte_identical_across_runs) {
    std::string first[3];
    for (int pass = 0; pass < 2; ++pass) {
        auto c = call({"--seed", "11", "gen", "--algorithm", "gate-opt", "--n", "32", "--k", "16", "--t", "4",
                       "--alpha", "4", "--m", "2", "--out", path("c.json")});
        ASSERT_EQ(c.code, 0) << c.err;
        auto s = call({"--seed", "11", "sim", "--circuit", path("c.json"), "--trials", "50", "--report",
                       path("s.json")});
        ASSERT_EQ(s.code, 0) << s.err;
        auto v = call({"--seed", "11", "verify", "--algorithm", "gate-opt", "--n", "32", "--k", "16", "--t", "4",
                       "--alpha", "4", "--m", "2", "--trials", "1000", "--report", path("v.json")});
        ASSERT_EQ(v.code, 0) << v.err;
        std::string now[3] = {slurp(path("c.json")), slurp(path("s.json")), slurp(path("v.json"))};
        for (int i = 0; i < 3; ++i) {
            ASSERT_FALSE(now[i].empty());
            if (pass == 0) {
                first[i] = now[i];
            } else {
                EXPECT_EQ(first[i], now[i]) << i;
            }
        }
    }
    auto circuit = nlohmann::json::parse(slurp(path("c.json")));
    EXPECT_EQ(circuit["n"], 32);
    EXPECT_EQ(circuit["meta"]["seed"], 11);
    EXPECT_TRUE(circuit["meta"].contains("rng"));
}

TEST_F(CliTest, strict_premise_violation_exits_2) {
    auto r = call({"gen", "--algorithm", "gate-opt", "--n", "32", "--k", "8", "--t", "6", "--alpha", "2", "--m", "2",
                   "--theorem", "bits-few", "--strict"});
    EXPECT_EQ(r.code, pstherm::cli::kExitPremise);
    EXPECT_NE(r.err.find("t <= k/2"), std::string::npos);
    auto lax = call({"gen", "--algorithm", "gate-opt", "--n", "32", "--k", "8", "--t", "6", "--alpha", "2", "--m",
                     "2", "--theorem", "bits-few"});
    EXPECT_EQ(lax.code, 0);
    EXPECT_NE(lax.err.find("t <= k/2"), std::string::npos);
}

TEST_F(CliTest, strict_verify_failure_exits_3) {
    // Premise-compliant parameters, so only the test outcome can trip --strict.
    auto r = call({"verify", "--algorithm", "gate-opt", "--n", "16", "--k", "12", "--t", "2", "--alpha", "3", "--m",
                   "2", "--source", "initial", "--tests", "marginal", "--trials", "1000", "--strict"});
    EXPECT_EQ(r.code, pstherm::cli::kExitTestFailure);
    EXPECT_NE(r.err.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, input_errors_exit_1) {
    EXPECT_EQ(call({"sim", "--trials", "3"}).code, 1);
    std::ofstream(path("bad.json")) << "{\"n\": 4, \"layers\": [";
    EXPECT_EQ(call({"sim", "--circuit", path("bad.json")}).code, 1);
    EXPECT_EQ(call({"sim", "--circuit", path("missing.json")}).code, 1);
    // 2^n choose t too large for a dense moment.
    EXPECT_EQ(call({"moments", "--n", "14", "--k", "4", "--t", "3", "--samples", "10"}).code, 1);
    EXPECT_EQ(call({"verify", "--algorithm", "gate-opt", "--n", "16", "--k", "8", "--t", "2", "--trials", "10"}).code,
              1);
    EXPECT_EQ(call({"gen", "--algorithm", "nope", "--n", "8", "--t", "2"}).code, 1);
}

TEST_F(CliTest, bounds_csv_layout) {
    auto r = call({"bounds", "--l", "4", "--m", "8", "--trials", "200"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string meta, header, row;
    std::getline(in, meta);
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(meta.rfind("# {", 0), 0u);
    EXPECT_EQ(header, "p,l,m,epsilon,bound_closed,bound_sequential,mc_estimate,mc_ci_lo,mc_ci_hi,trials,seed");
    EXPECT_EQ(row.rfind("0.25,4,8,0.5,", 0), 0u) << row;
}

TEST_F(CliTest, help_exits_0) { EXPECT_EQ(call({"--help"}).code, 0); }
