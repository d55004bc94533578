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


#include "pstherm/analysis.h"

#include <cmath>

#include "gtest/gtest.h"
#include "pstherm/circuit.h"

using namespace pstherm;

namespace {

bool has_premise(const std::vector<Premise> &list, const std::string &name) {
    for (const auto &p : list) {
        if (p.name == name) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST(theorem1, monotone_in_alpha_and_tends_to_one) {
    double prev = 0.0;
    for (double alpha : {2.0, 3.0, 4.0, 6.0, 8.0, 12.0}) {
        double v = theorem1_pt(alpha, 16);
        EXPECT_GE(v, prev);
        prev = v;
    }
    EXPECT_GT(prev, 0.999999);
    EXPECT_NEAR(theorem1_pt(4.0, 16), 0.99999700989437226389, 1e-12);
}

TEST(theorem2, reference_values) {
    EXPECT_NEAR(theorem2_pt(10.0, 2), 0.99991413301773350623, 1e-13);
    EXPECT_NEAR(theorem2_pt(8.0, 16), 0.99139098160325662008, 1e-12);
    // Only the leading factor survives once the dependent term is negligible.
    EXPECT_LT(theorem2_pt(10.0, 2), 0.99992199316836693084);
    EXPECT_THROW(theorem2_pt(4.0, 1), std::invalid_argument);
}

TEST(predicted_cost, unit_depth_matches_generators) {
    struct Case {
        Algorithm a;
        GenParams gp;
    };
    std::vector<Case> cases = {
        {Algorithm::kGateOpt, {64, 24, 8, 6.0, 2, 1, 1}},
        {Algorithm::kDepthOpt, {64, 8, 4, 3.0, 2, 1, 2}},
        {Algorithm::kDepthOpt, {256, 8, 8, 4.0, 3, 1, 3}},
        {Algorithm::kSign, {64, 64, 8, 8.0, 1, 64, 4}},
        {Algorithm::kSign, {60, 60, 16, 5.0, 6, 10, 5}},
    };
    for (const auto &c : cases) {
        auto circuit = generate(c.a, c.gp);
        auto pred = predicted_cost(c.a, c.gp);
        if (c.a == Algorithm::kGateOpt) {
            EXPECT_EQ(pred.unit_depth, pred.gates);
        } else {
            EXPECT_EQ(static_cast<double>(depth(circuit, DepthModel::kUnit)), pred.unit_depth)
                << algorithm_name(c.a);
        }
    }
}

TEST(predicted_cost, depth_opt_stages) {
    GenParams gp{64, 8, 4, 2.0, 2, 1, 0};
    auto pred = predicted_cost(Algorithm::kDepthOpt, gp);
    EXPECT_EQ(pred.stages, depth_opt_stage_count(64, 8, 2));
    EXPECT_NEAR(pred.stages_asymptotic, std::log(8.0) / std::log(1.5), 1e-12);
}

TEST(premises, violations_are_named) {
    GenParams gp{64, 16, 12, 1.0, 2, 1, 0};
    auto v = premise_violations(Theorem::kBitsFewCopies, gp);
    EXPECT_TRUE(has_premise(v, "t <= k/2"));

    GenParams many{64, 16, 16, 9.0, 3, 1, 0};
    EXPECT_TRUE(has_premise(premise_violations(Theorem::kBitsManyCopies, many), "m = ceil(log2 t)"));
    many.m = 4;
    EXPECT_TRUE(premise_violations(Theorem::kBitsManyCopies, many).empty());

    GenParams signs{64, 64, 8, 8.0, 1, 64, 0};
    EXPECT_TRUE(premise_violations(Theorem::kSignsFewCopies, signs).empty());
    signs.p = 32;
    EXPECT_TRUE(has_premise(premise_violations(Theorem::kSignsFewCopies, signs), "p = n"));
}

TEST(premises, infer_and_default_alpha) {
    GenParams gp{64, 24, 8, 1.0, 2, 1, 0};
    EXPECT_EQ(infer_theorem(Algorithm::kGateOpt, gp), Theorem::kBitsFewCopies);
    EXPECT_EQ(infer_theorem(Algorithm::kDepthOpt, gp), Theorem::kDepthFewCopies);
    gp.m = 3;
    EXPECT_EQ(infer_theorem(Algorithm::kGateOpt, gp), Theorem::kBitsManyCopies);
    gp.m = 2;
    // ceil(2 ln 64) = 9, capped to floor(24/2)/8 = 1.5
    EXPECT_DOUBLE_EQ(default_alpha(Theorem::kBitsFewCopies, gp), 1.5);
    EXPECT_DOUBLE_EQ(default_alpha(Theorem::kBitsManyCopies, gp), 9.0);
    for (auto th : {Theorem::kBitsFewCopies, Theorem::kBitsManyCopies, Theorem::kDepthFewCopies,
                    Theorem::kDepthManyCopies, Theorem::kSignsFewCopies, Theorem::kSignsManyCopies}) {
        EXPECT_EQ(parse_theorem(theorem_name(th)), th);
    }
    EXPECT_THROW(parse_theorem("nope"), std::invalid_argument);
}

TEST(loglog_slope, recovers_power_law) {
    std::vector<double> x = {2, 4, 8, 16, 32};
    std::vector<double> y;
    for (double v : x) {
        y.push_back(3.0 * std::pow(v, 1.7));
    }
    EXPECT_NEAR(loglog_slope(x, y), 1.7, 1e-12);
    std::vector<double> one = {1};
    EXPECT_THROW(loglog_slope(one, one), std::invalid_argument);
}

TEST(parse_grid, expands_rules) {
    auto grid = parse_grid("algorithm=depth-opt;n=256..1024;t=4,8;k=log2n;m=log2t;alpha=2ln", 5);
    ASSERT_EQ(grid.size(), 6u);
    EXPECT_EQ(grid[0].params.n, 256u);
    EXPECT_EQ(grid[0].params.k, 8u);
    EXPECT_EQ(grid[0].params.m, 2u);
    EXPECT_EQ(grid[1].params.m, 3u);
    EXPECT_EQ(grid[5].params.n, 1024u);
    EXPECT_DOUBLE_EQ(grid[0].params.alpha, std::ceil(2.0 * std::log(256.0)));
    EXPECT_EQ(grid[0].params.seed, 5u);

    auto signs = parse_grid("algorithm=sign;n=64;t=8;m=log2n;p=n/log2n;alpha=4", 1);
    ASSERT_EQ(signs.size(), 1u);
    EXPECT_EQ(signs[0].params.m, 6u);
    EXPECT_EQ(signs[0].params.p, 10u);

    EXPECT_THROW(parse_grid("n=64", 1), std::invalid_argument);
    EXPECT_THROW(parse_grid("n=64;t=4;bogus=1", 1), std::invalid_argument);
    EXPECT_THROW(parse_grid("n=64;t=4;alpha=x", 1), std::invalid_argument);
}
