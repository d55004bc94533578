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


#include "pstherm/copy_ensemble.h"

#include <set>

#include "gtest/gtest.h"
#include "pstherm/bit_matrix.h"
#include "oracles.h"
#include "pstherm/generators.h"

using namespace pstherm;

using pstherm::testing::random_circuit;

TEST(copy_ensemble, strings_round_trip) {
    auto e = CopyEnsemble::from_strings({"0110", "1000", "0001"});
    EXPECT_EQ(e.n(), 4u);
    EXPECT_EQ(e.t(), 3u);
    EXPECT_EQ(e.copy_string(0), "0110");
    EXPECT_EQ(e.copy_string(2), "0001");
    EXPECT_EQ(e.copy_integer(0), 0b0110u);
    EXPECT_TRUE(e.all_distinct());
    EXPECT_EQ(e.sign(1), 1);
}

TEST(copy_ensemble, ccx_on_second_and_third_bits_targets_fifth) {
    // Sites are 0-based here: the conditions sit on sites 1, 2 and the target on 4.
    auto e = CopyEnsemble::from_strings({"01100", "01000", "11101", "00100"});
    e.apply(Gate::mcx({{1, true}, {2, true}}, 4));
    EXPECT_EQ(e.copy_string(0), "01101");
    EXPECT_EQ(e.copy_string(1), "01000");
    EXPECT_EQ(e.copy_string(2), "11100");
    EXPECT_EQ(e.copy_string(3), "00100");
}

TEST(copy_ensemble, polarized_controls) {
    auto e = CopyEnsemble::from_strings({"00", "10"});
    e.apply(Gate::mcx({{0, false}}, 1));
    EXPECT_EQ(e.copy_string(0), "01");
    EXPECT_EQ(e.copy_string(1), "10");
}

TEST(copy_ensemble, mcx_is_an_involution) {
    Rng rng(1, "t", 0);
    auto e = sample_initial_copies(70, 70, 100, rng);
    auto g = Gate::mcx({{3, true}, {65, false}, {10, true}}, 40);
    EXPECT_EQ(apply_gate(apply_gate(e, g), g), e);
}

TEST(copy_ensemble, signed_mcz_changes_only_signs) {
    auto e = CopyEnsemble::from_strings({"110", "111", "010", "101"});
    auto after = apply_gate(e, Gate::signed_mcz({{0, true}}, 2, true));
    for (std::size_t c = 0; c < 4; ++c) {
        EXPECT_EQ(after.copy_string(c), e.copy_string(c));
    }
    EXPECT_EQ(after.sign(0), 1);
    EXPECT_EQ(after.sign(1), -1);
    EXPECT_EQ(after.sign(2), 1);
    EXPECT_EQ(after.sign(3), -1);
}

TEST(copy_ensemble, empty_circuit_is_identity) {
    Rng rng(2, "t", 0);
    auto e = sample_initial_copies(10, 6, 20, rng);
    Circuit c;
    c.n = 10;
    EXPECT_EQ(apply_circuit(e, c), e);
}

TEST(copy_ensemble, gate_order_within_a_layer_is_irrelevant) {
    Rng rng(3, "t", 0);
    for (int rep = 0; rep < 20; ++rep) {
        auto c = random_circuit(12, 5, rng);
        auto e = sample_initial_copies(12, 12, 64, rng);
        Circuit reversed = c;
        for (auto &layer : reversed.layers) {
            std::vector<Gate> gates(layer.gates().rbegin(), layer.gates().rend());
            layer = Layer::checked(std::move(gates));
        }
        EXPECT_EQ(apply_circuit(e, c), apply_circuit(e, reversed));
    }
}

TEST(copy_ensemble, circuits_are_bijections_on_all_basis_strings) {
    Rng rng(4, "t", 0);
    for (std::size_t n : {3u, 6u, 10u}) {
        for (int rep = 0; rep < 5; ++rep) {
            auto c = random_circuit(n, 8, rng);
            std::vector<std::uint64_t> all(std::size_t{1} << n);
            for (std::size_t i = 0; i < all.size(); ++i) {
                all[i] = i;
            }
            auto e = apply_circuit(CopyEnsemble::from_integers(n, all), c);
            EXPECT_TRUE(e.all_distinct());
        }
    }
}

TEST(copy_ensemble, thermalizer_preserves_distinctness) {
    GenParams gp;
    gp.n = 48;
    gp.k = 10;
    gp.t = 40;
    gp.alpha = 2.0;
    gp.m = 3;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        gp.seed = seed;
        Rng rng(seed, "copies", 0);
        auto e = sample_initial_copies(gp.n, gp.k, gp.t, rng);
        EXPECT_TRUE(apply_circuit(e, gate_opt_thermalizer(gp)).all_distinct());
        EXPECT_TRUE(apply_circuit(e, depth_opt_thermalizer(gp)).all_distinct());
    }
}

TEST(sample_initial_copies, properties) {
    Rng rng(5, "t", 0);
    auto full = sample_initial_copies(8, 3, 8, rng);
    std::set<std::uint64_t> seen;
    for (std::size_t c = 0; c < 8; ++c) {
        seen.insert(full.copy_integer(c));
    }
    EXPECT_EQ(seen.size(), 8u);
    EXPECT_EQ(*seen.rbegin(), 7u);
    EXPECT_THROW(sample_initial_copies(8, 3, 9, rng), std::invalid_argument);
    EXPECT_THROW(sample_initial_copies(4, 5, 2, rng), std::invalid_argument);

    std::size_t ones = 0;
    const std::size_t reps = 2000;
    for (std::size_t r = 0; r < reps; ++r) {
        auto e = sample_initial_copies(100, 70, 4, rng);
        EXPECT_TRUE(e.all_distinct());
        for (std::size_t c = 0; c < 4; ++c) {
            for (std::size_t s = 70; s < 100; ++s) {
                ASSERT_FALSE(e.bit(c, s));
            }
            ones += e.bit(c, 0) ? 1 : 0;
            EXPECT_EQ(e.sign(c), 1);
        }
    }
    EXPECT_NEAR(static_cast<double>(ones) / (4.0 * reps), 0.5, 0.03);
}

TEST(condition_matrix, zero_controls_give_all_ones_column) {
    auto e = CopyEnsemble::from_strings({"01", "10", "11"});
    std::vector<std::vector<ControlTerm>> conditions = {{}, {{0, true}}};
    auto x = condition_matrix(e, conditions);
    EXPECT_EQ(x, BitMatrix::from_strings({"10", "11", "11"}));
}

TEST(condition_matrix, entry_frequency_is_two_to_minus_m) {
    Rng rng(6, "t", 0);
    for (std::size_t m : {1u, 2u, 3u}) {
        std::size_t hits = 0;
        std::size_t total = 0;
        for (int rep = 0; rep < 400; ++rep) {
            auto e = sample_initial_copies(20, 20, 64, rng);
            std::vector<std::vector<ControlTerm>> conds;
            for (int q = 0; q < 8; ++q) {
                std::vector<ControlTerm> terms;
                for (auto s : rng.sample_distinct(0, 19, m)) {
                    terms.push_back({s, rng.fair_bit()});
                }
                conds.push_back(terms);
            }
            auto x = condition_matrix(e, conds);
            hits += x.count_ones();
            total += 64 * 8;
        }
        EXPECT_NEAR(static_cast<double>(hits) / total, 1.0 / (1u << m), 0.01) << m;
    }
}

TEST(condition_matrix, inline_diagnostics_match_replay) {
    GenParams gp;
    gp.n = 24;
    gp.k = 8;
    gp.t = 4;
    gp.alpha = 3.0;
    gp.m = 2;
    gp.seed = 9;
    auto c = gate_opt_thermalizer(gp);
    Rng rng(9, "copies", 0);
    auto start = sample_initial_copies(gp.n, gp.k, gp.t, rng);

    auto e = start;
    auto diag = apply_circuit_with_diagnostics(e, c);
    EXPECT_EQ(e, apply_circuit(start, c));
    ASSERT_EQ(diag.by_group.size(), 2u);

    // Stage 1 conditions only read the first k sites, which stage 1 never
    // targets, so the initial ensemble reproduces the group-0 matrix.
    std::vector<std::vector<ControlTerm>> first;
    for (const auto &r : c.rounds) {
        if (r.group == 0) {
            first.push_back(r.condition);
        }
    }
    EXPECT_EQ(diag.by_group.at(0), condition_matrix(start, first));
    EXPECT_EQ(diag.by_group.at(0).rows(), 4u);
    EXPECT_EQ(diag.by_group.at(0).cols(), 12u);
}

TEST(condition_matrix, single_copy_records_its_own_satisfaction) {
    auto e = CopyEnsemble::from_strings({"101"});
    std::vector<std::vector<ControlTerm>> conds = {{{0, true}}, {{1, true}}, {{2, true}, {1, false}}};
    EXPECT_EQ(condition_matrix(e, conds), BitMatrix::from_strings({"101"}));
}
