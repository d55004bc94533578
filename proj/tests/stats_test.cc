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


#include "pstherm/stats.h"

#include <cmath>
#include <functional>

#include "gtest/gtest.h"

using namespace pstherm;

namespace {

std::vector<CopyEnsemble> oracle_copies(std::size_t n, std::size_t t, std::size_t trials, bool signs,
                                        std::uint64_t seed) {
    std::vector<CopyEnsemble> out;
    for (std::size_t i = 0; i < trials; ++i) {
        Rng rng(seed, "oracle", i);
        auto e = sample_initial_copies(n, n, t, rng);
        if (signs) {
            for (std::size_t c = 0; c < t; ++c) {
                e.set_sign(c, rng.fair_bit() ? -1 : 1);
            }
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<CopyEnsemble> frozen_copies(std::size_t n, std::size_t k, std::size_t t, std::size_t trials) {
    std::vector<CopyEnsemble> out;
    for (std::size_t i = 0; i < trials; ++i) {
        Rng rng(1, "frozen", i);
        out.push_back(sample_initial_copies(n, k, t, rng));
    }
    return out;
}

double multinomial_pmf(const std::vector<std::uint64_t> &counts) {
    double n = 0;
    double log_p = 0;
    for (auto c : counts) {
        n += static_cast<double>(c);
        log_p -= std::lgamma(static_cast<double>(c) + 1);
    }
    log_p += std::lgamma(n + 1) - n * std::log(static_cast<double>(counts.size()));
    return std::exp(log_p);
}

// P[sum n_i^2 >= observed] by enumerating every composition of N into `cells`.
double brute_force_tail(std::uint64_t total, std::size_t cells, std::uint64_t observed) {
    double tail = 0.0;
    std::vector<std::uint64_t> counts(cells, 0);
    std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t cell, std::uint64_t left) {
        if (cell + 1 == cells) {
            counts[cell] = left;
            std::uint64_t ss = 0;
            for (auto c : counts) {
                ss += c * c;
            }
            if (ss >= observed) {
                tail += multinomial_pmf(counts);
            }
            return;
        }
        for (std::uint64_t v = 0; v <= left; ++v) {
            counts[cell] = v;
            rec(cell + 1, left - v);
        }
    };
    rec(0, total);
    return tail;
}

}  // namespace

TEST(tv_distance, basics) {
    std::vector<std::uint64_t> counts = {5, 5};
    std::vector<double> uniform = {0.5, 0.5};
    EXPECT_DOUBLE_EQ(tv_distance(counts, uniform), 0.0);
    std::vector<std::uint64_t> left = {10, 0};
    std::vector<double> right = {0.0, 1.0};
    EXPECT_DOUBLE_EQ(tv_distance(left, right), 1.0);
    std::vector<double> three = {0.2, 0.3, 0.5};
    EXPECT_THROW(tv_distance(counts, three), std::invalid_argument);
}

TEST(tv_distance, fair_coin_noise_scale) {
    Rng rng(1, "t", 0);
    std::vector<std::uint64_t> counts(2, 0);
    for (int i = 0; i < 10000; ++i) {
        ++counts[rng.fair_bit() ? 1 : 0];
    }
    std::vector<double> uniform = {0.5, 0.5};
    EXPECT_LT(tv_distance(counts, uniform), 0.02);
}

TEST(chi_square, survival_function) {
    EXPECT_NEAR(chi_square_sf(3.841458820694124, 1), 0.05, 1e-12);
    EXPECT_NEAR(chi_square_sf(2.0, 2), std::exp(-1.0), 1e-12);
    EXPECT_DOUBLE_EQ(chi_square_sf(0.0, 3), 1.0);
}

TEST(exact_multinomial, matches_enumeration) {
    for (auto counts : {std::vector<std::uint64_t>{3, 2, 1}, std::vector<std::uint64_t>{6, 0, 0},
                        std::vector<std::uint64_t>{2, 2, 2}, std::vector<std::uint64_t>{1, 0, 4, 2}}) {
        std::uint64_t total = 0, ss = 0;
        for (auto c : counts) {
            total += c;
            ss += c * c;
        }
        auto exact = exact_uniform_multinomial_tail(counts);
        ASSERT_TRUE(exact.has_value());
        EXPECT_NEAR(*exact, brute_force_tail(total, counts.size(), ss), 1e-12);
    }
}

TEST(exact_multinomial, respects_budget) {
    std::vector<std::uint64_t> counts(5000, 1);
    EXPECT_FALSE(exact_uniform_multinomial_tail(counts, 1e3).has_value());
}

TEST(uniform_fit, chooses_method_by_expected_count) {
    std::vector<std::uint64_t> big = {100, 110, 90, 100};
    EXPECT_FALSE(uniform_fit(big).exact);
    std::vector<std::uint64_t> small = {2, 1, 0, 1};
    EXPECT_TRUE(uniform_fit(small).exact);
}

TEST(marginal_bias, oracle_passes_frozen_fails) {
    auto oracle = oracle_copies(20, 4, 2000, false, 2);
    EXPECT_TRUE(marginal_bias_test(oracle).passed);
    auto frozen = frozen_copies(20, 8, 4, 2000);
    auto report = marginal_bias_test(frozen);
    EXPECT_FALSE(report.passed);
    EXPECT_GE(report.detail["flagged"].get<std::size_t>(), 4u * 12u);
}

TEST(marginal_bias, requires_enough_trials) {
    auto few = oracle_copies(8, 2, 10, false, 3);
    EXPECT_THROW(marginal_bias_test(few), std::invalid_argument);
    TestOptions opt;
    opt.min_samples = 10;
    EXPECT_NO_THROW(marginal_bias_test(few, opt));
}

TEST(pairwise_xor, oracle_passes_identical_and_shared_flip_fail) {
    auto oracle = oracle_copies(16, 4, 2000, false, 4);
    EXPECT_TRUE(pairwise_xor_test(oracle).passed);

    // Two fixed copies moved by one shared random X layer: every bit is
    // uniform, but the pairwise XOR never changes.
    auto base = CopyEnsemble::from_strings({"0000000011111111", "0101010101010101"});
    std::vector<CopyEnsemble> shared;
    for (std::size_t i = 0; i < 2000; ++i) {
        Rng rng(5, "shared", i);
        auto e = base;
        for (std::uint32_t s = 0; s < 16; ++s) {
            if (rng.fair_bit()) {
                e.apply(Gate::mcx({}, s));
            }
        }
        shared.push_back(std::move(e));
    }
    EXPECT_TRUE(marginal_bias_test(shared).passed);
    EXPECT_FALSE(pairwise_xor_test(shared).passed);
}

TEST(sign_vector, oracle_passes_unsigned_fails) {
    auto oracle = oracle_copies(16, 8, 10000, true, 6);
    auto pass = sign_vector_test(oracle, 8);
    EXPECT_TRUE(pass.passed);
    ASSERT_TRUE(pass.p_value.has_value());
    EXPECT_GE(*pass.p_value, 0.0);
    EXPECT_LE(*pass.p_value, 1.0);
    auto unsigned_copies = oracle_copies(16, 8, 10000, false, 6);
    EXPECT_FALSE(sign_vector_test(unsigned_copies, 8).passed);
    EXPECT_THROW(sign_vector_test(oracle, 17), std::invalid_argument);
}

TEST(subset_uniformity, oracle_passes_initial_fails) {
    for (std::size_t t : {1u, 2u}) {
        std::vector<SubsetState> oracle, initial;
        for (std::size_t i = 0; i < 3000; ++i) {
            Rng rng(7, "subset", i);
            oracle.push_back(random_subset_phase_state(4, 2, rng));
            initial.push_back(initial_subset_state(4, 2));
        }
        auto good = subset_uniformity_test(oracle, t);
        EXPECT_TRUE(good.passed) << t;
        ASSERT_TRUE(good.tv.has_value());
        EXPECT_LT(*good.tv, 0.1);
        auto bad = subset_uniformity_test(initial, t);
        EXPECT_FALSE(bad.passed);
        EXPECT_GT(*bad.tv, 0.7);
    }
}

TEST(subset_uniformity, refuses_large_domains) {
    std::vector<SubsetState> samples(1000, initial_subset_state(20, 2));
    EXPECT_THROW(subset_uniformity_test(samples, 2), std::invalid_argument);
    EXPECT_THROW(subset_uniformity_test(samples, 3), std::invalid_argument);
}

TEST(reports, deterministic_and_serializable) {
    auto a = marginal_bias_test(oracle_copies(12, 3, 1000, false, 8));
    auto b = marginal_bias_test(oracle_copies(12, 3, 1000, false, 8));
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    auto j = to_json(a);
    EXPECT_EQ(j["test"], "marginal_bias");
    EXPECT_EQ(j["samples"], 1000);
}
