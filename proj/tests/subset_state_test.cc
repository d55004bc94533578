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


#include "pstherm/subset_state.h"

#include <cmath>
#include <numeric>
#include <set>

#include "gtest/gtest.h"
#include "oracles.h"
#include "pstherm/generators.h"

using namespace pstherm;
using pstherm::testing::random_circuit;

TEST(subset_state, initial_table) {
    auto s = initial_subset_state(4, 2);
    ASSERT_EQ(s.size(), 4u);
    for (std::size_t b = 0; b < 4; ++b) {
        EXPECT_EQ(s.images()[b], b);
        EXPECT_EQ(s.signs()[b], 1);
    }
    EXPECT_TRUE(s.images_distinct());
}

TEST(subset_state, x_gate_flips_every_image) {
    auto s = initial_subset_state(4, 2);
    Circuit c;
    c.n = 4;
    c.layers.push_back(Layer::checked({Gate::mcx({}, 3)}));
    s.apply(c);
    for (std::size_t b = 0; b < 4; ++b) {
        EXPECT_EQ(s.images()[b], b | 8u);
    }
}

TEST(subset_state, statevector_of_initial_state) {
    auto amps = to_statevector(initial_subset_state(3, 2));
    ASSERT_EQ(amps.size(), 8u);
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_DOUBLE_EQ(amps[i], i < 4 ? 0.5 : 0.0);
    }
}

TEST(subset_state, statevector_norm_and_support_under_random_circuits) {
    Rng rng(1, "t", 0);
    for (int rep = 0; rep < 20; ++rep) {
        auto s = apply_circuit(initial_subset_state(8, 3), random_circuit(8, 6, rng));
        auto amps = to_statevector(s);
        double norm = 0.0;
        std::size_t support = 0;
        for (double a : amps) {
            norm += a * a;
            support += a != 0.0 ? 1 : 0;
        }
        EXPECT_NEAR(norm, 1.0, 1e-12);
        EXPECT_EQ(support, 8u);
    }
    EXPECT_THROW(to_statevector(initial_subset_state(25, 2)), std::length_error);
}

TEST(subset_state, matches_copy_ensemble_evolution) {
    Rng rng(2, "t", 0);
    for (std::size_t n : {4u, 7u, 10u}) {
        for (int rep = 0; rep < 10; ++rep) {
            auto c = random_circuit(n, 6, rng);
            auto s = initial_subset_state(n, n);
            auto e = to_copy_ensemble(s);
            s.apply(c);
            e.apply(c);
            EXPECT_EQ(to_copy_ensemble(s), e);
            EXPECT_TRUE(s.images_distinct());
        }
    }
}

TEST(subset_state, oracle_sampler_draws_distinct_images) {
    Rng rng(3, "t", 0);
    auto s = random_subset_phase_state(6, 4, rng);
    EXPECT_EQ(s.size(), 16u);
    EXPECT_TRUE(s.images_distinct());
    for (auto v : s.images()) {
        EXPECT_LT(v, 64u);
    }
}

TEST(moments, dimension_guard) {
    EXPECT_NO_THROW(check_moment_dimension(6, 2));
    EXPECT_THROW(check_moment_dimension(7, 2), std::length_error);
    EXPECT_THROW(check_moment_dimension(5, 3), std::length_error);
    EXPECT_THROW(MomentAccumulator(13, 1), std::length_error);
}

TEST(moments, single_sample_is_a_pure_projector) {
    Rng rng(4, "t", 0);
    std::vector<SubsetState> one = {random_subset_phase_state(4, 2, rng)};
    auto m = empirical_moment(one, 1);
    EXPECT_NEAR(m.data.trace(), 1.0, 1e-12);
    EXPECT_NEAR((m.data * m.data - m.data).norm(), 0.0, 1e-12);
    EXPECT_GT(min_eigenvalue(m), -1e-9);
}

TEST(moments, tensor_index_layout) {
    // |psi> = (|0> + |1>)/sqrt 2 on n = 1; the t = 2 moment is the all-1/4 matrix.
    std::vector<SubsetState> one = {initial_subset_state(1, 1)};
    auto m = empirical_moment(one, 2);
    EXPECT_TRUE(m.data.isApprox(Eigen::MatrixXd::Constant(4, 4, 0.25)));
}

TEST(moments, uniform_ensemble_first_moment_is_maximally_mixed) {
    Rng rng(5, "t", 0);
    MomentAccumulator acc(3, 1);
    for (int i = 0; i < 20000; ++i) {
        acc.add(random_subset_phase_state(3, 1, rng));
    }
    auto m = acc.result();
    EXPECT_LT(trace_distance(m, haar_moment(3, 1)), 0.03);
    EXPECT_NEAR(m.data.trace(), 1.0, 1e-9);
}

TEST(haar_moment, first_moment_is_identity_over_d) {
    auto h = haar_moment(3, 1);
    EXPECT_TRUE(h.data.isApprox(Eigen::MatrixXd::Identity(8, 8) / 8.0));
}

TEST(haar_moment, two_copies_of_a_qubit) {
    Eigen::MatrixXd swap = Eigen::MatrixXd::Zero(4, 4);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            swap(b | (a << 1), a | (b << 1)) = 1.0;
        }
    }
    Eigen::MatrixXd expected = (Eigen::MatrixXd::Identity(4, 4) + swap) / 2.0 / 3.0;
    EXPECT_TRUE(haar_moment(1, 2).data.isApprox(expected));
}

TEST(haar_moment, trace_one_and_psd) {
    for (auto [n, t] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{4, 2}}) {
        auto h = haar_moment(static_cast<std::size_t>(n), static_cast<std::size_t>(t));
        EXPECT_NEAR(h.data.trace(), 1.0, 1e-12);
        EXPECT_GT(min_eigenvalue(h), -1e-9);
        // Symmetric-subspace dimension binom(d + t - 1, t).
        const double d = std::pow(2.0, n);
        const double dim = t == 2 ? d * (d + 1) / 2 : d * (d + 1) * (d + 2) / 6;
        EXPECT_NEAR((h.data * h.data).trace(), 1.0 / dim, 1e-12);
    }
    EXPECT_THROW(haar_moment(1, 4), std::invalid_argument);
}

TEST(trace_distance, identities) {
    auto h = haar_moment(2, 2);
    EXPECT_NEAR(trace_distance(h, h), 0.0, 1e-12);
    std::vector<SubsetState> a = {SubsetState(2, 0, {0}, {1})};
    std::vector<SubsetState> b = {SubsetState(2, 0, {3}, {1})};
    EXPECT_NEAR(trace_distance(empirical_moment(a, 1), empirical_moment(b, 1)), 1.0, 1e-12);
    EXPECT_THROW(trace_distance(haar_moment(2, 1), haar_moment(3, 1)), std::invalid_argument);
}

TEST(mixed_bound, arithmetic) {
    EXPECT_DOUBLE_EQ(mixed_bound(0.0, 0.3).convex, 0.3);
    EXPECT_DOUBLE_EQ(mixed_bound(0.2, 0.0).convex, 0.2);
    EXPECT_NEAR(mixed_bound(0.01, 0.02).convex, 0.0298, 1e-15);
    EXPECT_NEAR(mixed_bound(0.01, 0.02).simplified, 0.03, 1e-15);
    EXPECT_THROW(mixed_bound(1.5, 0.0), std::invalid_argument);
}
