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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pstherm/copy_ensemble.h"
#include "pstherm/subset_state.h"

namespace pstherm {

struct TestReport {
    std::string name;
    double statistic = 0.0;
    std::optional<double> p_value;
    std::optional<double> tv;
    std::size_t samples = 0;
    bool passed = false;
    /// Significance level (or TV ceiling) the decision used.
    double threshold = 0.0;
    std::uint64_t seed = 0;
    nlohmann::json detail = nlohmann::json::object();
};

nlohmann::json to_json(const TestReport &r);

struct TestOptions {
    /// Family-wise significance for each test.
    double significance = 1e-3;
    /// Tests refuse to run on fewer samples than this.
    std::size_t min_samples = 1000;
    /// Recorded in the report, and seeds any internal subsampling.
    std::uint64_t seed = 0;
};

/// (1/2) sum_i |counts_i / N - reference_i|.
double tv_distance(std::span<const std::uint64_t> counts, std::span<const double> reference);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double dof);

/// P[sum_i n_i^2 >= observed] for n ~ Multinomial(N, uniform over `cells`),
/// by dynamic programming over cells. Returns nullopt when the state space
/// would exceed `budget` transitions.
std::optional<double> exact_uniform_multinomial_tail(std::span<const std::uint64_t> counts,
                                                     double budget = 2e8);

/// Goodness of fit of `counts` to the uniform distribution: chi-square when
/// every expected count is at least 5, the exact multinomial tail otherwise
/// (falling back to chi-square if the exact computation is over budget).
struct UniformFit {
    double chi_square = 0.0;
    double p_value = 1.0;
    bool exact = false;
};
UniformFit uniform_fit(std::span<const std::uint64_t> counts);

/// Per (copy, site) frequency of bit = 1 against 1/2. A cell is flagged when
/// |z| exceeds max(4, Bonferroni-corrected two-sided normal quantile).
TestReport marginal_bias_test(std::span<const CopyEnsemble> ensembles, const TestOptions &opt = {});

/// Per (copy pair, site) frequency of XOR = 1 against 1/2, aggregated into
/// one chi-square statistic with one degree of freedom per cell.
TestReport pairwise_xor_test(std::span<const CopyEnsemble> ensembles, const TestOptions &opt = {});

/// Chi-square (or exact) test of the sign vector of the first `copies`
/// copies against the uniform distribution on {+1,-1}^copies. copies <= 16.
TestReport sign_vector_test(std::span<const CopyEnsemble> ensembles, std::size_t copies,
                            const TestOptions &opt = {});

/// Distribution of image t-subsets (t = 1 or 2) against the uniform
/// distribution over all t-subsets of {0,1}^n. The TV uses every t-subset of
/// every sample; the pass decision tests one uniformly chosen t-subset per
/// sample so that draws are independent. Requires binom(2^n, t) <= 1e5.
TestReport subset_uniformity_test(std::span<const SubsetState> samples, std::size_t t, const TestOptions &opt = {});

}  // namespace pstherm
