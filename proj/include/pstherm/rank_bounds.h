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

namespace pstherm {

/// Parameters of the full-rank lower bound for an l x m Bernoulli(p) matrix
/// over GF(2). `epsilon` is the Chernoff slack on row weights.
struct RankBoundParams {
    double p = 0.25;
    std::size_t l = 1;
    std::size_t m = 1;
    double epsilon = 0.5;

    double q() const { return 1.0 - p; }
    double p_tilde() const { return (1.0 + epsilon) * p; }
    double q_tilde() const { return 1.0 - p_tilde(); }
    /// s = (p q)^{q~}
    double s() const;

    /// Throws std::invalid_argument when p is outside (0, 1/2], epsilon is
    /// outside (0, 1), or (1 + epsilon) p >= 1.
    void validate() const;
};

/// Closed-form lower bound on the probability that an l x m Bernoulli(p)
/// matrix has full row rank:
///
///   exp( -q^{m+1} (q^{-l} - 1) / p  -  s p^{q~ m + 1} q^{p~ m - 1} / (1 - s)^2 )
///
/// Valid for p <= 1/4 and large l; evaluated as written otherwise. l = 0 gives 1.
double full_rank_probability_bound(const RankBoundParams &params);

struct SequentialBound {
    double value = 0.0;
    /// False when some factor was negative before clamping, i.e. the
    /// parameters are outside the regime where the product is a bound.
    bool valid = true;
};

/// Finite product over r = 0..l-1 of
///   1 - q^{m-r} - r p^{q~(m-r)+1} q^{p~ m + q~ r - 1},
/// each factor clamped to [0, 1].
SequentialBound full_rank_probability_sequential(const RankBoundParams &params);

/// Pr[weight of a Bernoulli(p) row of length m > (1 + eps) m p] <= exp(-eps^2 m p / (2 + eps)).
double chernoff_row_weight_bound(std::size_t m, double p, double epsilon);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double half_width() const { return 0.5 * (hi - lo); }
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

struct MonteCarloRank {
    double estimate = 0.0;
    Interval ci95;
    std::size_t full_rank = 0;
    std::size_t trials = 0;
};

/// Full-row-rank frequency of rows x cols Bernoulli(p) matrices. Trial i draws
/// from stream (seed, "rank-mc", i).
MonteCarloRank monte_carlo_full_rank(std::size_t rows, std::size_t cols, double p, std::size_t trials,
                                     std::uint64_t seed, std::size_t threads = 1);

}  // namespace pstherm
