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

#include "pstherm/rank_bounds.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pstherm/bit_matrix.h"
#include "pstherm/parallel.h"
#include "pstherm/rng.h"

namespace pstherm {

double RankBoundParams::s() const { return std::pow(p * q(), q_tilde()); }

void RankBoundParams::validate() const {
    if (!(p > 0.0 && p <= 0.5)) {
        throw std::invalid_argument("rank bound: p must lie in (0, 1/2]");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("rank bound: epsilon must lie in (0, 1)");
    }
    if (p_tilde() >= 1.0) {
        throw std::invalid_argument("rank bound: (1 + epsilon) p must be below 1");
    }
}

double full_rank_probability_bound(const RankBoundParams &params) {
    params.validate();
    if (params.l == 0) {
        return 1.0;
    }
    const long double p = params.p;
    const long double log_q = std::log1p(-p);
    const long double l = static_cast<long double>(params.l);
    const long double m = static_cast<long double>(params.m);
    const long double pt = params.p_tilde();
    const long double qt = 1.0L - pt;
    const long double s = std::pow(p * (1.0L - p), qt);

    // q^{m+1} (q^{-l} - 1) / p, with the bracket via expm1 to keep small l accurate.
    const long double zero_tail = std::exp((m + 1.0L) * log_q) * std::expm1(-l * log_q) / p;
    const long double dependent =
        s * std::exp((qt * m + 1.0L) * std::log(p) + (pt * m - 1.0L) * log_q) / ((1.0L - s) * (1.0L - s));
    return static_cast<double>(std::exp(-zero_tail - dependent));
}

SequentialBound full_rank_probability_sequential(const RankBoundParams &params) {
    params.validate();
    SequentialBound out{1.0, true};
    const long double p = params.p;
    const long double log_p = std::log(p);
    const long double log_q = std::log1p(-p);
    const long double m = static_cast<long double>(params.m);
    const long double pt = params.p_tilde();
    const long double qt = 1.0L - pt;
    long double product = 1.0L;
    for (std::size_t r = 0; r < params.l; ++r) {
        const long double rr = static_cast<long double>(r);
        long double factor = 1.0L - std::exp((m - rr) * log_q);
        if (r > 0) {
            factor -= rr * std::exp((qt * (m - rr) + 1.0L) * log_p + (pt * m + qt * rr - 1.0L) * log_q);
        }
        if (factor < 0.0L) {
            out.valid = false;
            factor = 0.0L;
        }
        product *= std::min(factor, 1.0L);
    }
    out.value = static_cast<double>(product);
    return out;
}

double chernoff_row_weight_bound(std::size_t m, double p, double epsilon) {
    return std::exp(-epsilon * epsilon * static_cast<double>(m) * p / (2.0 + epsilon));
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (phat + z2 / (2.0 * n)) / denom;
    const double spread = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    // The endpoints are exact at 0 and N successes; rounding can miss them.
    const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - spread);
    const double hi = successes == trials ? 1.0 : std::min(1.0, centre + spread);
    return {lo, hi};
}

MonteCarloRank monte_carlo_full_rank(std::size_t rows, std::size_t cols, double p, std::size_t trials,
                                     std::uint64_t seed, std::size_t threads) {
    if (trials == 0) {
        throw std::invalid_argument("monte_carlo_full_rank: trials must be positive");
    }
    std::vector<unsigned char> hit(trials, 0);
    parallel_for(trials, threads, [&](std::size_t i) {
        Rng rng(seed, "rank-mc", i);
        hit[i] = is_full_row_rank(sample_bernoulli_matrix(rows, cols, p, rng)) ? 1 : 0;
    });
    MonteCarloRank out;
    out.trials = trials;
    out.full_rank = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
    out.estimate = static_cast<double>(out.full_rank) / static_cast<double>(trials);
    out.ci95 = wilson_interval(out.full_rank, trials);
    return out;
}

}  // namespace pstherm
