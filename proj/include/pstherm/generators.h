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
#include <string>
#include <string_view>
#include <vector>

#include "pstherm/circuit.h"
#include "pstherm/rng.h"

namespace pstherm {

/// Generator parameters. `alpha * t` rounds are taken as ceil(alpha * t).
/// `p` is only read by the sign thermalizer.
struct GenParams {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t t = 1;
    double alpha = 1.0;
    std::size_t m = 2;
    std::size_t p = 1;
    std::uint64_t seed = 0;

    std::size_t rounds() const;
};

/// ceil(alpha * t), tolerant of floating-point noise in the product.
std::size_t rounds_for(double alpha, std::size_t t);

/// Output of one random multi-controlled draw.
struct RmcDraw {
    std::vector<ControlTerm> controls;
    std::vector<bool> mask;
};

/// m distinct sites uniformly from the 0-based window [lo, hi], each with a
/// fair polarity, plus a uniform mask over the n - (hi - lo + 1) sites outside
/// the window. Throws if m exceeds the window.
RmcDraw rmc(std::size_t n, std::size_t lo, std::size_t hi, std::size_t m, Rng &rng);

struct PrmcDraw {
    std::vector<std::vector<ControlTerm>> groups;
    std::vector<bool> apply;
};

/// m * p distinct sites from [lo, hi], split uniformly into p groups of m with
/// fair polarities, and one fair apply bit per group.
PrmcDraw prmc(std::size_t n, std::size_t lo, std::size_t hi, std::size_t m, std::size_t groups, Rng &rng);

/// Two stages of ceil(alpha t) rounds. Stage 1 draws controls from the first k
/// sites and targets every masked site in [k, n); stage 2 swaps the roles.
/// One gate per layer. Rounds are logged as group 0 (stage 1) and group 1.
Circuit gate_opt_thermalizer(const GenParams &gp, Rng &rng);
Circuit gate_opt_thermalizer(const GenParams &gp);

/// Staged growth of the control region [0, s): each stage spends ceil(alpha t)
/// layers of floor(s/m) parallel gates targeting s, s+1, ... (truncated at n),
/// then a closing stage controls from [k, n) and targets [0, k). Every layer is
/// emitted, even if no apply bit is set. Rounds are grouped by target site.
/// Requires m <= k < n and m * k <= n - k.
Circuit depth_opt_thermalizer(const GenParams &gp, Rng &rng);
Circuit depth_opt_thermalizer(const GenParams &gp);

/// ceil(alpha t / p) layers, each holding up to p signed MCZ gates whose
/// conditions partition m * p sites of [0, m p). The last site of each group is
/// the Z-type target and its polarity is the required target value. All rounds
/// are logged as group 0.
Circuit sign_thermalizer(std::size_t n, std::size_t p, double alpha, std::size_t t, std::size_t m, Rng &rng);

/// Number of growth stages depth_opt_thermalizer runs before its closing stage.
std::size_t depth_opt_stage_count(std::size_t n, std::size_t k, std::size_t m);

enum class Algorithm { kGateOpt, kDepthOpt, kSign };

Algorithm parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm a);

/// Dispatches on `a`; the sign thermalizer reads gp.p as its group count.
Circuit generate(Algorithm a, const GenParams &gp, Rng &rng);
Circuit generate(Algorithm a, const GenParams &gp);

/// Bit thermalizer followed by the sign thermalizer, i.e. a circuit that maps
/// the initial subset state to a pseudorandom subset phase state.
Circuit subset_phase_circuit(Algorithm bit_algorithm, const GenParams &bits, const GenParams &signs, Rng &rng);

}  // namespace pstherm
