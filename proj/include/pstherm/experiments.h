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
#include <string_view>
#include <vector>

#include "pstherm/circuit.h"
#include "pstherm/copy_ensemble.h"
#include "pstherm/generators.h"
#include "pstherm/subset_state.h"

namespace pstherm {

/// Where trial ensembles come from. kOracle samples the target distribution
/// directly; kInitial applies no circuit at all.
enum class Source { kAlgorithm, kOracle, kInitial };

Source parse_source(std::string_view name);
std::string_view source_name(Source s);

/// Generator seed used for trial `index` under `master_seed`.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index);

struct TrialConfig {
    Algorithm algorithm = Algorithm::kGateOpt;
    GenParams params;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    Source source = Source::kAlgorithm;
    /// Build condition matrices and record their ranks.
    bool diagnostics = false;
    /// When set, every trial runs this circuit instead of a fresh one.
    const Circuit *fixed_circuit = nullptr;
};

struct CopyTrials {
    std::vector<CopyEnsemble> finals;
    /// Rank of the group-0 condition matrix (0 without diagnostics).
    std::vector<std::size_t> first_group_rank;
    std::vector<bool> first_group_full_rank;
    std::vector<bool> all_groups_full_rank;
    std::vector<bool> distinct;
    std::vector<std::size_t> gates;
    std::vector<std::size_t> unit_depth;
    std::vector<std::size_t> decomposed_depth;
    std::vector<std::size_t> ccx_equivalents;
};

/// Runs t-copy trials. Bit thermalizers start from t random distinct strings
/// of {0,1}^k x 0^(n-k); the sign thermalizer starts from t random distinct
/// strings of {0,1}^n with all signs +1. Trial i draws its copies from stream
/// (seed, "copies", i) and its circuit from trial_seed(seed, i).
CopyTrials run_copy_trials(const TrialConfig &cfg);

/// Bit thermalizer, optionally followed by the sign thermalizer, applied to
/// the initial subset state. kOracle draws uniform subsets and signs.
struct SubsetTrialConfig {
    Algorithm bit_algorithm = Algorithm::kGateOpt;
    GenParams bits;
    bool with_signs = false;
    GenParams signs;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    Source source = Source::kAlgorithm;
    /// Stream tag, so two ensembles under one seed can be independent.
    std::string_view tag = "subset";
};

SubsetState subset_trial(const SubsetTrialConfig &cfg, std::size_t index);
std::vector<SubsetState> run_subset_trials(const SubsetTrialConfig &cfg);

/// Moment of a subset-trial ensemble accumulated one sample at a time, so the
/// samples themselves are never stored.
MomentMatrix subset_trial_moment(const SubsetTrialConfig &cfg, std::size_t t);

}  // namespace pstherm
