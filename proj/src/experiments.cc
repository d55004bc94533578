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


#include "pstherm/experiments.h"

#include <map>
#include <stdexcept>
#include <string>

#include "pstherm/bit_matrix.h"
#include "pstherm/parallel.h"
#include "pstherm/rng.h"

namespace pstherm {

Source parse_source(std::string_view name) {
    if (name == "algorithm") {
        return Source::kAlgorithm;
    }
    if (name == "oracle") {
        return Source::kOracle;
    }
    if (name == "initial") {
        return Source::kInitial;
    }
    throw std::invalid_argument("unknown source '" + std::string(name) + "'");
}

std::string_view source_name(Source s) {
    switch (s) {
        case Source::kAlgorithm:
            return "algorithm";
        case Source::kOracle:
            return "oracle";
        case Source::kInitial:
            return "initial";
    }
    return "unknown";
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) {
    return derive_stream_key(master_seed, "trial", index);
}

CopyTrials run_copy_trials(const TrialConfig &cfg) {
    const GenParams &gp = cfg.params;
    const bool signs_only = cfg.algorithm == Algorithm::kSign;
    CopyTrials out;
    out.finals.assign(cfg.trials, CopyEnsemble(gp.n, gp.t));
    out.first_group_rank.assign(cfg.trials, 0);
    out.first_group_full_rank.assign(cfg.trials, false);
    out.all_groups_full_rank.assign(cfg.trials, false);
    out.distinct.assign(cfg.trials, false);
    out.gates.assign(cfg.trials, 0);
    out.unit_depth.assign(cfg.trials, 0);
    out.decomposed_depth.assign(cfg.trials, 0);
    out.ccx_equivalents.assign(cfg.trials, 0);

    parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
        Rng copy_rng(cfg.seed, "copies", i);
        const std::size_t init_k = (signs_only || cfg.source == Source::kOracle) ? gp.n : gp.k;
        CopyEnsemble e = sample_initial_copies(gp.n, init_k, gp.t, copy_rng);
        if (cfg.source == Source::kOracle) {
            if (signs_only) {
                for (std::size_t c = 0; c < gp.t; ++c) {
                    e.set_sign(c, copy_rng.fair_bit() ? -1 : 1);
                }
            }
        } else if (cfg.source == Source::kAlgorithm) {
            Circuit generated;
            if (cfg.fixed_circuit == nullptr) {
                GenParams trial = gp;
                trial.seed = trial_seed(cfg.seed, i);
                generated = generate(cfg.algorithm, trial);
            }
            const Circuit &c = cfg.fixed_circuit != nullptr ? *cfg.fixed_circuit : generated;
            if (c.n != gp.n) {
                throw std::invalid_argument("run_copy_trials: circuit n does not match");
            }
            if (cfg.diagnostics) {
                ConditionMatrices diag = apply_circuit_with_diagnostics(e, c);
                bool all_full = true;
                for (const auto &[group, x] : diag.by_group) {
                    const bool full = is_full_row_rank(x);
                    all_full = all_full && full;
                    if (group == 0) {
                        out.first_group_rank[i] = rank(x);
                        out.first_group_full_rank[i] = full;
                    }
                }
                out.all_groups_full_rank[i] = all_full;
            } else {
                e.apply(c);
            }
            out.gates[i] = c.gate_count();
            out.unit_depth[i] = depth(c, DepthModel::kUnit);
            out.decomposed_depth[i] = depth(c, DepthModel::kDecomposed);
            out.ccx_equivalents[i] = ccx_equivalent_count(c);
        }
        out.distinct[i] = e.all_distinct();
        out.finals[i] = std::move(e);
    });
    return out;
}

SubsetState subset_trial(const SubsetTrialConfig &cfg, std::size_t index) {
    Rng rng(cfg.seed, cfg.tag, index);
    switch (cfg.source) {
        case Source::kOracle:
            return random_subset_phase_state(cfg.bits.n, cfg.bits.k, rng);
        case Source::kInitial:
            return initial_subset_state(cfg.bits.n, cfg.bits.k);
        case Source::kAlgorithm:
            break;
    }
    SubsetState s = initial_subset_state(cfg.bits.n, cfg.bits.k);
    if (cfg.with_signs) {
        s.apply(subset_phase_circuit(cfg.bit_algorithm, cfg.bits, cfg.signs, rng));
    } else {
        s.apply(generate(cfg.bit_algorithm, cfg.bits, rng));
    }
    return s;
}

std::vector<SubsetState> run_subset_trials(const SubsetTrialConfig &cfg) {
    std::vector<SubsetState> out(cfg.samples);
    parallel_for(cfg.samples, cfg.threads, [&](std::size_t i) { out[i] = subset_trial(cfg, i); });
    return out;
}

MomentMatrix subset_trial_moment(const SubsetTrialConfig &cfg, std::size_t t) {
    if (cfg.samples == 0) {
        throw std::invalid_argument("subset_trial_moment: no samples");
    }
    MomentAccumulator acc(cfg.bits.n, t);
    constexpr std::size_t kBatch = 256;
    std::vector<SubsetState> batch;
    for (std::size_t start = 0; start < cfg.samples; start += kBatch) {
        const std::size_t count = std::min(kBatch, cfg.samples - start);
        batch.assign(count, SubsetState());
        parallel_for(count, cfg.threads, [&](std::size_t i) { batch[i] = subset_trial(cfg, start + i); });
        for (const auto &s : batch) {
            acc.add(s);
        }
    }
    return acc.result();
}

}  // namespace pstherm
