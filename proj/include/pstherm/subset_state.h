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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pstherm/circuit.h"
#include "pstherm/copy_ensemble.h"
#include "pstherm/rng.h"

namespace pstherm {

/// Subset phase state 2^{-k/2} sum_b sign(b) |image(b)>, b in {0,1}^k, with
/// the suffix parameter fixed to 0^{n-k}. Entry b of the table starts at
/// image b (as an integer, site i = bit i) with sign +1. Requires n <= 64.
class SubsetState {
  public:
    SubsetState() = default;
    SubsetState(std::size_t n, std::size_t k, std::vector<std::uint64_t> images, std::vector<std::int8_t> signs);

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    std::size_t size() const { return images_.size(); }
    std::span<const std::uint64_t> images() const { return images_; }
    std::span<const std::int8_t> signs() const { return signs_; }

    void apply(const Gate &g);
    void apply(const Circuit &c);

    bool images_distinct() const;

    bool operator==(const SubsetState &) const = default;

  private:
    std::size_t n_ = 0;
    std::size_t k_ = 0;
    std::vector<std::uint64_t> images_;
    std::vector<std::int8_t> signs_;
};

SubsetState initial_subset_state(std::size_t n, std::size_t k);
SubsetState apply_circuit(SubsetState s, const Circuit &c);

/// Table entries as copies of a CopyEnsemble (copy b = entry b).
CopyEnsemble to_copy_ensemble(const SubsetState &s);

/// Reference sampler: a uniformly random 2^k-subset of {0,1}^n with i.i.d.
/// uniform signs, in uniformly random order.
SubsetState random_subset_phase_state(std::size_t n, std::size_t k, Rng &rng);

inline constexpr std::size_t kMaxStatevectorQubits = 24;

/// Dense amplitudes of length 2^n. Throws std::length_error for n > 24.
std::vector<double> to_statevector(const SubsetState &s);

/// Ensemble-averaged t-fold projector. Factor j of a tensor index occupies
/// bits [j n, (j+1) n).
struct MomentMatrix {
    std::size_t n = 0;
    std::size_t t = 0;
    Eigen::MatrixXd data;

    std::size_t dimension() const { return static_cast<std::size_t>(data.rows()); }
};

inline constexpr std::size_t kMaxMomentDimension = 4096;

/// Throws std::length_error when 2^{n t} > 4096, naming a smaller choice.
void check_moment_dimension(std::size_t n, std::size_t t);

/// Streaming average of (|psi><psi|)^{(x) t}. Each state contributes its
/// 2^{k t} nonzero tensor amplitudes, so one update costs 2^{2 k t}.
class MomentAccumulator {
  public:
    MomentAccumulator(std::size_t n, std::size_t t);
    void add(const SubsetState &s);
    std::size_t samples() const { return samples_; }
    MomentMatrix result() const;

  private:
    std::size_t n_;
    std::size_t t_;
    std::size_t samples_ = 0;
    Eigen::MatrixXd sum_;
    std::vector<std::uint64_t> index_;
    std::vector<double> amplitude_;
};

MomentMatrix empirical_moment(std::span<const SubsetState> samples, std::size_t t);

/// Projector onto the symmetric subspace of t factors of dimension 2^n,
/// normalized to unit trace. Requires t <= 3.
MomentMatrix haar_moment(std::size_t n, std::size_t t);

/// Half the sum of absolute eigenvalues of A - B, clamped to [0, 1].
double trace_distance(const MomentMatrix &a, const MomentMatrix &b);

/// Smallest eigenvalue; used for positive-semidefiniteness checks.
double min_eigenvalue(const MomentMatrix &m);

struct MixedBound {
    /// p_fail * 1 + (1 - p_fail) * td_sigma
    double convex = 0.0;
    /// p_fail + td_sigma
    double simplified = 0.0;
};

/// Trace-distance bound for a mixture that fails with probability p_fail and
/// otherwise sits at distance td_sigma. Both inputs must lie in [0, 1].
MixedBound mixed_bound(double p_fail, double td_sigma);

}  // namespace pstherm
