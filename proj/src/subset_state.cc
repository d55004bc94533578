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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pstherm {

namespace {

struct PackedGate {
    std::uint64_t control_mask = 0;
    std::uint64_t control_value = 0;
    std::uint64_t target_bit = 0;
    bool is_sign = false;
};

PackedGate pack(const Gate &g) {
    PackedGate out;
    for (const auto &c : g.controls) {
        out.control_mask |= std::uint64_t{1} << c.site;
        if (c.value) {
            out.control_value |= std::uint64_t{1} << c.site;
        }
    }
    out.target_bit = std::uint64_t{1} << g.target;
    if (g.kind == GateKind::kSignedMcz) {
        out.is_sign = true;
        out.control_mask |= out.target_bit;
        if (g.target_value) {
            out.control_value |= out.target_bit;
        }
    }
    return out;
}

}  // namespace

SubsetState::SubsetState(std::size_t n, std::size_t k, std::vector<std::uint64_t> images,
                         std::vector<std::int8_t> signs)
    : n_(n), k_(k), images_(std::move(images)), signs_(std::move(signs)) {
    if (n > 64 || k > n) {
        throw std::invalid_argument("SubsetState: requires k <= n <= 64");
    }
    if (k >= 32 || images_.size() != (std::size_t{1} << k) || signs_.size() != images_.size()) {
        throw std::invalid_argument("SubsetState: table must hold 2^k entries");
    }
}

void SubsetState::apply(const Gate &g) {
    if (g.target >= n_) {
        throw std::invalid_argument("SubsetState::apply: gate outside register");
    }
    const PackedGate pg = pack(g);
    for (std::size_t b = 0; b < images_.size(); ++b) {
        if ((images_[b] & pg.control_mask) != pg.control_value) {
            continue;
        }
        if (pg.is_sign) {
            signs_[b] = static_cast<std::int8_t>(-signs_[b]);
        } else {
            images_[b] ^= pg.target_bit;
        }
    }
}

void SubsetState::apply(const Circuit &c) {
    if (c.n != n_) {
        throw std::invalid_argument("SubsetState::apply: circuit n does not match state n");
    }
    for (const auto &layer : c.layers) {
        for (const auto &g : layer.gates()) {
            apply(g);
        }
    }
}

bool SubsetState::images_distinct() const {
    std::vector<std::uint64_t> sorted(images_.begin(), images_.end());
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

SubsetState initial_subset_state(std::size_t n, std::size_t k) {
    if (k >= 32) {
        throw std::invalid_argument("initial_subset_state: k too large for an explicit table");
    }
    const std::size_t entries = std::size_t{1} << k;
    std::vector<std::uint64_t> images(entries);
    std::iota(images.begin(), images.end(), std::uint64_t{0});
    return SubsetState(n, k, std::move(images), std::vector<std::int8_t>(entries, 1));
}

SubsetState apply_circuit(SubsetState s, const Circuit &c) {
    s.apply(c);
    return s;
}

CopyEnsemble to_copy_ensemble(const SubsetState &s) {
    CopyEnsemble e = CopyEnsemble::from_integers(s.n(), s.images());
    for (std::size_t b = 0; b < s.size(); ++b) {
        e.set_sign(b, s.signs()[b]);
    }
    return e;
}

SubsetState random_subset_phase_state(std::size_t n, std::size_t k, Rng &rng) {
    if (n > 62) {
        throw std::invalid_argument("random_subset_phase_state: n must be at most 62");
    }
    auto images = rng.sample_subset(std::uint64_t{1} << n, std::size_t{1} << k);
    std::vector<std::int8_t> signs(images.size());
    for (auto &sg : signs) {
        sg = rng.fair_bit() ? -1 : 1;
    }
    return SubsetState(n, k, std::move(images), std::move(signs));
}

std::vector<double> to_statevector(const SubsetState &s) {
    if (s.n() > kMaxStatevectorQubits) {
        throw std::length_error("to_statevector: n = " + std::to_string(s.n()) + " exceeds the 24-qubit guard");
    }
    std::vector<double> amps(std::size_t{1} << s.n(), 0.0);
    const double scale = std::pow(2.0, -0.5 * static_cast<double>(s.k()));
    for (std::size_t b = 0; b < s.size(); ++b) {
        amps[s.images()[b]] += scale * s.signs()[b];
    }
    return amps;
}

void check_moment_dimension(std::size_t n, std::size_t t) {
    if (t == 0 || n * t > 12) {
        std::string hint = t == 0 ? "t must be at least 1" : "choose n * t <= 12, e.g. n = " + std::to_string(12 / t);
        throw std::length_error("moment dimension 2^(n t) exceeds 4096 (n = " + std::to_string(n) +
                                ", t = " + std::to_string(t) + "); " + hint);
    }
}

MomentAccumulator::MomentAccumulator(std::size_t n, std::size_t t) : n_(n), t_(t) {
    check_moment_dimension(n, t);
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << (n * t));
    sum_ = Eigen::MatrixXd::Zero(dim, dim);
}

void MomentAccumulator::add(const SubsetState &s) {
    if (s.n() != n_) {
        throw std::invalid_argument("MomentAccumulator::add: state n does not match");
    }
    const std::size_t entries = s.size();
    std::size_t count = 1;
    for (std::size_t j = 0; j < t_; ++j) {
        count *= entries;
    }
    index_.assign(count, 0);
    amplitude_.assign(count, 0.0);
    const double scale = std::pow(2.0, -0.5 * static_cast<double>(s.k() * t_));
    for (std::size_t flat = 0; flat < count; ++flat) {
        std::size_t rest = flat;
        std::uint64_t idx = 0;
        int sign = 1;
        for (std::size_t j = 0; j < t_; ++j) {
            std::size_t b = rest % entries;
            rest /= entries;
            idx |= s.images()[b] << (j * n_);
            sign *= s.signs()[b];
        }
        index_[flat] = idx;
        amplitude_[flat] = scale * sign;
    }
    for (std::size_t c = 0; c < count; ++c) {
        const auto col = static_cast<Eigen::Index>(index_[c]);
        const double ac = amplitude_[c];
        for (std::size_t r = 0; r < count; ++r) {
            sum_(static_cast<Eigen::Index>(index_[r]), col) += amplitude_[r] * ac;
        }
    }
    ++samples_;
}

MomentMatrix MomentAccumulator::result() const {
    if (samples_ == 0) {
        throw std::logic_error("MomentAccumulator::result: no samples");
    }
    return {n_, t_, sum_ / static_cast<double>(samples_)};
}

MomentMatrix empirical_moment(std::span<const SubsetState> samples, std::size_t t) {
    if (samples.empty()) {
        throw std::invalid_argument("empirical_moment: no samples");
    }
    MomentAccumulator acc(samples.front().n(), t);
    for (const auto &s : samples) {
        acc.add(s);
    }
    return acc.result();
}

MomentMatrix haar_moment(std::size_t n, std::size_t t) {
    if (t > 3) {
        throw std::invalid_argument("haar_moment: t must be at most 3");
    }
    check_moment_dimension(n, t);
    const std::size_t dim = std::size_t{1} << (n * t);
    const std::uint64_t factor_mask = (std::uint64_t{1} << n) - 1;
    std::vector<std::size_t> perm(t);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<std::vector<std::size_t>> perms;
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    const double weight = 1.0 / static_cast<double>(perms.size());
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
        for (const auto &pi : perms) {
            std::uint64_t permuted = 0;
            for (std::size_t j = 0; j < t; ++j) {
                permuted |= ((idx >> (pi[j] * n)) & factor_mask) << (j * n);
            }
            proj(static_cast<Eigen::Index>(permuted), static_cast<Eigen::Index>(idx)) += weight;
        }
    }
    proj /= proj.trace();
    return {n, t, std::move(proj)};
}

double trace_distance(const MomentMatrix &a, const MomentMatrix &b) {
    if (a.dimension() != b.dimension()) {
        throw std::invalid_argument("trace_distance: dimension mismatch");
    }
    Eigen::MatrixXd diff = a.data - b.data;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(diff, Eigen::EigenvaluesOnly);
    double td = 0.5 * solver.eigenvalues().cwiseAbs().sum();
    return std::clamp(td, 0.0, 1.0);
}

double min_eigenvalue(const MomentMatrix &m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.data, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

MixedBound mixed_bound(double p_fail, double td_sigma) {
    if (!(p_fail >= 0.0 && p_fail <= 1.0) || !(td_sigma >= 0.0 && td_sigma <= 1.0)) {
        throw std::invalid_argument("mixed_bound: inputs must lie in [0, 1]");
    }
    return {p_fail + (1.0 - p_fail) * td_sigma, p_fail + td_sigma};
}

}  // namespace pstherm
