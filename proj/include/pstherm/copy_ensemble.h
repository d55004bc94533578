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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pstherm/bit_matrix.h"
#include "pstherm/circuit.h"
#include "pstherm/rng.h"

namespace pstherm {

/// t n-bit strings with one sign each, stored bit-sliced: for every site a
/// plane of ceil(t/64) words holds that bit of all copies. A gate is then a
/// masked AND over its control planes followed by one XOR into the target
/// plane (or into the sign plane).
class CopyEnsemble {
  public:
    CopyEnsemble() = default;
    /// All-zero copies with sign +1.
    CopyEnsemble(std::size_t n, std::size_t t);

    /// Copies given as '0'/'1' strings; character i is site i.
    static CopyEnsemble from_strings(const std::vector<std::string> &copies);
    /// Copies given as integers (bit i is site i). Requires n <= 64.
    static CopyEnsemble from_integers(std::size_t n, std::span<const std::uint64_t> copies);

    std::size_t n() const { return n_; }
    std::size_t t() const { return t_; }
    std::size_t words_per_site() const { return words_; }

    bool bit(std::size_t copy, std::size_t site) const {
        return (planes_[site * words_ + copy / 64] >> (copy % 64)) & 1u;
    }
    void set_bit(std::size_t copy, std::size_t site, bool value);
    /// +1 or -1.
    int sign(std::size_t copy) const { return ((signs_[copy / 64] >> (copy % 64)) & 1u) ? -1 : 1; }
    void set_sign(std::size_t copy, int sign);

    std::span<const std::uint64_t> plane(std::size_t site) const { return {planes_.data() + site * words_, words_}; }
    /// Bit c set iff copy c has sign -1.
    std::span<const std::uint64_t> sign_plane() const { return signs_; }

    /// Copy c packed as ceil(n/64) words.
    std::vector<std::uint64_t> copy_words(std::size_t copy) const;
    /// Copy c as an integer; requires n <= 64.
    std::uint64_t copy_integer(std::size_t copy) const;
    std::string copy_string(std::size_t copy) const;

    bool all_distinct() const;

    void apply(const Gate &g);
    void apply(const Layer &layer);
    void apply(const Circuit &c);

    /// Bit c set iff copy c satisfies every term of `condition`.
    std::vector<std::uint64_t> condition_vector(std::span<const ControlTerm> condition) const;

    bool operator==(const CopyEnsemble &) const = default;

  private:
    std::uint64_t valid_mask(std::size_t word) const;

    std::size_t n_ = 0;
    std::size_t t_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> planes_;
    std::vector<std::uint64_t> signs_;
};

/// t distinct uniform strings from {0,1}^k x 0^{n-k} in uniformly random order,
/// all signs +1. Uses Floyd's subset sampler for k <= 62 and a set-backed draw
/// beyond that. Throws if t > 2^k or k > n.
CopyEnsemble sample_initial_copies(std::size_t n, std::size_t k, std::size_t t, Rng &rng);

CopyEnsemble apply_gate(CopyEnsemble e, const Gate &g);
CopyEnsemble apply_circuit(CopyEnsemble e, const Circuit &c);

/// X[p][q] = 1 iff copy p satisfies condition q, evaluated against `e` as is.
BitMatrix condition_matrix(const CopyEnsemble &e, std::span<const std::vector<ControlTerm>> conditions);

/// Condition matrices rebuilt inline while a circuit runs: each logged round is
/// evaluated right before its layer. One t x rounds matrix per round group.
struct ConditionMatrices {
    std::map<std::uint32_t, BitMatrix> by_group;
};

/// Applies `c` to `e` in place and returns the per-group condition matrices.
ConditionMatrices apply_circuit_with_diagnostics(CopyEnsemble &e, const Circuit &c);

}  // namespace pstherm
