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

#include "pstherm/copy_ensemble.h"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pstherm {

CopyEnsemble::CopyEnsemble(std::size_t n, std::size_t t)
    : n_(n), t_(t), words_((t + 63) / 64), planes_(n * words_, 0), signs_(words_, 0) {}

CopyEnsemble CopyEnsemble::from_strings(const std::vector<std::string> &copies) {
    std::size_t n = copies.empty() ? 0 : copies.front().size();
    CopyEnsemble e(n, copies.size());
    for (std::size_t c = 0; c < copies.size(); ++c) {
        if (copies[c].size() != n) {
            throw std::invalid_argument("CopyEnsemble::from_strings: ragged copies");
        }
        for (std::size_t s = 0; s < n; ++s) {
            e.set_bit(c, s, copies[c][s] == '1');
        }
    }
    return e;
}

CopyEnsemble CopyEnsemble::from_integers(std::size_t n, std::span<const std::uint64_t> copies) {
    if (n > 64) {
        throw std::invalid_argument("CopyEnsemble::from_integers: n must be at most 64");
    }
    CopyEnsemble e(n, copies.size());
    for (std::size_t c = 0; c < copies.size(); ++c) {
        for (std::size_t s = 0; s < n; ++s) {
            e.set_bit(c, s, (copies[c] >> s) & 1u);
        }
    }
    return e;
}

void CopyEnsemble::set_bit(std::size_t copy, std::size_t site, bool value) {
    auto &w = planes_[site * words_ + copy / 64];
    std::uint64_t bit = std::uint64_t{1} << (copy % 64);
    w = value ? (w | bit) : (w & ~bit);
}

void CopyEnsemble::set_sign(std::size_t copy, int sign) {
    auto &w = signs_[copy / 64];
    std::uint64_t bit = std::uint64_t{1} << (copy % 64);
    w = sign < 0 ? (w | bit) : (w & ~bit);
}

std::vector<std::uint64_t> CopyEnsemble::copy_words(std::size_t copy) const {
    std::vector<std::uint64_t> out((n_ + 63) / 64, 0);
    for (std::size_t s = 0; s < n_; ++s) {
        if (bit(copy, s)) {
            out[s / 64] |= std::uint64_t{1} << (s % 64);
        }
    }
    return out;
}

std::uint64_t CopyEnsemble::copy_integer(std::size_t copy) const {
    if (n_ > 64) {
        throw std::logic_error("CopyEnsemble::copy_integer: n exceeds 64");
    }
    return n_ == 0 ? 0 : copy_words(copy)[0];
}

std::string CopyEnsemble::copy_string(std::size_t copy) const {
    std::string out(n_, '0');
    for (std::size_t s = 0; s < n_; ++s) {
        if (bit(copy, s)) {
            out[s] = '1';
        }
    }
    return out;
}

bool CopyEnsemble::all_distinct() const {
    std::vector<std::vector<std::uint64_t>> rows;
    rows.reserve(t_);
    for (std::size_t c = 0; c < t_; ++c) {
        rows.push_back(copy_words(c));
    }
    std::sort(rows.begin(), rows.end());
    return std::adjacent_find(rows.begin(), rows.end()) == rows.end();
}

std::uint64_t CopyEnsemble::valid_mask(std::size_t word) const {
    if (word + 1 < words_ || t_ % 64 == 0) {
        return ~std::uint64_t{0};
    }
    return (std::uint64_t{1} << (t_ % 64)) - 1;
}

std::vector<std::uint64_t> CopyEnsemble::condition_vector(std::span<const ControlTerm> condition) const {
    std::vector<std::uint64_t> out(words_);
    for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t cond = valid_mask(w);
        for (const auto &term : condition) {
            std::uint64_t plane = planes_[term.site * words_ + w];
            cond &= term.value ? plane : ~plane;
        }
        out[w] = cond;
    }
    return out;
}

void CopyEnsemble::apply(const Gate &g) {
    for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t cond = valid_mask(w);
        for (const auto &term : g.controls) {
            std::uint64_t plane = planes_[term.site * words_ + w];
            cond &= term.value ? plane : ~plane;
        }
        std::uint64_t &target = planes_[g.target * words_ + w];
        if (g.kind == GateKind::kMcx) {
            target ^= cond;
        } else {
            cond &= g.target_value ? target : ~target;
            signs_[w] ^= cond;
        }
    }
}

void CopyEnsemble::apply(const Layer &layer) {
    for (const auto &g : layer.gates()) {
        apply(g);
    }
}

void CopyEnsemble::apply(const Circuit &c) {
    if (c.n != n_) {
        throw std::invalid_argument("CopyEnsemble::apply: circuit n does not match ensemble n");
    }
    for (const auto &layer : c.layers) {
        apply(layer);
    }
}

CopyEnsemble sample_initial_copies(std::size_t n, std::size_t k, std::size_t t, Rng &rng) {
    if (k > n) {
        throw std::invalid_argument("sample_initial_copies: k must not exceed n");
    }
    if (k < 63 && t > (std::uint64_t{1} << k)) {
        throw std::invalid_argument("sample_initial_copies: t exceeds 2^k");
    }
    CopyEnsemble e(n, t);
    if (k <= 62) {
        auto chosen = rng.sample_subset(std::uint64_t{1} << k, t);
        for (std::size_t c = 0; c < t; ++c) {
            for (std::size_t s = 0; s < k; ++s) {
                e.set_bit(c, s, (chosen[c] >> s) & 1u);
            }
        }
        return e;
    }
    std::set<std::vector<std::uint64_t>> seen;
    const std::size_t words = (k + 63) / 64;
    for (std::size_t c = 0; c < t;) {
        std::vector<std::uint64_t> draw(words);
        for (std::size_t w = 0; w < words; ++w) {
            draw[w] = rng.next_u64();
        }
        if (k % 64 != 0) {
            draw.back() &= (std::uint64_t{1} << (k % 64)) - 1;
        }
        if (!seen.insert(draw).second) {
            continue;
        }
        for (std::size_t s = 0; s < k; ++s) {
            e.set_bit(c, s, (draw[s / 64] >> (s % 64)) & 1u);
        }
        ++c;
    }
    return e;
}

CopyEnsemble apply_gate(CopyEnsemble e, const Gate &g) {
    e.apply(g);
    return e;
}

CopyEnsemble apply_circuit(CopyEnsemble e, const Circuit &c) {
    e.apply(c);
    return e;
}

BitMatrix condition_matrix(const CopyEnsemble &e, std::span<const std::vector<ControlTerm>> conditions) {
    BitMatrix columns(0, e.t());
    for (const auto &cond : conditions) {
        columns.append_row(e.condition_vector(cond));
    }
    return columns.transposed();
}

ConditionMatrices apply_circuit_with_diagnostics(CopyEnsemble &e, const Circuit &c) {
    if (c.n != e.n()) {
        throw std::invalid_argument("apply_circuit_with_diagnostics: circuit n does not match ensemble n");
    }
    std::vector<const ConditionRound *> rounds;
    rounds.reserve(c.rounds.size());
    for (const auto &r : c.rounds) {
        rounds.push_back(&r);
    }
    std::stable_sort(rounds.begin(), rounds.end(),
                     [](const ConditionRound *a, const ConditionRound *b) { return a->layer < b->layer; });

    std::map<std::uint32_t, BitMatrix> columns;
    std::size_t next = 0;
    auto record_until = [&](std::size_t layer) {
        for (; next < rounds.size() && rounds[next]->layer <= layer; ++next) {
            auto [it, inserted] = columns.try_emplace(rounds[next]->group, 0, e.t());
            it->second.append_row(e.condition_vector(rounds[next]->condition));
        }
    };
    for (std::size_t li = 0; li < c.layers.size(); ++li) {
        record_until(li);
        e.apply(c.layers[li]);
    }
    record_until(c.layers.size());

    ConditionMatrices out;
    for (auto &[group, cols] : columns) {
        out.by_group.emplace(group, cols.transposed());
    }
    return out;
}

}  // namespace pstherm
