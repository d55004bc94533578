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
#include <vector>

#include "pstherm/bit_matrix.h"
#include "pstherm/circuit.h"
#include "pstherm/rng.h"

namespace pstherm::testing {

/// Rank from the explicit row span: the span is grown as a set of column
/// vectors (cols <= 20), and rank = log2 |span|.
inline std::size_t span_rank(const BitMatrix &m) {
    std::vector<char> in_span(std::size_t{1} << m.cols(), 0);
    std::vector<std::uint32_t> members = {0};
    in_span[0] = 1;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::uint32_t v = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            v |= static_cast<std::uint32_t>(m.get(r, c)) << c;
        }
        if (in_span[v]) {
            continue;
        }
        const std::size_t size = members.size();
        for (std::size_t i = 0; i < size; ++i) {
            std::uint32_t w = members[i] ^ v;
            in_span[w] = 1;
            members.push_back(w);
        }
    }
    std::size_t rank = 0;
    while ((std::size_t{1} << rank) < members.size()) {
        ++rank;
    }
    return rank;
}

/// Matrix whose entries are the low rows*cols bits of `code`, row-major.
inline BitMatrix matrix_from_code(std::size_t rows, std::size_t cols, std::uint64_t code) {
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m.set(r, c, (code >> (r * cols + c)) & 1u);
        }
    }
    return m;
}

/// Layers of random MCX and SignedMCZ gates (0 to 3 polarized controls) packed
/// over a random site order.
inline Circuit random_circuit(std::size_t n, std::size_t layers, Rng &rng) {
    Circuit c;
    c.n = n;
    for (std::size_t l = 0; l < layers; ++l) {
        auto sites = rng.sample_distinct(0, static_cast<std::uint32_t>(n - 1), n);
        Layer layer;
        std::size_t pos = 0;
        while (pos < n) {
            std::size_t controls = rng.uniform_below(4);
            if (pos + controls + 1 > n) {
                break;
            }
            std::vector<ControlTerm> terms;
            for (std::size_t i = 0; i < controls; ++i) {
                terms.push_back({sites[pos++], rng.fair_bit()});
            }
            if (rng.fair_bit()) {
                layer.add(Gate::mcx(std::move(terms), sites[pos++]));
            } else {
                layer.add(Gate::signed_mcz(std::move(terms), sites[pos++], rng.fair_bit()));
            }
        }
        c.layers.push_back(std::move(layer));
    }
    return c;
}

}  // namespace pstherm::testing
