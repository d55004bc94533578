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
#include <string>
#include <vector>

#include "pstherm/rng.h"

namespace pstherm {

/// Dense matrix over GF(2). Rows are packed into 64-bit words, least
/// significant bit first; padding bits past `cols` are always zero.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    /// Rows given as '0'/'1' strings of equal length.
    static BitMatrix from_strings(const std::vector<std::string> &rows);
    static BitMatrix identity(std::size_t size);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return words_per_row_; }

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * words_per_row_ + c / 64] >> (c % 64)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool value);
    void flip(std::size_t r, std::size_t c) { data_[r * words_per_row_ + c / 64] ^= std::uint64_t{1} << (c % 64); }

    std::span<std::uint64_t> row(std::size_t r) { return {data_.data() + r * words_per_row_, words_per_row_}; }
    std::span<const std::uint64_t> row(std::size_t r) const {
        return {data_.data() + r * words_per_row_, words_per_row_};
    }

    /// Appends a row from packed words. Extra bits beyond `cols` are masked off.
    void append_row(std::span<const std::uint64_t> words);

    void swap_rows(std::size_t a, std::size_t b);
    /// row[dst] ^= row[src]
    void add_row(std::size_t dst, std::size_t src);

    BitMatrix transposed() const;
    std::size_t count_ones() const;
    std::string to_string() const;

    bool operator==(const BitMatrix &other) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_per_row_ = 0;
    std::vector<std::uint64_t> data_;
};

/// GF(2) rank by Gaussian elimination on a working copy.
std::size_t rank(const BitMatrix &m);

/// True iff rank == rows. Shapes with rows > cols cannot have full row rank
/// and simply return false.
bool is_full_row_rank(const BitMatrix &m);

/// i.i.d. Bernoulli(p) entries. p = 1/2 and p = 1/4 draw whole words; other p
/// draw one uniform double per entry.
BitMatrix sample_bernoulli_matrix(std::size_t rows, std::size_t cols, double p, Rng &rng);

}  // namespace pstherm
