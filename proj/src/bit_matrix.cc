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

#include "pstherm/bit_matrix.h"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace pstherm {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

std::uint64_t tail_mask(std::size_t cols) {
    std::size_t rem = cols % 64;
    return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

}  // namespace

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_per_row_(words_for(cols)), data_(rows * words_per_row_, 0) {}

BitMatrix BitMatrix::from_strings(const std::vector<std::string> &rows) {
    std::size_t cols = rows.empty() ? 0 : rows.front().size();
    BitMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw std::invalid_argument("BitMatrix::from_strings: ragged rows");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            char ch = rows[r][c];
            if (ch != '0' && ch != '1') {
                throw std::invalid_argument("BitMatrix::from_strings: expected '0' or '1'");
            }
            m.set(r, c, ch == '1');
        }
    }
    return m;
}

BitMatrix BitMatrix::identity(std::size_t size) {
    BitMatrix m(size, size);
    for (std::size_t i = 0; i < size; ++i) {
        m.set(i, i, true);
    }
    return m;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
    auto &w = data_[r * words_per_row_ + c / 64];
    std::uint64_t bit = std::uint64_t{1} << (c % 64);
    w = value ? (w | bit) : (w & ~bit);
}

void BitMatrix::append_row(std::span<const std::uint64_t> words) {
    if (words.size() < words_per_row_) {
        throw std::invalid_argument("BitMatrix::append_row: too few words");
    }
    data_.insert(data_.end(), words.begin(), words.begin() + static_cast<std::ptrdiff_t>(words_per_row_));
    if (words_per_row_ > 0) {
        data_.back() &= tail_mask(cols_);
    }
    ++rows_;
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) {
        return;
    }
    std::swap_ranges(row(a).begin(), row(a).end(), row(b).begin());
}

void BitMatrix::add_row(std::size_t dst, std::size_t src) {
    auto d = row(dst);
    auto s = row(src);
    for (std::size_t w = 0; w < words_per_row_; ++w) {
        d[w] ^= s[w];
    }
}

BitMatrix BitMatrix::transposed() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        auto src = row(r);
        for (std::size_t w = 0; w < words_per_row_; ++w) {
            std::uint64_t bits = src[w];
            while (bits) {
                std::size_t c = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
                t.set(c, r, true);
                bits &= bits - 1;
            }
        }
    }
    return t;
}

std::size_t BitMatrix::count_ones() const {
    std::size_t total = 0;
    for (auto w : data_) {
        total += static_cast<std::size_t>(std::popcount(w));
    }
    return total;
}

std::string BitMatrix::to_string() const {
    std::string out;
    out.reserve(rows_ * (cols_ + 1));
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out.push_back(get(r, c) ? '1' : '0');
        }
        out.push_back('\n');
    }
    return out;
}

std::size_t rank(const BitMatrix &m) {
    BitMatrix work = m;
    std::size_t pivot_row = 0;
    const std::size_t rows = work.rows();
    const std::size_t wpr = work.words_per_row();
    for (std::size_t word = 0; word < wpr && pivot_row < rows; ++word) {
        for (int bit = 0; bit < 64 && pivot_row < rows; ++bit) {
            const std::uint64_t mask = std::uint64_t{1} << bit;
            std::size_t found = rows;
            for (std::size_t r = pivot_row; r < rows; ++r) {
                if (work.row(r)[word] & mask) {
                    found = r;
                    break;
                }
            }
            if (found == rows) {
                continue;
            }
            work.swap_rows(pivot_row, found);
            auto pivot = work.row(pivot_row);
            for (std::size_t r = found + 1; r < rows; ++r) {
                auto target = work.row(r);
                if (target[word] & mask) {
                    // Columns before `word` are already cleared in the pivot row.
                    for (std::size_t w = word; w < wpr; ++w) {
                        target[w] ^= pivot[w];
                    }
                }
            }
            ++pivot_row;
        }
    }
    return pivot_row;
}

bool is_full_row_rank(const BitMatrix &m) {
    if (m.rows() > m.cols()) {
        return false;
    }
    return rank(m) == m.rows();
}

BitMatrix sample_bernoulli_matrix(std::size_t rows, std::size_t cols, double p, Rng &rng) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("sample_bernoulli_matrix: p must lie in [0, 1]");
    }
    BitMatrix m(rows, cols);
    const std::uint64_t tail = tail_mask(cols);
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = m.row(r);
        for (std::size_t w = 0; w < row.size(); ++w) {
            std::uint64_t word = 0;
            if (p == 0.0) {
                word = 0;
            } else if (p == 1.0) {
                word = ~std::uint64_t{0};
            } else if (p == 0.5) {
                word = rng.next_u64();
            } else if (p == 0.25) {
                word = rng.next_u64() & rng.next_u64();
            } else {
                std::size_t bits = std::min<std::size_t>(64, cols - w * 64);
                for (std::size_t b = 0; b < bits; ++b) {
                    if (rng.uniform01() < p) {
                        word |= std::uint64_t{1} << b;
                    }
                }
            }
            row[w] = word;
        }
        if (!row.empty()) {
            row.back() &= tail;
        }
    }
    return m;
}

}  // namespace pstherm
