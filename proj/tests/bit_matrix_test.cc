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

#include "gtest/gtest.h"
#include "oracles.h"
#include "pstherm/rng.h"

using namespace pstherm;
using pstherm::testing::matrix_from_code;
using pstherm::testing::span_rank;

TEST(bit_matrix, from_strings_round_trip) {
    auto m = BitMatrix::from_strings({"101", "011"});
    EXPECT_EQ(m.rows(), 2u);
    EXPECT_EQ(m.cols(), 3u);
    EXPECT_TRUE(m.get(0, 0));
    EXPECT_FALSE(m.get(0, 1));
    EXPECT_TRUE(m.get(1, 2));
    EXPECT_EQ(m.to_string(), "101\n011\n");
    EXPECT_THROW(BitMatrix::from_strings({"10", "1"}), std::invalid_argument);
    EXPECT_THROW(BitMatrix::from_strings({"1x"}), std::invalid_argument);
}

TEST(bit_matrix, row_ops) {
    auto m = BitMatrix::from_strings({"110", "011"});
    m.add_row(0, 1);
    EXPECT_EQ(m, BitMatrix::from_strings({"101", "011"}));
    m.swap_rows(0, 1);
    EXPECT_EQ(m, BitMatrix::from_strings({"011", "101"}));
    m.flip(0, 0);
    EXPECT_EQ(m.count_ones(), 5u);
}

TEST(bit_matrix, append_row_masks_padding) {
    BitMatrix m(0, 3);
    std::uint64_t word = ~std::uint64_t{0};
    m.append_row(std::span<const std::uint64_t>(&word, 1));
    EXPECT_EQ(m.rows(), 1u);
    EXPECT_EQ(m.count_ones(), 3u);
}

TEST(bit_matrix, transpose) {
    auto m = BitMatrix::from_strings({"100", "011"});
    EXPECT_EQ(m.transposed(), BitMatrix::from_strings({"10", "01", "01"}));
}

TEST(rank, identity_and_zero) {
    EXPECT_EQ(rank(BitMatrix::identity(70)), 70u);
    EXPECT_EQ(rank(BitMatrix(5, 9)), 0u);
    EXPECT_EQ(rank(BitMatrix(0, 4)), 0u);
}

TEST(rank, small_examples) {
    EXPECT_EQ(rank(BitMatrix::from_strings({"110", "011", "101"})), 2u);
    EXPECT_EQ(rank(BitMatrix::from_strings({"1", "1"})), 1u);
    EXPECT_FALSE(is_full_row_rank(BitMatrix::from_strings({"1", "1"})));
    EXPECT_TRUE(is_full_row_rank(BitMatrix::from_strings({"10", "01"})));
    EXPECT_FALSE(is_full_row_rank(BitMatrix(3, 2)));
}

TEST(rank, two_by_two_invertible_count) {
    int full = 0;
    for (std::uint64_t code = 0; code < 16; ++code) {
        full += is_full_row_rank(matrix_from_code(2, 2, code)) ? 1 : 0;
    }
    EXPECT_EQ(full, 6);
}

TEST(rank, matches_span_enumeration_exhaustively_up_to_twelve_entries) {
    for (std::size_t rows = 1; rows <= 12; ++rows) {
        for (std::size_t cols = 1; rows * cols <= 12; ++cols) {
            for (std::uint64_t code = 0; code < (std::uint64_t{1} << (rows * cols)); ++code) {
                auto m = matrix_from_code(rows, cols, code);
                ASSERT_EQ(rank(m), span_rank(m)) << rows << "x" << cols << " code " << code;
            }
        }
    }
}

TEST(rank, transpose_invariant_on_random_matrices) {
    Rng rng(11, "rank-test", 0);
    for (int rep = 0; rep < 50; ++rep) {
        auto m = sample_bernoulli_matrix(37, 90, 0.3, rng);
        EXPECT_EQ(rank(m), rank(m.transposed()));
    }
}

TEST(bernoulli_matrix, entry_frequency) {
    Rng rng(12, "bern", 0);
    for (double p : {0.25, 0.5, 0.1}) {
        auto m = sample_bernoulli_matrix(200, 300, p, rng);
        EXPECT_NEAR(static_cast<double>(m.count_ones()) / 60000.0, p, 0.01) << p;
    }
    EXPECT_EQ(sample_bernoulli_matrix(4, 70, 0.0, rng).count_ones(), 0u);
    EXPECT_EQ(sample_bernoulli_matrix(4, 70, 1.0, rng).count_ones(), 280u);
    EXPECT_THROW(sample_bernoulli_matrix(2, 2, 1.5, rng), std::invalid_argument);
}
