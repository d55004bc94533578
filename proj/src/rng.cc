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

#include "pstherm/rng.h"

#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace pstherm {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi, std::uint32_t &lo) {
    std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

std::uint64_t Rng::next_u64() {
    if (buffered_ == 0) {
        auto out = philox4x32_10(
            {static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32), 0u, 0u},
            {static_cast<std::uint32_t>(key_), static_cast<std::uint32_t>(key_ >> 32)});
        ++counter_;
        buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
        buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
        buffered_ = 2;
    }
    return buffer_[2 - buffered_--];
}

__extension__ typedef unsigned __int128 u128;

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("uniform_below: bound must be positive");
    }
    u128 m = static_cast<u128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<u128>(next_u64()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool Rng::fair_bit() {
    if (bits_left_ == 0) {
        bit_buffer_ = next_u64();
        bits_left_ = 64;
    }
    bool b = bit_buffer_ & 1u;
    bit_buffer_ >>= 1;
    --bits_left_;
    return b;
}

bool Rng::bernoulli(double p) {
    if (p <= 0.0) {
        return false;
    }
    if (p >= 1.0) {
        return true;
    }
    return uniform01() < p;
}

std::vector<std::uint32_t> Rng::sample_distinct(std::uint32_t lo, std::uint32_t hi, std::size_t count) {
    if (hi < lo || count > static_cast<std::size_t>(hi - lo) + 1) {
        throw std::invalid_argument("sample_distinct: count exceeds window size");
    }
    std::vector<std::uint32_t> pool(static_cast<std::size_t>(hi - lo) + 1);
    std::iota(pool.begin(), pool.end(), lo);
    // Partial Fisher-Yates from the front.
    for (std::size_t i = 0; i < count; ++i) {
        auto j = i + static_cast<std::size_t>(uniform_below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

std::vector<std::uint64_t> Rng::sample_subset(std::uint64_t universe, std::size_t count) {
    if (count > universe) {
        throw std::invalid_argument("sample_subset: count exceeds universe");
    }
    std::unordered_set<std::uint64_t> taken;
    taken.reserve(count);
    std::vector<std::uint64_t> chosen;
    chosen.reserve(count);
    for (std::uint64_t j = universe - count; j < universe; ++j) {
        std::uint64_t r = uniform_below(j + 1);
        std::uint64_t pick = taken.insert(r).second ? r : j;
        taken.insert(pick);
        chosen.push_back(pick);
    }
    shuffle(std::span<std::uint64_t>(chosen));
    return chosen;
}

}  // namespace pstherm
