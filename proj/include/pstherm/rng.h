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

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace pstherm {

/// Name recorded in every artifact so that other implementations can either
/// reproduce the exact bit stream or declare divergence.
inline constexpr std::string_view kRngAlgorithm = "philox4x32-10/splitmix64-keyed";

/// SplitMix64 finalizer. Used for key derivation only.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// FNV-1a over the bytes of a module tag.
constexpr std::uint64_t tag_hash(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Stream key = splitmix64(splitmix64(seed) ^ splitmix64(tag_hash(tag) + index)).
constexpr std::uint64_t derive_stream_key(std::uint64_t master_seed, std::string_view tag, std::uint64_t index) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(tag_hash(tag) + index));
}

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Counter-based generator. The 64-bit key selects the stream, the block counter
/// walks it. Each block yields two 64-bit outputs (lo word first).
///
/// Satisfies std::uniform_random_bit_generator, but all sampling helpers used
/// by the library are defined here so the draw sequence does not depend on the
/// standard library implementation.
class Rng {
  public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t key) : key_(key) {}
    Rng(std::uint64_t master_seed, std::string_view tag, std::uint64_t index)
        : key_(derive_stream_key(master_seed, tag, index)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next_u64(); }
    std::uint64_t next_u64();

    /// Uniform in [0, bound). Lemire's multiply-shift with rejection.
    std::uint64_t uniform_below(std::uint64_t bound);
    /// Uniform double in [0, 1) with 53 bits.
    double uniform01();
    /// One fair bit, drawn from a 64-bit buffer.
    bool fair_bit();
    bool bernoulli(double p);

    /// In-place Fisher-Yates shuffle, swapping position i with a uniform j <= i.
    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(uniform_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    /// Uniform sample of `count` distinct values from [lo, hi], in random order.
    std::vector<std::uint32_t> sample_distinct(std::uint32_t lo, std::uint32_t hi, std::size_t count);

    /// Uniform `count`-subset of [0, universe) by Floyd's algorithm, returned
    /// in uniformly random order.
    std::vector<std::uint64_t> sample_subset(std::uint64_t universe, std::size_t count);

    std::uint64_t key() const { return key_; }
    std::uint64_t block_counter() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
    std::uint64_t bit_buffer_ = 0;
    int bits_left_ = 0;
};

}  // namespace pstherm
