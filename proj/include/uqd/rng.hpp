// Copyright 2026 The uqdbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UQDBENCH_RNG_HPP
#define UQDBENCH_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace uqd {

namespace detail {
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 output function.
constexpr std::uint64_t finalize64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace detail

constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    return detail::finalize64(x + detail::kGolden);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept
{
    return mix64(h ^ (v + detail::kGolden + (h << 6) + (h >> 2)));
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Counter-based random stream. The pair (seed, id) fully determines the
// sequence of draws, so a stream can be reconstructed anywhere (any thread,
// any call order) from those two integers. Sub-streams are derived by
// hashing tags into the id, never by splitting state, which keeps parallel
// consumers independent of scheduling.
class RngStream {
public:
    RngStream() = default;
    RngStream(std::uint64_t seed, std::uint64_t id)
        : seed_(seed), id_(id), state_(hash_combine(mix64(seed), id))
    {
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t id() const { return id_; }

    std::uint64_t next_u64()
    {
        state_ += detail::kGolden;
        return detail::finalize64(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via one Box-Muller branch; two u64 draws per call.
    double normal()
    {
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % n;
        }
    }

    template <class... Tags>
    RngStream substream(Tags... tags) const
    {
        std::uint64_t h = id_;
        ((h = hash_combine(h, static_cast<std::uint64_t>(tags))), ...);
        return RngStream(seed_, h);
    }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t id_ = 0;
    std::uint64_t state_ = hash_combine(mix64(0), 0);
};

} // namespace uqd

#endif
