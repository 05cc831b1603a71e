// Copyright 2026 The judgecal Authors
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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace judgecal {

// One user-facing seed fans out into named, index-addressed streams so
// independent work units (items, splits, restarts, resamples) draw from
// engines that do not depend on execution order.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream,
                                 std::uint64_t index = 0) {
    return splitmix64(splitmix64(seed ^ fnv1a64(stream)) ^ index);
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::string_view stream,
                                   std::uint64_t index = 0) {
    return std::mt19937_64(derive_seed(seed, stream, index));
}

// The transforms below are pinned here instead of using the standard
// distributions, whose algorithms are unspecified and vary across standard
// libraries; seeded output must not depend on the toolchain.

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, n) by rejection.
inline std::uint64_t bounded_uint(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % n;
    }
}

// Standard normal via Box-Muller (cosine branch only).
inline double normal_sample(std::mt19937_64& rng) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double u1 = 1.0 - uniform01(rng);  // (0, 1], keeps the log finite
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

// Gamma(shape, 1) via Marsaglia-Tsang squeeze, boosted for shape < 1.
inline double gamma_sample(std::mt19937_64& rng, double shape) {
    if (shape < 1.0) {
        const double u = 1.0 - uniform01(rng);  // (0, 1]
        return gamma_sample(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = normal_sample(rng);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform01(rng);
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

// Dirichlet draw over (minus, tie, plus) with the given concentrations.
inline std::array<double, 3> dirichlet3(std::mt19937_64& rng,
                                        const std::array<double, 3>& conc) {
    for (;;) {
        std::array<double, 3> g{gamma_sample(rng, conc[0]),
                                gamma_sample(rng, conc[1]),
                                gamma_sample(rng, conc[2])};
        const double sum = g[0] + g[1] + g[2];
        if (sum > 0.0) {
            return {g[0] / sum, g[1] / sum, g[2] / sum};
        }
    }
}

// Index 0, 1, or 2 with probabilities (p[0], p[1], p[2]).
inline int categorical3(std::mt19937_64& rng, const std::array<double, 3>& p) {
    const double u = uniform01(rng);
    if (u < p[0]) return 0;
    if (u < p[0] + p[1]) return 1;
    return 2;
}

// k distinct indices from [0, n), ascending. Partial Fisher-Yates.
inline std::vector<std::size_t> sample_without_replacement(std::mt19937_64& rng,
                                                           std::size_t n,
                                                           std::size_t k) {
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = i;
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        const std::size_t j = i + bounded_uint(rng, n - i);
        std::swap(indices[i], indices[j]);
    }
    indices.resize(k);
    std::sort(indices.begin(), indices.end());
    return indices;
}

}  // namespace judgecal
