/*
 * Copyright 2026 The SAR Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace sar {
namespace rng {

// mt19937_64 is fully pinned by the standard; the distribution transforms
// below are hand-rolled so that seeded runs reproduce across stdlibs.
using Engine = std::mt19937_64;

/// Uniform double in [0, 1).
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform(Engine& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

/// Standard normal via Marsaglia's polar method (one sample per call).
inline double normal(Engine& eng) {
    double u, v, s;
    do {
        u = 2.0 * uniform01(eng) - 1.0;
        v = 2.0 * uniform01(eng) - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
}

/// Unbiased integer in [0, n) by rejection.
inline std::uint64_t bounded(Engine& eng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        std::uint64_t r = eng();
        if (r >= threshold) return r % n;
    }
}

/// Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& v, Engine& eng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[bounded(eng, i)]);
    }
}

}  // namespace rng
}  // namespace sar
