// Copyright 2026 The qadsim Authors
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

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace qadsim::sim::detail {

/// Unitary radix-2 DFT with the QFT sign convention:
/// forward y_k = 2^{-w/2} sum_x e^{+2 pi i x k / N} v_x, inverse uses e^{-...}.
inline void fft_inplace(std::vector<std::complex<double>>& v, bool inverse) {
    const std::size_t n = v.size();
    if (n <= 1) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
    const double sign = inverse ? -1.0 : 1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                // Twiddles are evaluated directly (not by recurrence) to keep round-off at ~1 ulp.
                const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
                std::complex<double> u = v[start + k];
                std::complex<double> t = w * v[start + k + len / 2];
                v[start + k] = u + t;
                v[start + k + len / 2] = u - t;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& x : v) x *= scale;
}

}  // namespace qadsim::sim::detail
