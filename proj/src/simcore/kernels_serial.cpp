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

// Reference kernels: straight loops, no threading. Kept deliberately plain so
// they can serve as the oracle for the OpenMP versions.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fft.hpp"
#include "qadsim/config.hpp"
#include "qadsim/simcore/kernels.hpp"

namespace qadsim::sim::serial {

namespace {

inline std::uint64_t insert_zero_bit(std::uint64_t k, int q) {
    return ((k >> q) << (q + 1)) | (k & low_mask(q));
}

inline bool nonzero(Amp a) { return std::abs(a) > Tolerances::zero_amplitude; }

}  // namespace

void apply_1q(std::span<Amp> amps, int qubit, const Mat2& m, Control ctrl) {
    const std::uint64_t half = amps.size() / 2;
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    for (std::uint64_t k = 0; k < half; ++k) {
        std::uint64_t i = insert_zero_bit(k, qubit);
        if (!ctrl.matches(i)) continue;
        std::uint64_t j = i | bit;
        Amp a = amps[i];
        Amp b = amps[j];
        amps[i] = m.m00 * a + m.m01 * b;
        amps[j] = m.m10 * a + m.m11 * b;
    }
}

std::uint64_t apply_keyed_1q(std::span<Amp> amps, int qubit, std::span<const Field> key,
                             std::span<const KeyedMat2> table, Control ctrl) {
    const std::uint64_t half = amps.size() / 2;
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    std::uint64_t violation = kNoViolation;
    for (std::uint64_t k = 0; k < half; ++k) {
        std::uint64_t i = insert_zero_bit(k, qubit);
        if (!ctrl.matches(i)) continue;
        std::uint64_t j = i | bit;
        const KeyedMat2& e = table[extract_key(i, key)];
        Amp a = amps[i];
        Amp b = amps[j];
        if (!e.valid) {
            if (nonzero(a) || nonzero(b)) violation = std::min(violation, i);
            continue;
        }
        amps[i] = e.m.m00 * a + e.m.m01 * b;
        amps[j] = e.m.m10 * a + e.m.m11 * b;
    }
    return violation;
}

std::uint64_t apply_xor_write(std::span<Amp> amps, Field target, std::span<const Field> sources,
                              std::span<const std::uint64_t> table, Control ctrl) {
    std::uint64_t violation = kNoViolation;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (!ctrl.matches(i)) continue;
        std::uint64_t v = table[extract_key(i, sources)];
        if (v == kInvalidLabel) {
            if (nonzero(amps[i])) violation = std::min(violation, i);
            continue;
        }
        std::uint64_t j = i ^ (v << target.offset);
        if (i < j) std::swap(amps[i], amps[j]);
    }
    return violation;
}

void apply_permutation(std::span<Amp> amps, std::span<const Field> fields, std::span<const std::uint64_t> perm,
                       Control ctrl) {
    std::vector<Amp> out(amps.begin(), amps.end());
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (!ctrl.matches(i)) continue;
        out[deposit_key(i, fields, perm[extract_key(i, fields)])] = amps[i];
    }
    std::copy(out.begin(), out.end(), amps.begin());
}

void apply_phase_flip(std::span<Amp> amps, std::span<const Field> fields, std::span<const std::uint8_t> flip,
                      Control ctrl) {
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (ctrl.matches(i) && flip[extract_key(i, fields)]) amps[i] = -amps[i];
    }
}

void apply_scalar(std::span<Amp> amps, Amp s, Control ctrl) {
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (ctrl.matches(i)) amps[i] *= s;
    }
}

void apply_dft(std::span<Amp> amps, Field reg, bool inverse, Control ctrl) {
    const std::uint64_t n = std::uint64_t{1} << reg.width;
    const std::uint64_t reg_mask = low_mask(reg.width) << reg.offset;
    std::vector<Amp> fiber(n);
    for (std::uint64_t base = 0; base < amps.size(); ++base) {
        if ((base & reg_mask) || !ctrl.matches(base)) continue;
        for (std::uint64_t x = 0; x < n; ++x) fiber[x] = amps[base | (x << reg.offset)];
        detail::fft_inplace(fiber, inverse);
        for (std::uint64_t x = 0; x < n; ++x) amps[base | (x << reg.offset)] = fiber[x];
    }
}

double norm_squared(std::span<const Amp> amps) {
    double s = 0.0;
    for (const Amp& a : amps) s += std::norm(a);
    return s;
}

void marginal(std::span<const Amp> amps, Field reg, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        out[(i >> reg.offset) & low_mask(reg.width)] += std::norm(amps[i]);
    }
}

}  // namespace qadsim::sim::serial
