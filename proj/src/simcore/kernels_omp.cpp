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

// OpenMP kernels. Same contracts as kernels_serial.cpp.
//
// Reductions split the index range into a fixed number of blocks whose
// partial sums are combined in block order, so results do not depend on the
// thread count and reruns are bit-identical.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <vector>

#include "fft.hpp"
#include "qadsim/config.hpp"
#include "qadsim/simcore/kernels.hpp"

namespace qadsim::sim::parallel {

namespace {

std::atomic<std::size_t> g_threshold{std::size_t{1} << 14};

constexpr std::int64_t kReductionBlocks = 64;

inline std::uint64_t insert_zero_bit(std::uint64_t k, int q) {
    return ((k >> q) << (q + 1)) | (k & low_mask(q));
}

inline bool nonzero(Amp a) { return std::abs(a) > Tolerances::zero_amplitude; }

inline bool go_parallel(std::size_t n) { return n >= g_threshold.load(std::memory_order_relaxed); }

}  // namespace

std::size_t threshold() { return g_threshold.load(); }
void set_threshold(std::size_t n) { g_threshold.store(n); }

void apply_1q(std::span<Amp> amps, int qubit, const Mat2& m, Control ctrl) {
    const auto half = static_cast<std::int64_t>(amps.size() / 2);
    const std::uint64_t bit = std::uint64_t{1} << qubit;
#pragma omp parallel for schedule(static) if (go_parallel(amps.size()))
    for (std::int64_t k = 0; k < half; ++k) {
        std::uint64_t i = insert_zero_bit(static_cast<std::uint64_t>(k), qubit);
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
    const auto half = static_cast<std::int64_t>(amps.size() / 2);
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    std::uint64_t violation = kNoViolation;
#pragma omp parallel for schedule(static) reduction(min : violation) if (go_parallel(amps.size()))
    for (std::int64_t k = 0; k < half; ++k) {
        std::uint64_t i = insert_zero_bit(static_cast<std::uint64_t>(k), qubit);
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
    const auto n = static_cast<std::int64_t>(amps.size());
    std::uint64_t violation = kNoViolation;
    // Each pair {i, i ^ v} is swapped by its smaller member only, so writes never collide.
#pragma omp parallel for schedule(static) reduction(min : violation) if (go_parallel(amps.size()))
    for (std::int64_t s = 0; s < n; ++s) {
        auto i = static_cast<std::uint64_t>(s);
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
    const auto n = static_cast<std::int64_t>(amps.size());
#pragma omp parallel for schedule(static) if (go_parallel(amps.size()))
    for (std::int64_t s = 0; s < n; ++s) {
        auto i = static_cast<std::uint64_t>(s);
        if (!ctrl.matches(i)) continue;
        out[deposit_key(i, fields, perm[extract_key(i, fields)])] = amps[i];
    }
#pragma omp parallel for schedule(static) if (go_parallel(amps.size()))
    for (std::int64_t s = 0; s < n; ++s) amps[s] = out[s];
}

void apply_phase_flip(std::span<Amp> amps, std::span<const Field> fields, std::span<const std::uint8_t> flip,
                      Control ctrl) {
    const auto n = static_cast<std::int64_t>(amps.size());
#pragma omp parallel for schedule(static) if (go_parallel(amps.size()))
    for (std::int64_t s = 0; s < n; ++s) {
        auto i = static_cast<std::uint64_t>(s);
        if (ctrl.matches(i) && flip[extract_key(i, fields)]) amps[i] = -amps[i];
    }
}

void apply_scalar(std::span<Amp> amps, Amp sc, Control ctrl) {
    const auto n = static_cast<std::int64_t>(amps.size());
#pragma omp parallel for schedule(static) if (go_parallel(amps.size()))
    for (std::int64_t s = 0; s < n; ++s) {
        if (ctrl.matches(static_cast<std::uint64_t>(s))) amps[s] *= sc;
    }
}

void apply_dft(std::span<Amp> amps, Field reg, bool inverse, Control ctrl) {
    const std::uint64_t n = std::uint64_t{1} << reg.width;
    const std::uint64_t rest = amps.size() >> reg.width;
    const std::uint64_t below = low_mask(reg.offset);
#pragma omp parallel if (go_parallel(amps.size()))
    {
        std::vector<Amp> fiber(n);
#pragma omp for schedule(static)
        for (std::int64_t r = 0; r < static_cast<std::int64_t>(rest); ++r) {
            auto ru = static_cast<std::uint64_t>(r);
            std::uint64_t base = (ru & below) | ((ru & ~below) << reg.width);
            if (!ctrl.matches(base)) continue;
            for (std::uint64_t x = 0; x < n; ++x) fiber[x] = amps[base | (x << reg.offset)];
            detail::fft_inplace(fiber, inverse);
            for (std::uint64_t x = 0; x < n; ++x) amps[base | (x << reg.offset)] = fiber[x];
        }
    }
}

double norm_squared(std::span<const Amp> amps) {
    const auto n = static_cast<std::int64_t>(amps.size());
    const std::int64_t blocks = std::min<std::int64_t>(kReductionBlocks, n);
    std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static) if (go_parallel(amps.size()))
    for (std::int64_t b = 0; b < blocks; ++b) {
        std::int64_t lo = n * b / blocks;
        std::int64_t hi = n * (b + 1) / blocks;
        double s = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) s += std::norm(amps[i]);
        partial[b] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

void marginal(std::span<const Amp> amps, Field reg, std::span<double> out) {
    const auto n = static_cast<std::int64_t>(amps.size());
    const std::int64_t blocks = std::min<std::int64_t>(kReductionBlocks, n);
    const std::size_t labels = out.size();
    std::vector<double> partial(static_cast<std::size_t>(blocks) * labels, 0.0);
#pragma omp parallel for schedule(static) if (go_parallel(amps.size()))
    for (std::int64_t b = 0; b < blocks; ++b) {
        std::int64_t lo = n * b / blocks;
        std::int64_t hi = n * (b + 1) / blocks;
        double* acc = partial.data() + static_cast<std::size_t>(b) * labels;
        for (std::int64_t i = lo; i < hi; ++i) {
            acc[(static_cast<std::uint64_t>(i) >> reg.offset) & low_mask(reg.width)] += std::norm(amps[i]);
        }
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (std::int64_t b = 0; b < blocks; ++b) {
        for (std::size_t l = 0; l < labels; ++l) out[l] += partial[static_cast<std::size_t>(b) * labels + l];
    }
}

}  // namespace qadsim::sim::parallel
