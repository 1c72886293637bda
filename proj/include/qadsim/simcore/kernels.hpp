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

// Statevector kernels.
//
// Every kernel exists twice with an identical signature: `serial::` is the
// plain reference loop, `parallel::` is the OpenMP version. Tests compare the
// two on random states; the benchmark target times them against each other.
// StateVector dispatches through `dispatch::` according to its Backend.
//
// All kernels take an optional Control: the operation only touches basis
// indices with `(index & control.mask) == control.value`.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace qadsim::sim {

using Amp = std::complex<double>;

inline constexpr std::uint64_t low_mask(int width) {
    return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

/// Bit-field of a basis index (one register).
struct Field {
    int offset = 0;
    int width = 0;
};

struct Control {
    std::uint64_t mask = 0;
    std::uint64_t value = 0;

    bool matches(std::uint64_t index) const { return (index & mask) == value; }
    Control with(std::uint64_t extra_mask, std::uint64_t extra_value) const {
        return Control{mask | extra_mask, value | extra_value};
    }
};

/// 2x2 complex matrix acting on (|0>, |1>) of one qubit.
struct Mat2 {
    Amp m00{1.0}, m01{0.0}, m10{0.0}, m11{1.0};

    Mat2 adjoint() const { return Mat2{std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)}; }
};

/// Matrix table entry; invalid entries are an error only where amplitude is nonzero.
struct KeyedMat2 {
    Mat2 m;
    bool valid = true;
};

inline constexpr std::uint64_t kInvalidLabel = std::numeric_limits<std::uint64_t>::max();
inline constexpr std::uint64_t kNoViolation = std::numeric_limits<std::uint64_t>::max();

/// Concatenates several fields of `index` into one key (first field lowest).
inline std::uint64_t extract_key(std::uint64_t index, std::span<const Field> fields) {
    std::uint64_t key = 0;
    int shift = 0;
    for (const auto& f : fields) {
        key |= ((index >> f.offset) & low_mask(f.width)) << shift;
        shift += f.width;
    }
    return key;
}

/// Scatters a composite key back into the fields of `index`.
inline std::uint64_t deposit_key(std::uint64_t index, std::span<const Field> fields, std::uint64_t key) {
    int shift = 0;
    for (const auto& f : fields) {
        std::uint64_t m = low_mask(f.width);
        index = (index & ~(m << f.offset)) | (((key >> shift) & m) << f.offset);
        shift += f.width;
    }
    return index;
}

inline int total_width(std::span<const Field> fields) {
    int w = 0;
    for (const auto& f : fields) w += f.width;
    return w;
}

#define QADSIM_KERNEL_DECLS                                                                                   \
    void apply_1q(std::span<Amp> amps, int qubit, const Mat2& m, Control ctrl);                               \
    /* Returns the first index whose key maps to an invalid entry with nonzero amplitude, else kNoViolation. */ \
    std::uint64_t apply_keyed_1q(std::span<Amp> amps, int qubit, std::span<const Field> key,                  \
                                 std::span<const KeyedMat2> table, Control ctrl);                             \
    /* target ^= table[key(sources)]; table entries equal to kInvalidLabel are errors if reached. */          \
    std::uint64_t apply_xor_write(std::span<Amp> amps, Field target, std::span<const Field> sources,          \
                                  std::span<const std::uint64_t> table, Control ctrl);                        \
    /* Relabels the composite key of `fields` through the bijection `perm`. */                                \
    void apply_permutation(std::span<Amp> amps, std::span<const Field> fields,                               \
                           std::span<const std::uint64_t> perm, Control ctrl);                                \
    void apply_phase_flip(std::span<Amp> amps, std::span<const Field> fields,                                 \
                          std::span<const std::uint8_t> flip, Control ctrl);                                  \
    void apply_scalar(std::span<Amp> amps, Amp s, Control ctrl);                                              \
    void apply_dft(std::span<Amp> amps, Field reg, bool inverse, Control ctrl);                               \
    double norm_squared(std::span<const Amp> amps);                                                           \
    /* Probability mass per label of `reg`; `out` has 2^width entries. */                                     \
    void marginal(std::span<const Amp> amps, Field reg, std::span<double> out);

namespace serial {
QADSIM_KERNEL_DECLS
}  // namespace serial

namespace parallel {
QADSIM_KERNEL_DECLS
/// Indices below this size always run on one thread.
std::size_t threshold();
void set_threshold(std::size_t n);
}  // namespace parallel

#undef QADSIM_KERNEL_DECLS

enum class Backend { serial, parallel };

}  // namespace qadsim::sim
