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

// Signed/unsigned fixed-point words as they sit in a digital register.
//
// A value is raw * 2^-q. Signed formats use two's complement over
// 1 + p + q bits; unsigned formats use p + q bits. Rounding is
// round-half-to-even everywhere.

#pragma once

#include <cstdint>
#include <string>

namespace qadsim::arith {

struct Format {
    int int_bits = 8;
    int frac_bits = 16;
    bool is_signed = true;

    int width() const { return int_bits + frac_bits + (is_signed ? 1 : 0); }
    /// 2^-q.
    double ulp() const;
    double max_value() const;
    double min_value() const;
    /// Throws ConfigError for negative bit counts or words wider than 62 bits.
    void validate() const;
    std::string describe() const;

    bool operator==(const Format&) const = default;

    /// Unsigned integer format used for index registers (j, i).
    static Format index(int bits) { return Format{bits, 0, false}; }
};

struct FixedPoint {
    std::int64_t raw = 0;
    Format format;

    double value() const;
    /// Register label (two's complement for signed formats).
    std::uint64_t word() const;
};

/// Throws RangeError if x is not finite or rounds outside the representable range.
FixedPoint encode(double x, const Format& fmt);
double decode(const FixedPoint& v);
FixedPoint from_word(std::uint64_t word, const Format& fmt);

std::uint64_t encode_word(double x, const Format& fmt);
double decode_word(std::uint64_t word, const Format& fmt);

/// decode(encode(x)): the value a digital register actually holds.
double quantize(double x, const Format& fmt);

}  // namespace qadsim::arith
