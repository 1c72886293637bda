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

#include "qadsim/arith/fixed_point.hpp"

#include <cmath>
#include <sstream>

#include "qadsim/error.hpp"

namespace qadsim::arith {

namespace {

std::int64_t raw_max(const Format& f) { return (std::int64_t{1} << (f.int_bits + f.frac_bits)) - 1; }
std::int64_t raw_min(const Format& f) { return f.is_signed ? -(std::int64_t{1} << (f.int_bits + f.frac_bits)) : 0; }

std::uint64_t word_mask(const Format& f) { return (std::uint64_t{1} << f.width()) - 1; }

}  // namespace

double Format::ulp() const { return std::ldexp(1.0, -frac_bits); }
double Format::max_value() const { return std::ldexp(static_cast<double>(raw_max(*this)), -frac_bits); }
double Format::min_value() const { return std::ldexp(static_cast<double>(raw_min(*this)), -frac_bits); }

void Format::validate() const {
    if (int_bits < 0 || frac_bits < 0) throw ConfigError("fixed-point bit counts must be non-negative");
    if (width() < 1) throw ConfigError("fixed-point format has zero width");
    if (width() > 62) throw ConfigError("fixed-point word wider than 62 bits");
}

std::string Format::describe() const {
    std::ostringstream os;
    os << (is_signed ? "s" : "u") << int_bits << "." << frac_bits;
    return os.str();
}

double FixedPoint::value() const { return std::ldexp(static_cast<double>(raw), -format.frac_bits); }

std::uint64_t FixedPoint::word() const { return static_cast<std::uint64_t>(raw) & word_mask(format); }

FixedPoint encode(double x, const Format& fmt) {
    fmt.validate();
    if (!std::isfinite(x)) throw RangeError("cannot encode non-finite value");
    // nearbyint honours the default rounding mode, which is round-half-to-even.
    const double r = std::nearbyint(std::ldexp(x, fmt.frac_bits));
    if (r > static_cast<double>(raw_max(fmt)) || r < static_cast<double>(raw_min(fmt))) {
        std::ostringstream os;
        os.precision(17);
        os << "value " << x << " outside fixed-point range [" << fmt.min_value() << ", " << fmt.max_value()
           << "] of format " << fmt.describe();
        throw RangeError(os.str());
    }
    return FixedPoint{static_cast<std::int64_t>(r), fmt};
}

double decode(const FixedPoint& v) { return v.value(); }

FixedPoint from_word(std::uint64_t word, const Format& fmt) {
    const std::uint64_t w = word & word_mask(fmt);
    std::int64_t raw = static_cast<std::int64_t>(w);
    if (fmt.is_signed && (w >> (fmt.width() - 1)) != 0) raw -= std::int64_t{1} << fmt.width();
    return FixedPoint{raw, fmt};
}

std::uint64_t encode_word(double x, const Format& fmt) { return encode(x, fmt).word(); }

double decode_word(std::uint64_t word, const Format& fmt) { return from_word(word, fmt).value(); }

double quantize(double x, const Format& fmt) { return encode(x, fmt).value(); }

}  // namespace qadsim::arith
