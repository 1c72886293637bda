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

#include "qadsim/arith/gates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qadsim/config.hpp"
#include "qadsim/error.hpp"

namespace qadsim::arith {

namespace {

struct Bound {
    sim::Field field;
    Format format;
};

std::vector<Bound> bind(const sim::RegisterLayout& layout, const std::vector<Operand>& ops, const std::string& gate) {
    std::vector<Bound> out;
    for (const auto& o : ops) {
        const auto& r = layout.at(o.reg);
        if (r.width != o.format.width()) {
            throw LayoutError(gate + ": register '" + o.reg + "' has width " + std::to_string(r.width) +
                              " but format " + o.format.describe() + " needs " + std::to_string(o.format.width()));
        }
        out.push_back(Bound{r.field(), o.format});
    }
    return out;
}

inline void decode_sources(std::uint64_t index, const std::vector<Bound>& src, std::array<double, kMaxSources>& buf) {
    for (std::size_t k = 0; k < src.size(); ++k) {
        buf[k] = decode_word((index >> src[k].field.offset) & sim::low_mask(src[k].field.width), src[k].format);
    }
}

inline bool significant(sim::Amp a) { return std::abs(a) > Tolerances::zero_amplitude; }

/// Re-evaluates a failing basis state outside the parallel region and rethrows with context.
[[noreturn]] void rethrow_at(const std::string& gate, const std::string& label, const std::function<void()>& eval) {
    try {
        eval();
    } catch (const RangeError& e) {
        throw RangeError(gate + ": " + e.what() + " at " + label);
    } catch (const DegenerateDataError& e) {
        throw DegenerateDataError(gate + ": " + e.what() + " at " + label);
    } catch (const DomainError& e) {
        throw DomainError(gate + ": " + e.what() + " at " + label);
    }
    throw Error(gate + ": evaluation failed at " + label);
}

bool use_threads(const sim::StateVector& s) {
    return s.backend() == sim::Backend::parallel && s.dim() >= sim::parallel::threshold();
}

void check_sources(const std::string& name, const std::vector<Operand>& sources, const std::string& target) {
    if (sources.size() > kMaxSources) throw LayoutError(name + ": too many source registers");
    for (const auto& s : sources) {
        if (s.reg == target) throw LayoutError(name + ": target register must be disjoint from the sources");
        s.format.validate();
    }
}

}  // namespace

ArithmeticGate::ArithmeticGate(std::string name, std::vector<Operand> sources, Operand target, RealFunction f,
                               sim::QueryCost cost)
    : name_(std::move(name)), sources_(std::move(sources)), target_(std::move(target)), f_(std::move(f)), cost_(cost) {
    check_sources(name_, sources_, target_.reg);
    target_.format.validate();
}

std::vector<std::string> ArithmeticGate::registers() const {
    std::vector<std::string> r;
    for (const auto& s : sources_) r.push_back(s.reg);
    r.push_back(target_.reg);
    return r;
}

void ArithmeticGate::apply(sim::StateVector& s, sim::Control c) const {
    const auto& layout = s.layout();
    auto src = bind(layout, sources_, name_);
    auto tgt = bind(layout, {target_}, name_).front();
    auto amps = s.amplitudes();
    const auto n = static_cast<std::int64_t>(amps.size());
    const std::size_t nsrc = src.size();
    std::vector<sim::Amp> out(amps.size(), sim::Amp{0.0});
    std::uint64_t violation = sim::kNoViolation;

#pragma omp parallel for schedule(static) reduction(min : violation) if (use_threads(s))
    for (std::int64_t si = 0; si < n; ++si) {
        const auto i = static_cast<std::uint64_t>(si);
        const sim::Amp a = amps[i];
        if (!c.matches(i)) {
            out[i] = a;
            continue;
        }
        if (a == sim::Amp{0.0}) continue;
        std::array<double, kMaxSources> buf{};
        decode_sources(i, src, buf);
        std::uint64_t word = 0;
        try {
            word = encode_word(f_(std::span<const double>(buf.data(), nsrc)), tgt.format);
        } catch (...) {
            // Round-off dust on an invalid label is dropped; real amplitude is an error.
            if (significant(a)) violation = std::min(violation, i);
            continue;
        }
        out[i ^ (word << tgt.field.offset)] = a;
    }

    if (violation != sim::kNoViolation) {
        rethrow_at(name_, layout.describe(violation), [&] {
            std::array<double, kMaxSources> buf{};
            decode_sources(violation, src, buf);
            encode_word(f_(std::span<const double>(buf.data(), nsrc)), tgt.format);
        });
    }
    std::copy(out.begin(), out.end(), amps.begin());
}

void apply_arithmetic(sim::StateVector& state, const ArithmeticGate& gate) { gate.apply(state); }

GatePtr make_gate(std::string name, std::vector<Operand> sources, Operand target, RealFunction f) {
    return std::make_shared<ArithmeticGate>(std::move(name), std::move(sources), std::move(target), std::move(f));
}

GatePtr subtract_gate(Operand a, Operand b, Operand target) {
    return make_gate("sub", {std::move(a), std::move(b)}, std::move(target),
                     [](std::span<const double> v) { return v[0] - v[1]; });
}

GatePtr multiply_gate(Operand a, Operand b, Operand target) {
    return make_gate("mul", {std::move(a), std::move(b)}, std::move(target),
                     [](std::span<const double> v) { return v[0] * v[1]; });
}

GatePtr identity_gate(Operand source, Operand target) {
    return make_gate("copy", {std::move(source)}, std::move(target), [](std::span<const double> v) { return v[0]; });
}

GatePtr table_gate(Operand key, std::vector<double> values, Operand target, std::string name) {
    if (key.format.frac_bits != 0 || key.format.is_signed) {
        throw LayoutError(name + ": table key must be an unsigned integer register");
    }
    return make_gate(std::move(name), {std::move(key)}, std::move(target),
                     [values = std::move(values)](std::span<const double> v) {
                         const auto k = static_cast<std::size_t>(v[0]);
                         if (k >= values.size()) throw RangeError("table index " + std::to_string(k) + " out of range");
                         return values[k];
                     });
}

GatePtr a_gate(Operand source, Operand target, double scale) {
    encode(std::abs(scale), target.format);
    encode(-std::abs(scale), target.format);
    return make_gate("A", {std::move(source)}, std::move(target), [scale](std::span<const double> v) {
        const double s = std::sin(std::numbers::pi * v[0]);
        return scale * (2.0 * s * s - 1.0);
    });
}

GatePtr ln_gate(Operand source, Operand target) {
    return make_gate("ln", {std::move(source)}, std::move(target), [](std::span<const double> v) {
        if (!(v[0] > 0.0)) {
            std::ostringstream os;
            os << "logarithm of non-positive value " << v[0];
            throw DomainError(os.str());
        }
        return std::log(v[0]);
    });
}

GatePtr square_gate(Operand source, Operand target) {
    return make_gate("square", {std::move(source)}, std::move(target),
                     [](std::span<const double> v) { return v[0] * v[0]; });
}

GatePtr reciprocal_scale_gate(Operand num, Operand var, Operand target, double scale, double floor) {
    return make_gate("recip_scale", {std::move(num), std::move(var)}, std::move(target),
                     [scale, floor](std::span<const double> v) {
                         if (v[1] < floor) {
                             std::ostringstream os;
                             os << "variance " << v[1] << " below floor " << floor;
                             throw DegenerateDataError(os.str());
                         }
                         return v[0] / (std::sqrt(v[1]) * scale);
                     });
}

DigitalRotation::DigitalRotation(std::string name, std::string target, std::vector<Operand> sources, RealFunction f)
    : name_(std::move(name)), target_(std::move(target)), sources_(std::move(sources)), f_(std::move(f)) {
    check_sources(name_, sources_, target_);
}

std::vector<std::string> DigitalRotation::registers() const {
    std::vector<std::string> r;
    for (const auto& s : sources_) r.push_back(s.reg);
    r.push_back(target_);
    return r;
}

void DigitalRotation::run(sim::StateVector& s, sim::Control c, bool inverse) const {
    const auto& layout = s.layout();
    const auto& t = layout.at(target_);
    if (t.width != 1) throw LayoutError(name_ + ": rotation target must be a single qubit");
    auto src = bind(layout, sources_, name_);
    auto amps = s.amplitudes();
    const auto half = static_cast<std::int64_t>(amps.size() / 2);
    const std::uint64_t bit = std::uint64_t{1} << t.offset;
    const std::size_t nsrc = src.size();
    std::uint64_t violation = sim::kNoViolation;

    auto amplitude = [&](std::uint64_t i) {
        std::array<double, kMaxSources> buf{};
        decode_sources(i, src, buf);
        const double f = f_(std::span<const double>(buf.data(), nsrc));
        if (!std::isfinite(f) || std::abs(f) > 1.0 + Tolerances::rotation_slack) {
            std::ostringstream os;
            os << "rotation amplitude " << f << " outside [-1, 1]";
            throw DomainError(os.str());
        }
        return std::clamp(f, -1.0, 1.0);
    };

#pragma omp parallel for schedule(static) reduction(min : violation) if (use_threads(s))
    for (std::int64_t k = 0; k < half; ++k) {
        const auto ku = static_cast<std::uint64_t>(k);
        const std::uint64_t i = ((ku >> t.offset) << (t.offset + 1)) | (ku & sim::low_mask(t.offset));
        if (!c.matches(i)) continue;
        const std::uint64_t j = i | bit;
        const sim::Amp a = amps[i];
        const sim::Amp b = amps[j];
        if (a == sim::Amp{0.0} && b == sim::Amp{0.0}) continue;
        double f = 0.0;
        try {
            f = amplitude(i);
        } catch (...) {
            if (significant(a) || significant(b)) violation = std::min(violation, i);
            continue;
        }
        sim::Mat2 m = sim::rotation_matrix(f);
        if (inverse) m = m.adjoint();
        amps[i] = m.m00 * a + m.m01 * b;
        amps[j] = m.m10 * a + m.m11 * b;
    }
    if (violation != sim::kNoViolation) {
        rethrow_at(name_, layout.describe(violation), [&] { amplitude(violation); });
    }
}

sim::OpPtr digital_rotation(std::string target, std::vector<Operand> sources, RealFunction f, std::string name) {
    return std::make_shared<DigitalRotation>(std::move(name), std::move(target), std::move(sources), std::move(f));
}

sim::StateVector discard_register(const sim::StateVector& state, const std::string& reg) {
    return sim::discard(state, reg);
}

}  // namespace qadsim::arith
