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

// Arithmetic on digital registers, emulated as classical label maps.
//
// Every gate XOR-writes encode(f(decoded sources)) into its target, so it is
// a basis permutation and its own inverse. Functions are evaluated per basis
// state on the fly rather than tabulated, because source words at the default
// format are too wide to enumerate.

#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qadsim/arith/fixed_point.hpp"
#include "qadsim/simcore/ops.hpp"

namespace qadsim::arith {

/// A register interpreted as a fixed-point number.
struct Operand {
    std::string reg;
    Format format;
};

/// Classical function of the decoded source values. May throw DomainError,
/// DegenerateDataError or RangeError; the gate rethrows with the basis label.
using RealFunction = std::function<double(std::span<const double>)>;

inline constexpr std::size_t kMaxSources = 8;

class ArithmeticGate final : public sim::Op {
   public:
    ArithmeticGate(std::string name, std::vector<Operand> sources, Operand target, RealFunction f,
                   sim::QueryCost cost = sim::QueryCost{0, 0, 1});

    void apply(sim::StateVector& state, sim::Control ctrl = {}) const override;
    void apply_inverse(sim::StateVector& state, sim::Control ctrl = {}) const override { apply(state, ctrl); }
    std::vector<std::string> registers() const override;
    sim::QueryCost cost() const override { return cost_; }
    std::string name() const override { return name_; }

    /// The classical function, for reference checks.
    double evaluate(std::span<const double> args) const { return f_(args); }
    const std::vector<Operand>& sources() const { return sources_; }
    const Operand& target() const { return target_; }

   private:
    std::string name_;
    std::vector<Operand> sources_;
    Operand target_;
    RealFunction f_;
    sim::QueryCost cost_;
};

using GatePtr = std::shared_ptr<const ArithmeticGate>;

void apply_arithmetic(sim::StateVector& state, const ArithmeticGate& gate);

GatePtr make_gate(std::string name, std::vector<Operand> sources, Operand target, RealFunction f);

/// target ^= a - b (the subtraction step of the multiply-adder).
GatePtr subtract_gate(Operand a, Operand b, Operand target);
/// target ^= a * b.
GatePtr multiply_gate(Operand a, Operand b, Operand target);
GatePtr identity_gate(Operand source, Operand target);
/// target ^= values[key]; loads a classical per-index table (e.g. one value per branch j).
GatePtr table_gate(Operand key, std::vector<double> values, Operand target, std::string name = "table");

/// target ^= C * (2 sin^2(pi * s) - 1) for a source s in [0, 1).
/// Throws RangeError at construction if |C| does not fit the target format.
GatePtr a_gate(Operand source, Operand target, double scale);
/// target ^= ln(s); DomainError for s <= 0.
GatePtr ln_gate(Operand source, Operand target);
GatePtr square_gate(Operand source, Operand target);
/// target ^= num / (sqrt(var) * scale); DegenerateDataError if var < floor.
GatePtr reciprocal_scale_gate(Operand num, Operand var, Operand target, double scale, double floor);

/// Controlled rotation driven by digital registers:
/// |s>|0> -> |s>(f(s)|0> + sqrt(1 - f(s)^2)|1>) on the one-qubit `target`.
class DigitalRotation final : public sim::Op {
   public:
    DigitalRotation(std::string name, std::string target, std::vector<Operand> sources, RealFunction f);

    void apply(sim::StateVector& state, sim::Control ctrl = {}) const override { run(state, ctrl, false); }
    void apply_inverse(sim::StateVector& state, sim::Control ctrl = {}) const override { run(state, ctrl, true); }
    std::vector<std::string> registers() const override;
    std::string name() const override { return name_; }

   private:
    void run(sim::StateVector& state, sim::Control ctrl, bool inverse) const;
    std::string name_;
    std::string target_;
    std::vector<Operand> sources_;
    RealFunction f_;
};

sim::OpPtr digital_rotation(std::string target, std::vector<Operand> sources, RealFunction f,
                            std::string name = "digital_rotation");

/// Checks that `reg` is unentangled, then traces it out.
sim::StateVector discard_register(const sim::StateVector& state, const std::string& reg);

}  // namespace qadsim::arith
