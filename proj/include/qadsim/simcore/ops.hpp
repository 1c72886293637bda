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

// Replayable unitary operations over named registers.
//
// An Op knows how to apply itself and its inverse to a StateVector, optionally
// restricted to a control subspace. Circuits compose Ops; amplitude estimation
// builds its Grover operator out of them.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qadsim/simcore/state_vector.hpp"

namespace qadsim::sim {

/// Unit-cost attribution carried by an Op: data-oracle queries and arithmetic gates.
struct QueryCost {
    std::uint64_t data_oracle = 0;   // O_X
    std::uint64_t query_oracle = 0;  // O_x
    std::uint64_t arithmetic = 0;

    QueryCost& operator+=(const QueryCost& o) {
        data_oracle += o.data_oracle;
        query_oracle += o.query_oracle;
        arithmetic += o.arithmetic;
        return *this;
    }
    friend QueryCost operator+(QueryCost a, const QueryCost& b) { return a += b; }
    friend QueryCost operator*(QueryCost a, std::uint64_t k) {
        a.data_oracle *= k;
        a.query_oracle *= k;
        a.arithmetic *= k;
        return a;
    }
    bool operator==(const QueryCost&) const = default;
};

class Op {
   public:
    virtual ~Op() = default;
    virtual void apply(StateVector& state, Control ctrl = {}) const = 0;
    virtual void apply_inverse(StateVector& state, Control ctrl = {}) const = 0;
    /// Registers read or written (controls included).
    virtual std::vector<std::string> registers() const = 0;
    virtual QueryCost cost() const { return {}; }
    virtual std::string name() const = 0;
};

using OpPtr = std::shared_ptr<const Op>;

class Circuit final : public Op {
   public:
    Circuit() = default;
    explicit Circuit(std::string name) : name_(std::move(name)) {}
    Circuit& add(OpPtr op);

    void apply(StateVector& state, Control ctrl = {}) const override;
    void apply_inverse(StateVector& state, Control ctrl = {}) const override;
    std::vector<std::string> registers() const override;
    QueryCost cost() const override;
    std::string name() const override { return name_; }
    const std::vector<OpPtr>& ops() const { return ops_; }

   private:
    std::string name_ = "circuit";
    std::vector<OpPtr> ops_;
};

/// A bijection on the composite label of some registers (first register lowest bits).
class BasisTransform {
   public:
    /// Enumerates the label space once; throws LayoutError if `map` is not a bijection.
    BasisTransform(const RegisterLayout& layout, std::vector<std::string> registers,
                   const std::function<std::uint64_t(std::uint64_t)>& map);

    const std::vector<std::string>& registers() const { return registers_; }
    const std::vector<std::uint64_t>& forward() const { return forward_; }
    const std::vector<std::uint64_t>& backward() const { return backward_; }

   private:
    std::vector<std::string> registers_;
    std::vector<std::uint64_t> forward_;
    std::vector<std::uint64_t> backward_;
};

void apply_basis_transform(StateVector& state, const BasisTransform& transform);

/// Applies `inner` only where `control_reg` holds `value`.
void apply_controlled(StateVector& state, const std::string& control_reg, std::uint64_t value, const Op& inner);

// ---- op factories ----------------------------------------------------------

OpPtr hadamard(std::string reg);
OpPtr qft(std::string reg, bool inverse = false);
/// A 2x2 unitary on qubit `bit` of `reg`.
OpPtr single_qubit(std::string reg, int bit, Mat2 m, std::string name = "u");
OpPtr pauli_x(std::string reg, int bit = 0);

/// Rotation |k>|0> -> |k>(f(k)|0> + sqrt(1-f(k)^2)|1>) on the 1-qubit `target`,
/// keyed on the composite label k of `key_regs`.
///
/// `f` must be pure (it is tabulated once per key width). |f| > 1 on a
/// populated basis state raises DomainError.
OpPtr keyed_rotation(std::string target, std::vector<std::string> key_regs, std::function<double(std::uint64_t)> f,
                     QueryCost cost = {}, std::string name = "keyed_rotation");

/// target ^= f(k) with k the composite label of `sources`.
///
/// Self-inverse. `f` returning nullopt (or a label wider than the target) on a
/// populated basis state raises RangeError naming that basis label.
OpPtr xor_write(std::string target, std::vector<std::string> sources,
                std::function<std::optional<std::uint64_t>(std::uint64_t)> f, QueryCost cost = {},
                std::string name = "xor_write");

OpPtr permutation(std::shared_ptr<const BasisTransform> transform, std::string name = "permutation");

/// Multiplies amplitudes by -1 where the composite label of `regs` satisfies `pred`.
OpPtr phase_flip(std::vector<std::string> regs, std::function<bool(std::uint64_t)> pred,
                 std::string name = "phase_flip");

OpPtr global_phase(Amp phase);

/// `inner` restricted to the subspace where `control_reg` == `value`.
/// Throws LayoutError if `inner` touches `control_reg`.
OpPtr controlled(std::string control_reg, std::uint64_t value, OpPtr inner);

/// Swaps apply and apply_inverse.
OpPtr inverse(OpPtr inner);

/// Ry-type rotation matrix [[f, -s], [s, f]] with s = sqrt(1 - f^2).
Mat2 rotation_matrix(double f);

}  // namespace qadsim::sim
