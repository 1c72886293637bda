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

// Amplitude estimation over a state-preparation circuit.
//
// Two modes share one accounting rule. `circuit` runs phase estimation on the
// Grover operator and samples the phase register; `ideal` reads the exact
// good-subspace probability and snaps its angle to the nearest grid point.
// Both charge 2^t - 1 Grover applications to the ledger.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qadsim/dataio/ledger.hpp"
#include "qadsim/simcore/ops.hpp"

namespace qadsim::ae {

/// A replayable circuit A with |0...0> -> |psi> and a good-subspace predicate.
struct StatePreparation {
    sim::RegisterLayout layout;
    sim::OpPtr A;
    std::string good_register;
    std::function<bool(std::uint64_t)> good;
    std::string name = "A";
    /// Registers S0 reflects about |0>; empty means all of `layout`. Registers
    /// left out act as spectators that label independent branches.
    std::vector<std::string> reflect;

    /// Throws LayoutError if A or the predicate reference registers outside `layout`.
    void validate() const;
    /// A|0...0>.
    sim::StateVector prepare() const;
    /// Exact good-subspace probability of A|0...0>.
    double exact_amplitude() const;
};

enum class AEMode { circuit, ideal };

std::string to_string(AEMode m);
/// "circuit" or "ideal"; ConfigError otherwise.
AEMode parse_mode(const std::string& s);

/// How circuit mode builds the controlled powers of Q.
enum class QpeStrategy {
    /// Q^y applied to each phase branch in turn; same state, one small register set.
    sequential_powers,
    /// Literal controlled-Q^(2^k) on the joint phase+work statevector.
    gate_level,
};

struct AEConfig {
    int t = 8;
    AEMode mode = AEMode::ideal;
    std::optional<std::uint64_t> seed;
    QpeStrategy strategy = QpeStrategy::sequential_powers;

    /// circuit: 1 <= t <= 14 and a seed; ideal: 1 <= t <= 40. ConfigError otherwise.
    void validate() const;
};

struct AEResult {
    int t = 0;
    AEMode mode = AEMode::ideal;
    std::uint64_t y = 0;          // phase-register outcome (or nearest grid index)
    double theta = 0.0;           // folded into [0, pi/2]
    double a = 0.0;               // sin^2(theta)
    double grid_step = 0.0;       // pi / 2^t
    std::uint64_t grover_applications = 0;
    double error_bound = 0.0;     // a-priori amplitude error
    double outcome_probability = 1.0;  // probability of `y` (circuit mode)
};

/// The Grover iterate Q = -A S0 A^dagger S_chi.
///
/// Every application (controlled or not) adds one to the ledger's Grover
/// counter and charges twice the oracle cost of A.
class GroverOp final : public sim::Op {
   public:
    GroverOp(StatePreparation prep, data::QueryLedger* ledger);

    void apply(sim::StateVector& state, sim::Control ctrl = {}) const override;
    void apply_inverse(sim::StateVector& state, sim::Control ctrl = {}) const override;
    std::vector<std::string> registers() const override;
    sim::QueryCost cost() const override;
    std::string name() const override { return "Q(" + prep_.name + ")"; }

    const StatePreparation& preparation() const { return prep_; }

   private:
    void charge() const;

    StatePreparation prep_;
    sim::OpPtr flip_good_;
    data::QueryLedger* ledger_;
};

std::shared_ptr<const GroverOp> build_grover(const StatePreparation& prep, data::QueryLedger* ledger = nullptr);

/// Outcome distribution of the t-bit phase register after QPE on Q (no ledger charge).
std::vector<double> phase_distribution(const StatePreparation& prep, int t,
                                       QpeStrategy strategy = QpeStrategy::sequential_powers);

/// theta = pi * min(y, 2^t - y) / 2^t.
double fold_phase(std::uint64_t y, int t);

AEResult estimate_amplitude(const StatePreparation& prep, const AEConfig& config, data::QueryLedger* ledger = nullptr);

/// C * (2a - 1).
double overlap_from_result(const AEResult& r, double scale);

/// 2 pi sqrt(a(1-a)) / 2^t + pi^2 / 4^t.
double ae_error_bound(double a, int t);

/// pi / 2^t + pi^2 / 4^t: the bound above with sqrt(a(1-a)) at its maximum 1/2.
double worst_case_error(int t);

struct BitPlan {
    int t = 1;
    /// t exceeds the circuit-mode limit; only ideal mode can run it.
    bool needs_ideal = false;
};

/// Smallest t with worst_case_error(t) <= eps. ConfigError for eps <= 0 or
/// when t would exceed the ideal-mode limit.
BitPlan bits_for_epsilon(double eps);

/// Eigenphases of Q on the plane spanned by the good and bad parts of A|0>.
/// Requires 0 < a < 1. Returned in (-pi, pi], ascending.
std::array<double, 2> grover_eigenphases(const StatePreparation& prep);

}  // namespace qadsim::ae
