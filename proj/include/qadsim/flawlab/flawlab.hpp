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

// Toy-scale simulation of the earlier quantum density-estimation construction
// and the three places where it breaks:
//   1. its controlled rotations are driven by amplitude-encoded operands;
//   2. interfering |x^i> with |mu> leaves x - mu/N_mu, not x - mu;
//   3. the rotation R2 gives <M2> = sum (ln chi_j)^2, not 2 sum ln chi_j.
//
// The construction's kets carry no normalization. Every state here is
// normalized for simulation and the factor is kept next to it, so results are
// reported both as written and normalized.

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qadsim/dataio/data.hpp"
#include "qadsim/simcore/state_vector.hpp"

namespace qadsim::flawlab {

// ---- superposition and post-selection ---------------------------------------

struct Superposition {
    /// (|0> sum_i |x^i>|i> + |1> |mu> sum_i |i>)/sqrt(2), divided by `written_norm`.
    /// Layout {i, j, a}.
    sim::StateVector state;
    /// Training rows scaled to unit norm.
    std::vector<std::vector<double>> rows;
    /// mu_j = sum_i x_j^i over the unit rows.
    std::vector<double> mu;
    double N_mu = 0.0;
    double written_norm = 0.0;
};

/// DomainError for a zero row or mu = 0; LayoutError past 4 rows or features.
Superposition build_superposition(const data::DataMatrix& X);

struct PostSelection {
    /// Outcome of measuring `a` with the seed; the projection onto 1 is taken regardless.
    std::uint64_t sampled_outcome = 0;
    double probability = 0.0;
    /// Normalized amplitudes over (i, j), row-major over real entries.
    std::vector<std::complex<double>> actual;
    /// Normalized x_j^i - mu_j, the state the construction claims.
    std::vector<double> claimed;
    /// min over phi of || actual - e^{i phi} claimed ||, i.e. sqrt(2 - 2 |<claimed|actual>|).
    double discrepancy = 0.0;
};

/// DomainError if the |1> branch has zero probability.
PostSelection interfere_and_postselect(const Superposition& s, std::uint64_t seed);

// ---- expectation audit -----------------------------------------------------

enum class ChiReading {
    component_norm,  // chi_j = || sum_i (x_j^i - mu_j)|i> ||
    component_sum,   // chi_j = sum_i (x_j^i - mu_j), which is 0 for every j
};

std::string to_string(ChiReading r);
/// "norm" or "sum"; ConfigError otherwise.
ChiReading parse_chi_reading(const std::string& s);

/// chi_j and chi0_j from data (mu is the column mean here).
struct ChiValues {
    std::vector<double> chi, chi0;
};

ChiValues chi_values(const data::DataMatrix& X, const data::QueryPoint& x0, ChiReading reading);

/// Two rows per column, c_j +- chi_j/sqrt(2), so the component-norm chi equals `chi`.
data::DataMatrix chi_dataset(const std::vector<double>& chi, double center = 1.0);

struct ObservableAudit {
    /// Expectation of I (x) |0><0| on the state as written.
    double actual = 0.0;
    /// Same on the normalized state.
    double actual_normalized = 0.0;
    double written_norm = 0.0;
    double claimed = 0.0;
    /// The density-estimation quantity it should deliver.
    double target = 0.0;
    double gap_claimed = 0.0;  // claimed - actual
    double gap_target = 0.0;   // actual - target
    /// Per feature: squared norm of the written amplitude pair minus 1 (taken algebraically).
    std::vector<double> norm_defect;
    /// Features where the rotation amplitude leaves [-1, 1] or the square-root argument is negative.
    std::vector<std::size_t> unphysical;
};

struct ExpectationAudit {
    ChiReading reading = ChiReading::component_norm;
    ChiValues chi;
    /// Features with chi_j <= 0, where ln chi_j is undefined.
    std::vector<std::size_t> undefined;
    ObservableAudit m1;  // sum (chi0/chi)^2 against sum (x0-mu)^2/(2 sigma^2)
    ObservableAudit m2;  // sum (ln chi)^2 against 2 sum ln chi, target sum ln sigma^2
    double log_density_claimed = 0.0;
    double log_density = 0.0;
    std::vector<std::string> notes;
};

/// Builds the post-rotation states of both observables and reads the
/// expectations with probability_of. sigma^2 uses divisor M.
ExpectationAudit expectation_audit(const data::DataMatrix& X, const data::QueryPoint& x0,
                                   ChiReading reading = ChiReading::component_norm);

/// The M2 audit for given chi values (target left at 0).
ObservableAudit audit_m2(const std::vector<double>& chi);

// ---- encoding classifier ---------------------------------------------------

enum class Encoding { digital, analog };

std::string to_string(Encoding e);

struct CallSite {
    std::string name;
    sim::StateVector state;
    /// Registers the rotation angle is meant to be read from.
    std::vector<std::string> operands;
};

struct SiteClass {
    std::string name;
    Encoding encoding = Encoding::analog;
    /// Digital control, as a controlled rotation requires.
    bool precondition_met = false;
    /// Largest number of operand labels sharing one basis state of the other registers.
    std::size_t labels_per_branch = 0;
};

/// Digital iff, for every basis state of the non-operand registers, at most
/// one operand label carries amplitude.
std::vector<SiteClass> encoding_classifier(const std::vector<CallSite>& trace);

/// The rotation sites of the construction: R1 on sum_j |chi_j>|chi0_j>|j>, R2 on sum_j |chi_j>|j>.
std::vector<CallSite> construction_trace(const data::DataMatrix& X, const data::QueryPoint& x0);

// ---- report ----------------------------------------------------------------

struct FlawReport {
    std::vector<SiteClass> encoding;
    Superposition superposition;
    PostSelection normalization;
    ExpectationAudit expectation;
};

FlawReport run_flaws(const data::DataMatrix& X, const data::QueryPoint& x0, std::uint64_t seed,
                     ChiReading reading = ChiReading::component_norm);

}  // namespace qadsim::flawlab
