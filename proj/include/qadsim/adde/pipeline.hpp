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

// Quantum density-estimation pipeline.
//
// Every estimator is run per feature branch j: the joint evolution is block
// diagonal in j, so each branch gets its own state preparation and its own
// amplitude estimation. compare_branches() checks this factorization against
// a coherent simulation that keeps j in superposition.
//
// Two routes build the same circuits. `fused` folds oracle loads, arithmetic,
// rotation and uncompute into one keyed rotation on the index registers;
// `explicit_gates` spells them out with digital registers. Both compute the
// rotation amplitude from the fixed-point values the registers would hold, so
// they agree exactly; only the explicit route is limited by the qubit cap.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qadsim/adde/classical.hpp"
#include "qadsim/ae/amplitude_estimation.hpp"
#include "qadsim/arith/fixed_point.hpp"
#include "qadsim/dataio/constants.hpp"
#include "qadsim/dataio/data.hpp"
#include "qadsim/dataio/ledger.hpp"

namespace qadsim::adde {

enum class Route { fused, explicit_gates };

std::string to_string(Route r);

struct EstimatorSettings {
    ae::AEMode mode = ae::AEMode::ideal;
    std::optional<std::uint64_t> seed;
    arith::Format format{8, 16, true};
    Route route = Route::fused;
    ae::QpeStrategy strategy = ae::QpeStrategy::sequential_powers;

    /// AE configuration for one run; the run's seed is derived from `seed` and `stream`.
    ae::AEConfig ae_config(int t, std::uint64_t stream) const;
};

/// splitmix64 of seed + stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Amplitude error of one run: half a grid step of theta in ideal mode,
/// the textbook bound at the estimate in circuit mode.
double amplitude_error(const ae::AEResult& r);

struct VectorEstimate {
    std::vector<double> values;
    /// What an exact amplitude readout of the same circuits would give.
    std::vector<double> encoded;
    std::vector<ae::AEResult> runs;
};

struct ScalarEstimate {
    double value = 0.0;
    double encoded = 0.0;
    ae::AEResult run;
};

// ---- fixed-point register values ------------------------------------------

/// q(q(a) - q(b)): a difference computed from two loaded registers.
double held_difference(double a, double b, const arith::Format& fmt);
/// q(ln(q(v))).
double held_log(double v, const arith::Format& fmt);

/// Constants refit from the estimates actually produced; used by the retry.
double refit_D(const data::DataMatrix& X, std::span<const double> mu_hat, const arith::Format& fmt);
double refit_T(const data::QueryPoint& x0, std::span<const double> mu_hat, std::span<const double> sigma2_hat,
               const arith::Format& fmt);
double refit_E(std::span<const double> sigma2_hat, const arith::Format& fmt);

// ---- state preparations ----------------------------------------------------
//
// With `branch` set, the preparation is for that feature only. Without it the
// preparation carries a spectator register "j" that selects the branch and is
// left out of the S0 reflection (fused route only).

/// Step 1: anc2 interferes |phi_j> (amplitudes x/C on anc5) with |h>; good = anc2 == 0.
ae::StatePreparation mean_preparation(const data::DataMatrix& X, std::optional<std::size_t> branch, double C,
                                      const EstimatorSettings& s);
/// Step 2: amplitudes (x - mu_hat_j)/D; good = anc == 0.
ae::StatePreparation variance_preparation(const data::DataMatrix& X, std::optional<std::size_t> branch,
                                          std::span<const double> mu_hat, double D, const EstimatorSettings& s);
/// p: amplitudes (x0_j - mu_hat_j)/(sigma_hat_j T) over j; good = anc == 0.
ae::StatePreparation p_preparation(const data::QueryPoint& x0, std::span<const double> mu_hat,
                                   std::span<const double> sigma2_hat, double T, const EstimatorSettings& s);
/// q: e interferes amplitudes ln(sigma_hat_j^2)/E with |h'>; good = e == 0.
ae::StatePreparation q_preparation(std::span<const double> sigma2_hat, double E, const EstimatorSettings& s);

// ---- estimators ------------------------------------------------------------
//
// Each checks its rotation amplitudes first and throws ConstantViolation
// ("C", "D", "T" or "E") if one leaves [-1, 1]; nothing is charged then.

VectorEstimate estimate_means(const data::DataMatrix& X, double C, int t, const EstimatorSettings& s,
                              data::QueryLedger* ledger = nullptr);
VectorEstimate estimate_variances(const data::DataMatrix& X, std::span<const double> mu_hat, double D, int t,
                                  const EstimatorSettings& s, data::QueryLedger* ledger = nullptr);
ScalarEstimate estimate_p(const data::QueryPoint& x0, std::span<const double> mu_hat,
                          std::span<const double> sigma2_hat, double T, int t, const EstimatorSettings& s,
                          data::QueryLedger* ledger = nullptr);
ScalarEstimate estimate_q(std::span<const double> sigma2_hat, double E, int t, const EstimatorSettings& s,
                          data::QueryLedger* ledger = nullptr);

/// (1/d) sum ((x0_j - mu_j)/(sigma_j T))^2 and (1/d) sum ln(sigma_j^2)/E in real arithmetic.
double p_formula(const data::QueryPoint& x0, std::span<const double> mu, std::span<const double> sigma2, double T);
double q_formula(std::span<const double> sigma2, double E);

// ---- error budget ----------------------------------------------------------

struct ErrorBudget {
    double epsilon = 0.0;
    double eps_mean = 0.0;      // eps'
    double eps_variance = 0.0;  // eps''
    double eps_density = 0.0;   // eps'''
    int t_mean = 1, t_variance = 1, t_density = 1;
    bool needs_ideal = false;
    /// d(2^t' - 1) + d(2^t'' - 1) + 2(2^t''' - 1).
    std::uint64_t planned_grover = 0;
};

/// eps''' = eps/(3dT^2), eps'' = min sigma^2 eps/(3dT^2 D), eps' = min sigma^2 eps/(3d(8T^2C^2 + 8C^2)).
ErrorBudget plan_budget(double eps, std::size_t d, const data::Constants& k, double min_sigma2);

std::uint64_t planned_grover(std::size_t d, int t_mean, int t_variance, int t_density);

/// The published bound chain on ln P evaluated at given sub-precisions: the
/// ln sigma^2 term (with the factor d on E eps''' kept) and the quadratic term.
struct BoundChain {
    double log_variance_term = 0.0;
    double quadratic_term = 0.0;
    /// (log_variance_term + quadratic_term) / 2, since ln P carries both with weight 1/2.
    double composed = 0.0;
};

BoundChain published_chain(double eps_mean, double eps_variance, double eps_density, std::size_t d,
                           const data::Constants& k, double min_sigma2);

/// Worst case of |ln P_hat - ln P| given per-feature intervals on mu and sigma^2
/// and the errors of p and q against their formulas at the estimates.
double composed_log_density_bound(const data::QueryPoint& x0, std::span<const double> mu_hat,
                                  std::span<const double> sigma2_hat, std::span<const double> mean_bound,
                                  std::span<const double> variance_bound, double p_bound, double q_bound, double T,
                                  double E);

// ---- full run --------------------------------------------------------------

struct DensityConfig {
    EstimatorSettings settings;
    /// Exactly one of the two.
    std::optional<double> epsilon;
    std::optional<int> t_bits;
    double delta = 0.01;
    data::DegeneratePolicy policy = data::DegeneratePolicy::error;
    double floor = Tolerances::sigma_min;

    void validate() const;
};

struct DensityBounds {
    std::vector<double> mean, variance;
    double p = 0.0, q = 0.0, log_density = 0.0;
};

struct ADDEReport {
    std::size_t rows = 0, cols = 0;
    data::Constants constants;       // from the classical fit
    data::Constants constants_used;  // after any retry
    std::vector<std::string> retries;
    GaussianModel classical;
    GaussianModel estimated;
    VectorEstimate means, variances;
    ScalarEstimate p, q;
    double p_formula = 0.0, q_formula = 0.0;
    double log_density = 0.0;
    double log_density_classical = 0.0;
    double delta = 0.0;
    bool flag = false;
    bool flag_classical = false;
    int t_mean = 0, t_variance = 0, t_density = 0;
    std::optional<ErrorBudget> budget;
    BoundChain chain;
    DensityBounds published_bounds;  // 2C eps', 2D eps'' + 8C^2 eps', eps''' for p and q, chain for ln P
    DensityBounds bounds;        // what this run guarantees, fixed-point and padding effects included
    DensityBounds observed;
    data::LedgerSnapshot ledger;
};

ADDEReport run_adde(const data::DataMatrix& X, const data::QueryPoint& x0, const DensityConfig& config);

// ---- factorization check ---------------------------------------------------

struct BranchComparison {
    /// Phase-register distribution conditioned on j, per branch and from the coherent run.
    std::vector<std::vector<double>> branch, coherent;
    /// Good-subspace probability per j.
    std::vector<double> branch_a, coherent_a;
    double max_difference = 0.0;
};

enum class Stage { mean, variance };

/// Runs QPE once per branch and once coherently over all j (gate-level, t small).
BranchComparison compare_branches(Stage stage, const data::DataMatrix& X, std::span<const double> mu_hat,
                                  double scale, int t, const EstimatorSettings& s);

}  // namespace qadsim::adde
