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

// Kernel-PCA proximity measure, classical and quantum.
//
// The quantum pipeline has two steps. Step 1 estimates the squared distance
// of x0 to the estimated mean. Step 2 estimates one overlap omega_i per
// training row, stores it in a fixed-point register, and estimates the mean
// of the squared overlaps. The means come from the density pipeline's step 1.
// Per-branch factorization, routes and seeds follow adde/pipeline.hpp.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qadsim/adde/pipeline.hpp"
#include "qadsim/dataio/data.hpp"
#include "qadsim/dataio/ledger.hpp"

namespace qadsim::adkpca {

using adde::EstimatorSettings;
using adde::ScalarEstimate;
using adde::VectorEstimate;

struct MomentModel {
    std::vector<double> mu;
    /// d x d, divisor M - 1.
    std::vector<std::vector<double>> cov;
};

/// DegenerateDataError for M < 2.
MomentModel classical_moments(const data::DataMatrix& X);

/// |x0 - mu|^2 - (x0 - mu)^T Sigma (x0 - mu).
double classical_proximity(const MomentModel& model, const data::QueryPoint& x0);

/// (1/(M-1)) sum_i [(x0 - mu) . (x^i - mu)]^2, which equals (x0 - mu)^T Sigma (x0 - mu).
double bridge_quadratic(const data::DataMatrix& X, std::span<const double> mu, const data::QueryPoint& x0);

struct Constants {
    double C = 0.0;         // max |x|, taken over the quantized data
    double C_prime = 0.0;   // max |x0_j - mu_j|
    double C_dprime = 0.0;  // max |(x_j^i - mu_j)(x0_j - mu_j)|
};

/// Zero C' or C'' (x0 at the mean) is replaced by 1: every amplitude then vanishes.
Constants compute_constants(const data::DataMatrix& X, const data::QueryPoint& x0, std::span<const double> mu,
                            const arith::Format& fmt);

/// q(q(x - mu) q(x0 - mu)): the product register of step 2.
double held_product(double x, double x0, double mu, const arith::Format& fmt);

double refit_C_prime(const data::QueryPoint& x0, std::span<const double> mu_hat, const arith::Format& fmt);
double refit_C_dprime(const data::DataMatrix& X, const data::QueryPoint& x0, std::span<const double> mu_hat,
                      const arith::Format& fmt);

// ---- state preparations ----------------------------------------------------

/// Step 1: amplitudes (x0_j - mu_hat_j)/C' over j; good = anc == 0.
ae::StatePreparation a_preparation(const data::QueryPoint& x0, std::span<const double> mu_hat, double C_prime,
                                   const EstimatorSettings& s);
/// Step 2, row i: anc2 interferes |Psi_i> with |h'>; good = anc2 == 0.
ae::StatePreparation omega_preparation(const data::DataMatrix& X, const data::QueryPoint& x0,
                                       std::span<const double> mu_hat, double C_dprime, std::size_t row,
                                       const EstimatorSettings& s);
/// Step 2, final: amplitudes omega_hat_i over i; good = anc == 0.
ae::StatePreparation b_preparation(std::span<const double> omega_hat, const EstimatorSettings& s);

// ---- estimators ------------------------------------------------------------

/// a_hat = (1/d) sum ((x0_j - mu_hat_j)/C')^2. ConstantViolation("C'").
ScalarEstimate estimate_a(const data::QueryPoint& x0, std::span<const double> mu_hat, double C_prime, int t,
                          const EstimatorSettings& s, data::QueryLedger* ledger = nullptr);
/// omega_hat_i = (2a_i - 1) d~/d, clamped to [-1, 1] and quantized. ConstantViolation("C''").
VectorEstimate estimate_omegas(const data::DataMatrix& X, const data::QueryPoint& x0, std::span<const double> mu_hat,
                               double C_dprime, int t, const EstimatorSettings& s,
                               data::QueryLedger* ledger = nullptr);
/// b_hat = (1/M) sum omega_hat_i^2. DomainError if some |omega_hat_i| > 1.
ScalarEstimate estimate_b(std::span<const double> omega_hat, int t, const EstimatorSettings& s,
                          data::QueryLedger* ledger = nullptr);

/// d C'^2 a - (M/(M-1)) (d C'')^2 b.
double proximity_estimate(double a, double b, std::size_t d, std::size_t M, double C_prime, double C_dprime);

double a_formula(const data::QueryPoint& x0, std::span<const double> mu, double C_prime);
/// (1/d) sum_j (x0_j - mu_j)(x_j^i - mu_j)/C'' per row.
std::vector<double> omega_formula(const data::DataMatrix& X, const data::QueryPoint& x0, std::span<const double> mu,
                                  double C_dprime);
double b_formula(std::span<const double> omega);

// ---- error budget ----------------------------------------------------------

struct Budget {
    double epsilon = 0.0;
    double eps_mean = 0.0;   // eps'    = eps/(48 d^2 C'')
    double eps_a = 0.0;      // eps''   = eps/(d max(C', C'')^2)
    /// eps/(d C''^2); gives d C'^2 eps'' > eps when C' > C'', so eps_a uses the larger constant.
    double eps_a_published = 0.0;
    double eps_omega = 0.0;  // eps'''  = eps/(3 d^2 C''^2)
    double eps_b = 0.0;      // eps'''' = eps/(3 d^2 C''^2)
    int t_mean = 1, t_a = 1, t_omega = 1, t_b = 1;
    bool needs_ideal = false;
    /// Error promised on the proximity measure: 2 eps.
    double target = 0.0;
    /// d(2^t' - 1) + (2^t'' - 1) + M(2^t''' - 1) + (2^t'''' - 1).
    std::uint64_t planned_grover = 0;
};

Budget plan_budget_kpca(double eps, std::size_t d, std::size_t M, const Constants& k);

std::uint64_t planned_grover(std::size_t d, std::size_t M, int t_mean, int t_a, int t_omega, int t_b);

// ---- full run --------------------------------------------------------------

struct KpcaConfig {
    EstimatorSettings settings;
    std::optional<double> epsilon;
    std::optional<int> t_bits;

    void validate() const;
};

struct KpcaBounds {
    double distance = 0.0;   // on d C'^2 a_hat against |x0 - mu|^2
    double b = 0.0;          // on b_hat against its value at the exact means
    double proximity = 0.0;  // on f_hat
};

struct ADKPCAReport {
    std::size_t rows = 0, cols = 0;
    Constants constants;       // from the classical moments
    Constants constants_used;  // after any retry
    std::vector<std::string> retries;
    MomentModel classical;
    VectorEstimate means;
    ScalarEstimate a;
    VectorEstimate omegas;
    ScalarEstimate b;
    double a_formula = 0.0;              // at mu_hat
    std::vector<double> omega_formula;   // at mu_hat
    double distance = 0.0, distance_classical = 0.0;
    double quadratic = 0.0, quadratic_classical = 0.0;
    double proximity = 0.0, proximity_classical = 0.0;
    int t_mean = 0, t_a = 0, t_omega = 0, t_b = 0;
    std::optional<Budget> budget;
    KpcaBounds published_bounds;  // d C'^2 eps'' + 4 d C' C eps', eps'''' + eps''' + 16 C^2 eps'/C'', and their scaled sum
    KpcaBounds bounds;
    KpcaBounds observed;
    data::LedgerSnapshot ledger;
};

ADKPCAReport run_adkpca(const data::DataMatrix& X, const data::QueryPoint& x0, const KpcaConfig& config);

}  // namespace qadsim::adkpca
