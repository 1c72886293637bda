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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qadsim/adkpca/adkpca.hpp"
#include "qadsim/error.hpp"

namespace qadsim::adkpca {

namespace {

template <typename Step, typename Refit>
auto with_retry(const char* constant, double& value, std::vector<std::string>& notes, Step step, Refit refit) {
    try {
        return step(value);
    } catch (const ConstantViolation& e) {
        if (e.constant() != constant) throw;
        const double before = value;
        value = refit();
        std::ostringstream os;
        os.precision(10);
        os << constant << ": " << before << " -> " << value;
        notes.push_back(os.str());
        return step(value);
    }
}

}  // namespace

void KpcaConfig::validate() const {
    if (epsilon.has_value() == t_bits.has_value()) throw ConfigError("give exactly one of epsilon and t-bits");
    if (epsilon && !(*epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (settings.mode == ae::AEMode::circuit && !settings.seed) throw ConfigError("circuit mode needs a seed");
    settings.format.validate();
}

ADKPCAReport run_adkpca(const data::DataMatrix& X, const data::QueryPoint& x0, const KpcaConfig& config) {
    config.validate();
    data::check_compatible(X, x0);
    const auto& s = config.settings;
    const auto& fmt = s.format;
    const std::size_t M = X.rows(), d = X.cols();
    const double dd = static_cast<double>(d), mm = static_cast<double>(M);

    ADKPCAReport rep;
    rep.rows = M;
    rep.cols = d;
    rep.classical = classical_moments(X);
    const auto& mu = rep.classical.mu;
    rep.constants = compute_constants(X, x0, mu, fmt);
    auto k = rep.constants;

    if (config.epsilon) {
        rep.budget = plan_budget_kpca(*config.epsilon, d, M, k);
        if (rep.budget->needs_ideal && s.mode == ae::AEMode::circuit) {
            throw ConfigError("epsilon " + std::to_string(*config.epsilon) + " needs more phase bits than circuit mode allows; use --mode ideal");
        }
        rep.t_mean = rep.budget->t_mean;
        rep.t_a = rep.budget->t_a;
        rep.t_omega = rep.budget->t_omega;
        rep.t_b = rep.budget->t_b;
    } else {
        rep.t_mean = rep.t_a = rep.t_omega = rep.t_b = *config.t_bits;
    }

    data::QueryLedger ledger;
    rep.means = adde::estimate_means(X, k.C, rep.t_mean, s, &ledger);
    const auto& mu_hat = rep.means.values;
    rep.a = with_retry(
        "C'", k.C_prime, rep.retries,
        [&](double c) { return estimate_a(x0, mu_hat, c, rep.t_a, s, &ledger); },
        [&] { return refit_C_prime(x0, mu_hat, fmt); });
    rep.omegas = with_retry(
        "C''", k.C_dprime, rep.retries,
        [&](double c) { return estimate_omegas(X, x0, mu_hat, c, rep.t_omega, s, &ledger); },
        [&] { return refit_C_dprime(X, x0, mu_hat, fmt); });
    rep.b = estimate_b(rep.omegas.values, rep.t_b, s, &ledger);
    rep.constants_used = k;
    rep.ledger = ledger.snapshot();

    const double cp2 = k.C_prime * k.C_prime;
    const double dc2 = (dd * k.C_dprime) * (dd * k.C_dprime);
    const double lift = mm / (mm - 1.0);
    rep.a_formula = a_formula(x0, mu_hat, k.C_prime);
    rep.omega_formula = omega_formula(X, x0, mu_hat, k.C_dprime);
    rep.distance = dd * cp2 * rep.a.value;
    rep.quadratic = lift * dc2 * rep.b.value;
    rep.proximity = proximity_estimate(rep.a.value, rep.b.value, d, M, k.C_prime, k.C_dprime);
    rep.distance_classical = 0.0;
    for (std::size_t j = 0; j < d; ++j) rep.distance_classical += (x0.at(j) - mu[j]) * (x0.at(j) - mu[j]);
    rep.quadratic_classical = rep.distance_classical - classical_proximity(rep.classical, x0);
    rep.proximity_classical = classical_proximity(rep.classical, x0);

    // Bounds this run can guarantee.
    const double row_ratio = static_cast<double>(X.padded_rows()) / mm;
    const double col_ratio = static_cast<double>(X.padded_cols()) / dd;
    std::vector<double> mean_bound(d);
    for (std::size_t j = 0; j < d; ++j) {
        double load = 0.0;
        for (std::size_t i = 0; i < M; ++i) load = std::max(load, std::abs(arith::quantize(X.at(i, j), fmt) - X.at(i, j)));
        mean_bound[j] = 2.0 * k.C * row_ratio * adde::amplitude_error(rep.means.runs[j]) + load;
    }
    double shift = 0.0, held = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double z = x0.at(j) - mu_hat[j];
        const double h = adde::held_difference(x0.at(j), mu_hat[j], fmt);
        held += h * h - z * z;
        shift += 2.0 * std::abs(z) * mean_bound[j] + mean_bound[j] * mean_bound[j];
    }
    auto& b = rep.bounds;
    b.distance = dd * cp2 * col_ratio * adde::amplitude_error(rep.a.run) + std::abs(held) + shift;
    const double ulp = fmt.ulp();
    double bsum = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        double move = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double e = mean_bound[j];
            move += e * (std::abs(x0.at(j) - mu_hat[j]) + std::abs(X.at(i, j) - mu_hat[j])) + e * e;
        }
        move /= dd * k.C_dprime;
        const double raw = col_ratio * (2.0 * rep.omegas.runs[i].a - 1.0);
        const double delta = 2.0 * col_ratio * adde::amplitude_error(rep.omegas.runs[i]) +
                             std::abs(rep.omegas.encoded[i] - rep.omega_formula[i]) + move + 0.5 * ulp +
                             std::abs(raw - std::clamp(raw, -1.0, 1.0));
        bsum += delta * (2.0 * std::abs(rep.omegas.values[i]) + delta);
    }
    b.b = static_cast<double>(std::size_t{1} << data::index_bits(M)) / mm * adde::amplitude_error(rep.b.run) +
          std::abs(rep.b.encoded - b_formula(rep.omegas.values)) + bsum / mm;
    b.proximity = b.distance + lift * dc2 * b.b;

    // Bounds as published, at this run's sub-precisions.
    const double e1 = rep.budget ? rep.budget->eps_mean : ae::worst_case_error(rep.t_mean);
    const double e2 = rep.budget ? rep.budget->eps_a : ae::worst_case_error(rep.t_a);
    const double e3 = rep.budget ? rep.budget->eps_omega : ae::worst_case_error(rep.t_omega);
    const double e4 = rep.budget ? rep.budget->eps_b : ae::worst_case_error(rep.t_b);
    auto& pb = rep.published_bounds;
    pb.distance = dd * cp2 * e2 + 4.0 * dd * k.C_prime * k.C * e1;
    pb.b = e4 + e3 + 16.0 * k.C * k.C * e1 / k.C_dprime;
    pb.proximity = pb.distance + lift * dc2 * pb.b;

    auto& o = rep.observed;
    o.distance = std::abs(rep.distance - rep.distance_classical);
    o.b = std::abs(rep.b.value - b_formula(omega_formula(X, x0, mu, k.C_dprime)));
    o.proximity = std::abs(rep.proximity - rep.proximity_classical);
    return rep;
}

}  // namespace qadsim::adkpca
