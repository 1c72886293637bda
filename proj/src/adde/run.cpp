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

#include "qadsim/adde/pipeline.hpp"
#include "qadsim/error.hpp"

namespace qadsim::adde {

namespace {

std::string retry_note(const char* constant, double before, double after) {
    std::ostringstream os;
    os.precision(10);
    os << constant << ": " << before << " -> " << after;
    return os.str();
}

// Runs `step`; on a violation of `constant`, refits it once and reruns.
template <typename Step, typename Refit>
auto with_retry(const char* constant, double& value, std::vector<std::string>& notes, Step step, Refit refit) {
    try {
        return step(value);
    } catch (const ConstantViolation& e) {
        if (e.constant() != constant) throw;
        const double before = value;
        value = refit();
        notes.push_back(retry_note(constant, before, value));
        return step(value);
    }
}

}  // namespace

void DensityConfig::validate() const {
    if (epsilon.has_value() == t_bits.has_value()) {
        throw ConfigError("give exactly one of epsilon and t-bits");
    }
    if (epsilon && !(*epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");
    if (settings.mode == ae::AEMode::circuit && !settings.seed) throw ConfigError("circuit mode needs a seed");
    settings.format.validate();
}

ADDEReport run_adde(const data::DataMatrix& X, const data::QueryPoint& x0, const DensityConfig& config) {
    config.validate();
    data::check_compatible(X, x0);
    const auto& s = config.settings;
    const auto& fmt = s.format;
    const std::size_t M = X.rows(), d = X.cols();

    ADDEReport rep;
    rep.rows = M;
    rep.cols = d;
    rep.delta = config.delta;
    rep.classical = classical_fit(X, config.policy, config.floor);
    rep.constants = data::compute_constants(X, x0, rep.classical.mu, rep.classical.sigma2, config.policy, config.floor);
    auto k = rep.constants;
    // C bounds the values the oracle holds, which may round past the raw maximum.
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < d; ++j) k.C = std::max(k.C, std::abs(arith::quantize(X.at(i, j), fmt)));
    const double min_sigma2 = *std::min_element(rep.classical.sigma2.begin(), rep.classical.sigma2.end());

    if (config.epsilon) {
        rep.budget = plan_budget(*config.epsilon, d, k, min_sigma2);
        if (rep.budget->needs_ideal && s.mode == ae::AEMode::circuit) {
            throw ConfigError("epsilon " + std::to_string(*config.epsilon) + " needs " +
                              std::to_string(std::max({rep.budget->t_mean, rep.budget->t_variance,
                                                       rep.budget->t_density})) +
                              " phase bits, beyond circuit mode; use --mode ideal");
        }
        rep.t_mean = rep.budget->t_mean;
        rep.t_variance = rep.budget->t_variance;
        rep.t_density = rep.budget->t_density;
    } else {
        rep.t_mean = rep.t_variance = rep.t_density = *config.t_bits;
    }

    data::QueryLedger ledger;
    rep.means = estimate_means(X, k.C, rep.t_mean, s, &ledger);
    const auto& mu_hat = rep.means.values;

    rep.variances = with_retry(
        "D", k.D, rep.retries,
        [&](double D) { return estimate_variances(X, mu_hat, D, rep.t_variance, s, &ledger); },
        [&] { return refit_D(X, mu_hat, fmt); });
    rep.estimated.source = ModelSource::quantum;
    rep.estimated.mu = mu_hat;
    rep.estimated.sigma2 =
        data::apply_variance_policy(rep.variances.values, config.policy, config.floor, &rep.estimated.floored);
    const auto& s2_hat = rep.estimated.sigma2;

    rep.p = with_retry(
        "T", k.T, rep.retries,
        [&](double T) { return estimate_p(x0, mu_hat, s2_hat, T, rep.t_density, s, &ledger); },
        [&] { return refit_T(x0, mu_hat, s2_hat, fmt); });
    rep.q = with_retry(
        "E", k.E, rep.retries, [&](double E) { return estimate_q(s2_hat, E, rep.t_density, s, &ledger); },
        [&] { return refit_E(s2_hat, fmt); });
    rep.constants_used = k;
    rep.ledger = ledger.snapshot();

    rep.log_density = log_density_estimate(rep.p.value, rep.q.value, d, k.T, k.E);
    rep.log_density_classical = classical_log_density(rep.classical, x0);
    rep.flag = flag_anomaly(rep.log_density, config.delta);
    rep.flag_classical = flag_anomaly(rep.log_density_classical, config.delta);
    rep.p_formula = p_formula(x0, mu_hat, s2_hat, k.T);
    rep.q_formula = q_formula(s2_hat, k.E);

    // Bounds this run can guarantee.
    const double row_ratio = static_cast<double>(X.padded_rows()) / static_cast<double>(M);
    const double col_ratio = static_cast<double>(x0.padded_dim()) / static_cast<double>(d);
    auto& b = rep.bounds;
    b.mean.resize(d);
    b.variance.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        double load = 0.0;
        for (std::size_t i = 0; i < M; ++i) load = std::max(load, std::abs(arith::quantize(X.at(i, j), fmt) - X.at(i, j)));
        b.mean[j] = 2.0 * k.C * row_ratio * amplitude_error(rep.means.runs[j]) + load;
        double rounding = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            const double v = held_difference(X.at(i, j), mu_hat[j], fmt);
            const double w = X.at(i, j) - mu_hat[j];
            rounding += std::abs(v * v - w * w);
        }
        rounding /= static_cast<double>(M);
        b.variance[j] = k.D * k.D * row_ratio * amplitude_error(rep.variances.runs[j]) + rounding +
                        b.mean[j] * b.mean[j] + std::abs(s2_hat[j] - rep.variances.values[j]);
    }
    b.p = col_ratio * amplitude_error(rep.p.run) + std::abs(rep.p.encoded - rep.p_formula);
    b.q = 2.0 * col_ratio * amplitude_error(rep.q.run) + std::abs(rep.q.encoded - rep.q_formula);
    b.log_density = composed_log_density_bound(x0, mu_hat, s2_hat, b.mean, b.variance, b.p, b.q, k.T, k.E);

    // Bounds as published, at this run's sub-precisions.
    const double e1 = rep.budget ? rep.budget->eps_mean : ae::worst_case_error(rep.t_mean);
    const double e2 = rep.budget ? rep.budget->eps_variance : ae::worst_case_error(rep.t_variance);
    const double e3 = rep.budget ? rep.budget->eps_density : ae::worst_case_error(rep.t_density);
    rep.chain = published_chain(e1, e2, e3, d, k, min_sigma2);
    auto& pb = rep.published_bounds;
    pb.mean.assign(d, 2.0 * k.C * e1);
    pb.variance.assign(d, 2.0 * k.D * e2 + 8.0 * k.C * k.C * e1);
    pb.p = e3;
    pb.q = e3;
    pb.log_density = rep.chain.composed;

    auto& o = rep.observed;
    for (std::size_t j = 0; j < d; ++j) {
        o.mean.push_back(std::abs(mu_hat[j] - rep.classical.mu[j]));
        o.variance.push_back(std::abs(s2_hat[j] - rep.classical.sigma2[j]));
    }
    o.p = std::abs(rep.p.value - rep.p_formula);
    o.q = std::abs(rep.q.value - rep.q_formula);
    o.log_density = std::abs(rep.log_density - rep.log_density_classical);
    return rep;
}

}  // namespace qadsim::adde
