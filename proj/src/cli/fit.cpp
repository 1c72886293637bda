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

#include "qadsim/cli/cli.hpp"
#include "qadsim/error.hpp"

namespace qadsim::cli {

FitReport fit_model(const data::DataMatrix& X, const RunConfig& config) {
    const auto s = config.settings();
    const auto& fmt = s.format;
    const std::size_t M = X.rows(), d = X.cols();

    FitReport r;
    r.rows = M;
    r.cols = d;
    r.classical = adde::classical_fit(X, config.policy);
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            r.C = std::max(r.C, std::abs(arith::quantize(X.at(i, j), fmt)));
            r.D = std::max(r.D, std::abs(X.at(i, j) - r.classical.mu[j]));
        }
    }
    if (!(r.C > 0.0)) throw DegenerateDataError("every entry is zero; the mean circuit has nothing to load");
    if (!(r.D > 0.0)) r.D = Tolerances::sigma_min;

    if (config.epsilon) {
        // 2 C eps' <= eps/2 and 8 C^2 eps' <= eps/2, 2 D eps'' <= eps/2.
        const double eps = *config.epsilon;
        r.eps_mean = eps / std::max(4.0 * r.C, 16.0 * r.C * r.C);
        r.eps_variance = eps / (4.0 * r.D);
        const auto pm = ae::bits_for_epsilon(r.eps_mean);
        const auto pv = ae::bits_for_epsilon(r.eps_variance);
        if ((pm.needs_ideal || pv.needs_ideal) && s.mode == ae::AEMode::circuit) {
            throw ConfigError("epsilon " + std::to_string(eps) + " needs " + std::to_string(std::max(pm.t, pv.t)) +
                              " phase bits, beyond circuit mode; use --mode ideal");
        }
        r.t_mean = pm.t;
        r.t_variance = pv.t;
    } else {
        r.t_mean = r.t_variance = *config.t_bits;
        r.eps_mean = r.eps_variance = ae::worst_case_error(*config.t_bits);
    }

    data::QueryLedger ledger;
    r.means = adde::estimate_means(X, r.C, r.t_mean, s, &ledger);
    const auto& mu_hat = r.means.values;
    try {
        r.variances = adde::estimate_variances(X, mu_hat, r.D, r.t_variance, s, &ledger);
    } catch (const ConstantViolation& e) {
        if (e.constant() != "D") throw;
        const double before = r.D;
        r.D = adde::refit_D(X, mu_hat, fmt);
        r.retries.push_back("D: " + std::to_string(before) + " -> " + std::to_string(r.D));
        r.variances = adde::estimate_variances(X, mu_hat, r.D, r.t_variance, s, &ledger);
    }
    r.ledger = ledger.snapshot();

    r.estimated.source = adde::ModelSource::quantum;
    r.estimated.mu = mu_hat;
    r.estimated.sigma2 = data::apply_variance_policy(r.variances.values, config.policy, Tolerances::sigma_min,
                                                     &r.estimated.floored);
    for (std::size_t j = 0; j < d; ++j) {
        r.published_mean.push_back(2.0 * r.C * r.eps_mean);
        r.published_variance.push_back(2.0 * r.D * r.eps_variance + 8.0 * r.C * r.C * r.eps_mean);
        r.observed_mean.push_back(std::abs(mu_hat[j] - r.classical.mu[j]));
        r.observed_variance.push_back(std::abs(r.estimated.sigma2[j] - r.classical.sigma2[j]));
    }
    return r;
}

ordered_json fit_json(const FitReport& r) {
    auto runs = [](const std::vector<ae::AEResult>& v) {
        auto a = ordered_json::array();
        for (const auto& x : v) a.push_back(to_json(x));
        return a;
    };
    ordered_json j;
    j["rows"] = r.rows;
    j["cols"] = r.cols;
    j["constants"] = {{"C", r.C}, {"D", r.D}};
    j["retries"] = r.retries;
    j["t_bits"] = {{"mean", r.t_mean}, {"variance", r.t_variance}};
    j["precision"] = {{"eps_mean", r.eps_mean}, {"eps_variance", r.eps_variance}};
    j["mu_hat"] = r.estimated.mu;
    j["sigma2_hat"] = r.estimated.sigma2;
    j["sigma2_floored"] = r.estimated.floored;
    j["mu_classical"] = r.classical.mu;
    j["sigma2_classical"] = r.classical.sigma2;
    j["bounds"] = {{"published", {{"mean", r.published_mean}, {"variance", r.published_variance}}}};
    j["observed_errors"] = {{"mean", r.observed_mean}, {"variance", r.observed_variance}};
    j["ae_runs"] = {{"mean", runs(r.means.runs)}, {"variance", runs(r.variances.runs)}};
    j["ledger"] = to_json(r.ledger);
    return j;
}

}  // namespace qadsim::cli
