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

#include "qadsim/adde/classical.hpp"

#include <cmath>
#include <numbers>

#include "qadsim/error.hpp"

namespace qadsim::adde {

GaussianModel classical_fit(const data::DataMatrix& data, data::DegeneratePolicy policy, double floor) {
    const std::size_t m = data.rows(), d = data.cols();
    if (m < 1) throw DegenerateDataError("no training rows");
    GaussianModel g;
    g.mu.assign(d, 0.0);
    std::vector<double> var(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += data.at(i, j);
        g.mu[j] = s / static_cast<double>(m);
        double v = 0.0;
        for (std::size_t i = 0; i < m; ++i) v += (data.at(i, j) - g.mu[j]) * (data.at(i, j) - g.mu[j]);
        var[j] = v / static_cast<double>(m);
    }
    g.sigma2 = data::apply_variance_policy(var, policy, floor, &g.floored);
    return g;
}

double classical_log_density(const GaussianModel& model, const data::QueryPoint& x0) {
    const std::size_t d = model.mu.size();
    if (x0.dim() != d) {
        throw ConfigError("query has " + std::to_string(x0.dim()) + " features, model has " + std::to_string(d));
    }
    double lp = -0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi);
    for (std::size_t j = 0; j < d; ++j) {
        if (!(model.sigma2[j] > 0.0)) throw DegenerateDataError("feature " + std::to_string(j) + " has zero variance");
        const double z = x0.at(j) - model.mu[j];
        lp -= 0.5 * std::log(model.sigma2[j]);
        lp -= z * z / (2.0 * model.sigma2[j]);
    }
    return lp;
}

double log_density_estimate(double p, double q, std::size_t d, double T, double E) {
    const double dd = static_cast<double>(d);
    return -0.5 * dd * std::log(2.0 * std::numbers::pi) - 0.5 * dd * E * q - 0.5 * dd * T * T * p;
}

double exact_p(const GaussianModel& model, const data::QueryPoint& x0, double T) {
    const std::size_t d = model.mu.size();
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double r = (x0.at(j) - model.mu[j]) / (std::sqrt(model.sigma2[j]) * T);
        s += r * r;
    }
    return s / static_cast<double>(d);
}

double exact_q(const GaussianModel& model, double E) {
    double s = 0.0;
    for (double v : model.sigma2) s += std::log(v) / E;
    return s / static_cast<double>(model.sigma2.size());
}

bool flag_anomaly(double log_density, double delta) {
    if (!(delta > 0.0)) throw ConfigError("threshold delta must be positive, got " + std::to_string(delta));
    return log_density < std::log(delta);
}

}  // namespace qadsim::adde
