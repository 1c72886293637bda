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
#include <limits>

#include "qadsim/adde/pipeline.hpp"
#include "qadsim/error.hpp"

namespace qadsim::adde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t grover(int t) { return (std::uint64_t{1} << t) - 1; }

// Largest |ln(v) - ln(c)| for v within b of c.
double log_spread(double c, double b) {
    if (b >= c) return kInf;
    return std::max(std::log(c + b) - std::log(c), std::log(c) - std::log(c - b));
}

}  // namespace

std::uint64_t planned_grover(std::size_t d, int t_mean, int t_variance, int t_density) {
    return d * grover(t_mean) + d * grover(t_variance) + 2 * grover(t_density);
}

ErrorBudget plan_budget(double eps, std::size_t d, const data::Constants& k, double min_sigma2) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("epsilon must be positive, got " + std::to_string(eps));
    if (d == 0) throw ConfigError("no features");
    if (!(k.T > 0.0 && k.C > 0.0 && k.D > 0.0)) throw DegenerateDataError("budget needs positive T, C and D");
    if (!(min_sigma2 > 0.0)) throw DegenerateDataError("budget needs a positive minimum variance");
    const double dd = static_cast<double>(d);
    const double T2 = k.T * k.T, C2 = k.C * k.C;
    ErrorBudget b;
    b.epsilon = eps;
    b.eps_density = eps / (3.0 * dd * T2);
    b.eps_variance = min_sigma2 * eps / (3.0 * dd * T2 * k.D);
    b.eps_mean = min_sigma2 * eps / (3.0 * dd * (8.0 * T2 * C2 + 8.0 * C2));
    auto p1 = ae::bits_for_epsilon(b.eps_mean);
    auto p2 = ae::bits_for_epsilon(b.eps_variance);
    auto p3 = ae::bits_for_epsilon(b.eps_density);
    b.t_mean = p1.t;
    b.t_variance = p2.t;
    b.t_density = p3.t;
    b.needs_ideal = p1.needs_ideal || p2.needs_ideal || p3.needs_ideal;
    b.planned_grover = planned_grover(d, b.t_mean, b.t_variance, b.t_density);
    return b;
}

BoundChain published_chain(double eps_mean, double eps_variance, double eps_density, std::size_t d,
                           const data::Constants& k, double min_sigma2) {
    const double dd = static_cast<double>(d);
    const double C2 = k.C * k.C, T2 = k.T * k.T;
    const double r = (8.0 * C2 * eps_mean + 2.0 * k.D * eps_variance) / min_sigma2;
    BoundChain c;
    c.log_variance_term = k.E * dd * eps_density + dd * (r < 1.0 ? -std::log1p(-r) : kInf);
    c.quadratic_term = dd * T2 * eps_density + dd * T2 * r + dd * 8.0 * C2 * eps_mean / min_sigma2;
    c.composed = 0.5 * (c.log_variance_term + c.quadratic_term);
    return c;
}

double composed_log_density_bound(const data::QueryPoint& x0, std::span<const double> mu_hat,
                                  std::span<const double> sigma2_hat, std::span<const double> mean_bound,
                                  std::span<const double> variance_bound, double p_bound, double q_bound, double T,
                                  double E) {
    const std::size_t d = x0.dim();
    const double dd = static_cast<double>(d);
    double log_term = dd * E * q_bound;
    double quad_term = dd * T * T * p_bound;
    for (std::size_t j = 0; j < d; ++j) {
        const double s = sigma2_hat[j], bs = variance_bound[j];
        log_term += log_spread(s, bs);
        if (bs >= s) return kInf;
        const double z = x0.at(j) - mu_hat[j];
        const double bz = mean_bound[j];
        const double c = z * z / s;
        const double zmax = std::abs(z) + bz;
        const double zmin = std::max(0.0, std::abs(z) - bz);
        const double hi = zmax * zmax / (s - bs);
        const double lo = zmin * zmin / (s + bs);
        quad_term += std::max(hi - c, c - lo);
    }
    return 0.5 * (log_term + quad_term);
}

}  // namespace qadsim::adde
