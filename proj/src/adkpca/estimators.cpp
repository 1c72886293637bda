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

#include "qadsim/adkpca/adkpca.hpp"
#include "qadsim/error.hpp"

namespace qadsim::adkpca {

namespace {

// Seed streams continue after the density pipeline's.
constexpr std::uint64_t kAStream = 3u << 20;
constexpr std::uint64_t kOmegaStream = 4u << 20;
constexpr std::uint64_t kBStream = 5u << 20;

double ratio(std::size_t padded, std::size_t n) { return static_cast<double>(padded) / static_cast<double>(n); }

std::uint64_t grover(int t) { return (std::uint64_t{1} << t) - 1; }

}  // namespace

ScalarEstimate estimate_a(const data::QueryPoint& x0, std::span<const double> mu_hat, double C_prime, int t,
                          const EstimatorSettings& s, data::QueryLedger* ledger) {
    if (mu_hat.size() != x0.dim()) throw ConfigError("mean estimate does not match the query dimension");
    auto prep = a_preparation(x0, mu_hat, C_prime, s);
    const double scale = ratio(x0.padded_dim(), x0.dim());
    ScalarEstimate out;
    out.run = ae::estimate_amplitude(prep, s.ae_config(t, kAStream), ledger);
    out.value = scale * out.run.a;
    out.encoded = scale * prep.exact_amplitude();
    return out;
}

VectorEstimate estimate_omegas(const data::DataMatrix& X, const data::QueryPoint& x0, std::span<const double> mu_hat,
                               double C_dprime, int t, const EstimatorSettings& s, data::QueryLedger* ledger) {
    data::check_compatible(X, x0);
    if (mu_hat.size() != X.cols()) throw ConfigError("mean estimate has the wrong length");
    std::vector<ae::StatePreparation> preps;
    for (std::size_t i = 0; i < X.rows(); ++i) preps.push_back(omega_preparation(X, x0, mu_hat, C_dprime, i, s));
    const double scale = ratio(X.padded_cols(), X.cols());
    VectorEstimate out;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        auto r = ae::estimate_amplitude(preps[i], s.ae_config(t, kOmegaStream + i), ledger);
        const double w = std::clamp(scale * (2.0 * r.a - 1.0), -1.0, 1.0);
        out.values.push_back(arith::quantize(w, s.format));
        out.encoded.push_back(scale * (2.0 * preps[i].exact_amplitude() - 1.0));
        out.runs.push_back(r);
    }
    return out;
}

ScalarEstimate estimate_b(std::span<const double> omega_hat, int t, const EstimatorSettings& s,
                          data::QueryLedger* ledger) {
    if (omega_hat.empty()) throw ConfigError("no overlaps");
    auto prep = b_preparation(omega_hat, s);
    const double scale = ratio(std::size_t{1} << data::index_bits(omega_hat.size()), omega_hat.size());
    ScalarEstimate out;
    out.run = ae::estimate_amplitude(prep, s.ae_config(t, kBStream), ledger);
    out.value = scale * out.run.a;
    out.encoded = scale * prep.exact_amplitude();
    return out;
}

std::uint64_t planned_grover(std::size_t d, std::size_t M, int t_mean, int t_a, int t_omega, int t_b) {
    return d * grover(t_mean) + grover(t_a) + M * grover(t_omega) + grover(t_b);
}

Budget plan_budget_kpca(double eps, std::size_t d, std::size_t M, const Constants& k) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("epsilon must be positive, got " + std::to_string(eps));
    if (d == 0 || M < 2) throw ConfigError("the budget needs d >= 1 and M >= 2");
    if (!(k.C_dprime > 0.0)) throw DegenerateDataError("budget needs a positive C''");
    const double dd = static_cast<double>(d);
    const double c2 = k.C_dprime * k.C_dprime;
    Budget b;
    b.epsilon = eps;
    b.target = 2.0 * eps;
    b.eps_mean = eps / (48.0 * dd * dd * k.C_dprime);
    b.eps_a_published = eps / (dd * c2);
    const double wide = std::max(k.C_prime, k.C_dprime);
    b.eps_a = eps / (dd * wide * wide);
    b.eps_omega = eps / (3.0 * dd * dd * c2);
    b.eps_b = eps / (3.0 * dd * dd * c2);
    const auto p1 = ae::bits_for_epsilon(b.eps_mean);
    const auto p2 = ae::bits_for_epsilon(b.eps_a);
    const auto p3 = ae::bits_for_epsilon(b.eps_omega);
    const auto p4 = ae::bits_for_epsilon(b.eps_b);
    b.t_mean = p1.t;
    b.t_a = p2.t;
    b.t_omega = p3.t;
    b.t_b = p4.t;
    b.needs_ideal = p1.needs_ideal || p2.needs_ideal || p3.needs_ideal || p4.needs_ideal;
    b.planned_grover = planned_grover(d, M, b.t_mean, b.t_a, b.t_omega, b.t_b);
    return b;
}

}  // namespace qadsim::adkpca
