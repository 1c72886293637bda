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

#include <cmath>
#include <numbers>

#include "qadsim/adde/pipeline.hpp"
#include "qadsim/error.hpp"

namespace qadsim::adde {

std::string to_string(Route r) { return r == Route::fused ? "fused" : "explicit"; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + stream * 0x9e3779b97f4a7c15ULL + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ae::AEConfig EstimatorSettings::ae_config(int t, std::uint64_t stream) const {
    ae::AEConfig c{t, mode, std::nullopt, strategy};
    if (seed) c.seed = derive_seed(*seed, stream);
    return c;
}

double amplitude_error(const ae::AEResult& r) {
    if (r.mode == ae::AEMode::ideal) return std::numbers::pi / std::ldexp(1.0, r.t + 1);
    return ae::ae_error_bound(r.a, r.t);
}

namespace {

// Seed streams: one per AE run, disjoint across steps.
constexpr std::uint64_t kMeanStream = 0;
constexpr std::uint64_t kVarianceStream = 1u << 20;
constexpr std::uint64_t kPStream = 2u << 20;
constexpr std::uint64_t kQStream = (2u << 20) + 1;

double ratio(std::size_t padded, std::size_t n) { return static_cast<double>(padded) / static_cast<double>(n); }

}  // namespace

VectorEstimate estimate_means(const data::DataMatrix& X, double C, int t, const EstimatorSettings& s,
                              data::QueryLedger* ledger) {
    const std::size_t d = X.cols();
    std::vector<ae::StatePreparation> preps;
    for (std::size_t j = 0; j < d; ++j) preps.push_back(mean_preparation(X, j, C, s));
    const double scale = C * ratio(X.padded_rows(), X.rows());
    VectorEstimate out;
    for (std::size_t j = 0; j < d; ++j) {
        auto r = ae::estimate_amplitude(preps[j], s.ae_config(t, kMeanStream + j), ledger);
        out.values.push_back(scale * (2.0 * r.a - 1.0));
        out.encoded.push_back(scale * (2.0 * preps[j].exact_amplitude() - 1.0));
        out.runs.push_back(r);
    }
    return out;
}

VectorEstimate estimate_variances(const data::DataMatrix& X, std::span<const double> mu_hat, double D, int t,
                                  const EstimatorSettings& s, data::QueryLedger* ledger) {
    const std::size_t d = X.cols();
    if (mu_hat.size() != d) throw ConfigError("mean estimate has the wrong length");
    std::vector<ae::StatePreparation> preps;
    for (std::size_t j = 0; j < d; ++j) preps.push_back(variance_preparation(X, j, mu_hat, D, s));
    const double scale = D * D * ratio(X.padded_rows(), X.rows());
    VectorEstimate out;
    for (std::size_t j = 0; j < d; ++j) {
        auto r = ae::estimate_amplitude(preps[j], s.ae_config(t, kVarianceStream + j), ledger);
        out.values.push_back(scale * r.a);
        out.encoded.push_back(scale * preps[j].exact_amplitude());
        out.runs.push_back(r);
    }
    return out;
}

ScalarEstimate estimate_p(const data::QueryPoint& x0, std::span<const double> mu_hat,
                          std::span<const double> sigma2_hat, double T, int t, const EstimatorSettings& s,
                          data::QueryLedger* ledger) {
    if (mu_hat.size() != x0.dim() || sigma2_hat.size() != x0.dim()) {
        throw ConfigError("estimate vectors do not match the query dimension");
    }
    auto prep = p_preparation(x0, mu_hat, sigma2_hat, T, s);
    const double scale = ratio(x0.padded_dim(), x0.dim());
    ScalarEstimate out;
    out.run = ae::estimate_amplitude(prep, s.ae_config(t, kPStream), ledger);
    out.value = scale * out.run.a;
    out.encoded = scale * prep.exact_amplitude();
    return out;
}

ScalarEstimate estimate_q(std::span<const double> sigma2_hat, double E, int t, const EstimatorSettings& s,
                          data::QueryLedger* ledger) {
    auto prep = q_preparation(sigma2_hat, E, s);
    const std::size_t d = sigma2_hat.size();
    const double scale = ratio(std::size_t{1} << data::index_bits(d), d);
    ScalarEstimate out;
    out.run = ae::estimate_amplitude(prep, s.ae_config(t, kQStream), ledger);
    out.value = scale * (2.0 * out.run.a - 1.0);
    out.encoded = scale * (2.0 * prep.exact_amplitude() - 1.0);
    return out;
}

double p_formula(const data::QueryPoint& x0, std::span<const double> mu, std::span<const double> sigma2, double T) {
    double sum = 0.0;
    for (std::size_t j = 0; j < x0.dim(); ++j) {
        const double r = (x0.at(j) - mu[j]) / (std::sqrt(sigma2[j]) * T);
        sum += r * r;
    }
    return sum / static_cast<double>(x0.dim());
}

double q_formula(std::span<const double> sigma2, double E) {
    double sum = 0.0;
    for (double v : sigma2) sum += std::log(v) / E;
    return sum / static_cast<double>(sigma2.size());
}

}  // namespace qadsim::adde
