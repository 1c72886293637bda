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
#include "qadsim/arith/fixed_point.hpp"
#include "qadsim/error.hpp"

namespace qadsim::adkpca {

MomentModel classical_moments(const data::DataMatrix& X) {
    const std::size_t M = X.rows(), d = X.cols();
    if (M < 2) throw DegenerateDataError("the covariance needs at least 2 rows, got " + std::to_string(M));
    MomentModel m;
    m.mu.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < M; ++i) s += X.at(i, j);
        m.mu[j] = s / static_cast<double>(M);
    }
    m.cov.assign(d, std::vector<double>(d, 0.0));
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < M; ++i) s += (X.at(i, a) - m.mu[a]) * (X.at(i, b) - m.mu[b]);
            m.cov[a][b] = m.cov[b][a] = s / static_cast<double>(M - 1);
        }
    }
    return m;
}

double classical_proximity(const MomentModel& model, const data::QueryPoint& x0) {
    const std::size_t d = model.mu.size();
    if (x0.dim() != d) throw DomainError("query dimension does not match the model");
    std::vector<double> z(d);
    double dist = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        z[j] = x0.at(j) - model.mu[j];
        dist += z[j] * z[j];
    }
    double quad = 0.0;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) quad += z[a] * model.cov[a][b] * z[b];
    return dist - quad;
}

double bridge_quadratic(const data::DataMatrix& X, std::span<const double> mu, const data::QueryPoint& x0) {
    const std::size_t M = X.rows(), d = X.cols();
    if (M < 2) throw DegenerateDataError("the covariance needs at least 2 rows");
    double s = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < d; ++j) dot += (x0.at(j) - mu[j]) * (X.at(i, j) - mu[j]);
        s += dot * dot;
    }
    return s / static_cast<double>(M - 1);
}

Constants compute_constants(const data::DataMatrix& X, const data::QueryPoint& x0, std::span<const double> mu,
                            const arith::Format& fmt) {
    data::check_compatible(X, x0);
    Constants k;
    for (std::size_t j = 0; j < X.cols(); ++j) {
        const double dz = x0.at(j) - mu[j];
        k.C_prime = std::max(k.C_prime, std::abs(dz));
        for (std::size_t i = 0; i < X.rows(); ++i) {
            k.C = std::max({k.C, std::abs(X.at(i, j)), std::abs(arith::quantize(X.at(i, j), fmt))});
            k.C_dprime = std::max(k.C_dprime, std::abs((X.at(i, j) - mu[j]) * dz));
        }
    }
    if (!(k.C > 0.0)) throw DegenerateDataError("constant C is zero (all data entries are 0)");
    if (k.C_prime == 0.0) k.C_prime = 1.0;
    if (k.C_dprime == 0.0) k.C_dprime = 1.0;
    return k;
}

double held_product(double x, double x0, double mu, const arith::Format& fmt) {
    return arith::quantize(adde::held_difference(x, mu, fmt) * adde::held_difference(x0, mu, fmt), fmt);
}

double refit_C_prime(const data::QueryPoint& x0, std::span<const double> mu_hat, const arith::Format& fmt) {
    double m = 0.0;
    for (std::size_t j = 0; j < x0.dim(); ++j) m = std::max(m, std::abs(adde::held_difference(x0.at(j), mu_hat[j], fmt)));
    return m > 0.0 ? m : 1.0;
}

double refit_C_dprime(const data::DataMatrix& X, const data::QueryPoint& x0, std::span<const double> mu_hat,
                      const arith::Format& fmt) {
    double m = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j)
            m = std::max(m, std::abs(held_product(X.at(i, j), x0.at(j), mu_hat[j], fmt)));
    return m > 0.0 ? m : 1.0;
}

double proximity_estimate(double a, double b, std::size_t d, std::size_t M, double C_prime, double C_dprime) {
    if (M < 2) throw ConfigError("the proximity measure needs at least 2 rows");
    const double dd = static_cast<double>(d), mm = static_cast<double>(M);
    return dd * C_prime * C_prime * a - (mm / (mm - 1.0)) * (dd * C_dprime) * (dd * C_dprime) * b;
}

double a_formula(const data::QueryPoint& x0, std::span<const double> mu, double C_prime) {
    double s = 0.0;
    for (std::size_t j = 0; j < x0.dim(); ++j) {
        const double r = (x0.at(j) - mu[j]) / C_prime;
        s += r * r;
    }
    return s / static_cast<double>(x0.dim());
}

std::vector<double> omega_formula(const data::DataMatrix& X, const data::QueryPoint& x0, std::span<const double> mu,
                                  double C_dprime) {
    std::vector<double> w(X.rows(), 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < X.cols(); ++j) s += (x0.at(j) - mu[j]) * (X.at(i, j) - mu[j]) / C_dprime;
        w[i] = s / static_cast<double>(X.cols());
    }
    return w;
}

double b_formula(std::span<const double> omega) {
    double s = 0.0;
    for (double w : omega) s += w * w;
    return s / static_cast<double>(omega.size());
}

}  // namespace qadsim::adkpca
