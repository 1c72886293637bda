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

#include "qadsim/dataio/constants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qadsim/error.hpp"

namespace qadsim::data {

const char* to_string(DegeneratePolicy p) { return p == DegeneratePolicy::error ? "error" : "epsilon-floor"; }

DegeneratePolicy parse_policy(const std::string& s) {
    if (s == "error") return DegeneratePolicy::error;
    if (s == "epsilon-floor") return DegeneratePolicy::epsilon_floor;
    throw ConfigError("unknown degenerate-data policy '" + s + "' (expected error|epsilon-floor)");
}

std::vector<double> apply_variance_policy(std::span<const double> sigma2, DegeneratePolicy policy, double floor,
                                          std::vector<std::string>* floored) {
    std::vector<double> out(sigma2.begin(), sigma2.end());
    std::vector<std::size_t> bad;
    for (std::size_t j = 0; j < out.size(); ++j)
        if (!(out[j] >= floor)) bad.push_back(j);
    if (bad.empty()) return out;
    if (policy == DegeneratePolicy::error) {
        std::ostringstream os;
        os << "degenerate variance (below " << floor << ") in feature";
        os << (bad.size() > 1 ? "s" : "");
        for (std::size_t k = 0; k < bad.size(); ++k) os << (k ? ", " : " ") << bad[k];
        throw DegenerateDataError(os.str());
    }
    for (auto j : bad) {
        out[j] = floor;
        if (floored) floored->push_back("sigma2[" + std::to_string(j) + "]");
    }
    return out;
}

double power_of_two_at_least(double x) {
    double t = 1.0;
    while (t < x) t *= 2.0;
    return t;
}

Constants compute_constants(const DataMatrix& data, const QueryPoint& query, std::span<const double> mu,
                            std::span<const double> sigma2, DegeneratePolicy policy, double floor) {
    check_compatible(data, query);
    const std::size_t m = data.rows(), d = data.cols();
    if (mu.size() != d || sigma2.size() != d) throw DomainError("mu/sigma2 length does not match the data");

    Constants k;
    auto s2 = apply_variance_policy(sigma2, policy, floor, &k.floored);
    double ratio = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double dz = query.at(j) - mu[j];
        for (std::size_t i = 0; i < m; ++i) {
            const double x = data.at(i, j);
            k.C = std::max(k.C, std::abs(x));
            k.D = std::max(k.D, std::abs(x - mu[j]));
            k.C_dprime = std::max(k.C_dprime, std::abs((x - mu[j]) * dz));
        }
        k.E = std::max(k.E, std::abs(std::log(s2[j])));
        k.C_prime = std::max(k.C_prime, std::abs(dz));
        ratio = std::max(ratio, std::abs(dz) / std::sqrt(s2[j]));
    }
    k.T = power_of_two_at_least(ratio);

    auto positive = [&](double& v, const char* name) {
        if (v > 0.0) return;
        if (policy == DegeneratePolicy::error) {
            throw DegenerateDataError(std::string("constant ") + name + " is zero");
        }
        v = floor;
        k.floored.push_back(name);
    };
    positive(k.C, "C");
    positive(k.D, "D");
    // Every ln sigma_j^2 is 0, so any positive E gives the same zero amplitudes.
    if (k.E == 0.0) k.E = 1.0;
    positive(k.C_prime, "C'");
    positive(k.C_dprime, "C''");
    return k;
}

}  // namespace qadsim::data
