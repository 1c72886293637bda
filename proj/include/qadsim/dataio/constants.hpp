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

// Data-dependent normalisers used by the rotations:
//   C  = max |x_j^i|                  D  = max |x_j^i - mu_j|
//   T  = smallest power of two >= max |x0_j - mu_j| / sigma_j
//   E  = max |ln sigma_j^2|           C' = max |x0_j - mu_j|
//   C''= max |(x_j^i - mu_j)(x0_j - mu_j)|
// All maxima run over unpadded entries only. E = 0 (all variances exactly 1)
// is replaced by 1; any other zero constant goes through the degenerate-data
// policy.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "qadsim/config.hpp"
#include "qadsim/dataio/data.hpp"

namespace qadsim::data {

enum class DegeneratePolicy { error, epsilon_floor };

const char* to_string(DegeneratePolicy p);
/// "error" or "epsilon-floor"; ConfigError otherwise.
DegeneratePolicy parse_policy(const std::string& s);

struct Constants {
    double C = 0.0;
    double D = 0.0;
    double T = 1.0;
    double E = 0.0;
    double C_prime = 0.0;
    double C_dprime = 0.0;
    /// Names of constants (or "sigma2[j]") replaced by the floor under epsilon-floor.
    std::vector<std::string> floored;
};

/// Variances below `floor` raise DegenerateDataError listing every offending
/// feature (policy error) or are raised to `floor` (policy epsilon-floor).
std::vector<double> apply_variance_policy(std::span<const double> sigma2, DegeneratePolicy policy,
                                          double floor = Tolerances::sigma_min,
                                          std::vector<std::string>* floored = nullptr);

/// Smallest 2^k, k >= 0, with 2^k >= x.
double power_of_two_at_least(double x);

Constants compute_constants(const DataMatrix& data, const QueryPoint& query, std::span<const double> mu,
                            std::span<const double> sigma2, DegeneratePolicy policy,
                            double floor = Tolerances::sigma_min);

}  // namespace qadsim::data
