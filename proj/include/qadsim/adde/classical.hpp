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

// Per-feature Gaussian density model: the classical reference for the
// quantum pipeline and the final assembly shared by both.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qadsim/config.hpp"
#include "qadsim/dataio/constants.hpp"
#include "qadsim/dataio/data.hpp"

namespace qadsim::adde {

enum class ModelSource { classical, quantum };

struct GaussianModel {
    std::vector<double> mu;
    std::vector<double> sigma2;  // population variance (divisor M)
    ModelSource source = ModelSource::classical;
    std::vector<std::string> floored;
};

/// Population mean and variance per feature. Zero variances follow `policy`.
GaussianModel classical_fit(const data::DataMatrix& data, data::DegeneratePolicy policy = data::DegeneratePolicy::error,
                            double floor = Tolerances::sigma_min);

/// -(d/2) ln 2pi - sum ln sigma_j - sum (x_j - mu_j)^2 / (2 sigma_j^2).
double classical_log_density(const GaussianModel& model, const data::QueryPoint& x0);

/// -(d/2) ln 2pi - (1/2) d E q - (1/2) d T^2 p.
double log_density_estimate(double p, double q, std::size_t d, double T, double E);

/// The exact p and q that make log_density_estimate reproduce classical_log_density.
double exact_p(const GaussianModel& model, const data::QueryPoint& x0, double T);
double exact_q(const GaussianModel& model, double E);

/// ln P < ln delta (strict). ConfigError for delta <= 0.
bool flag_anomaly(double log_density, double delta);

}  // namespace qadsim::adde
