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

// Command-line front end: flag parsing, the `fit` command, the verify suites
// and report output. tools/qadsim is a thin main() around run().

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qadsim/adde/pipeline.hpp"
#include "qadsim/cli/report.hpp"

namespace qadsim::cli {

enum class ExitCode : int { ok = 0, anomaly = 1, error = 2 };

struct RunConfig {
    std::string subcommand;
    std::string data_path, query_path;
    bool header = false;
    std::optional<double> epsilon;
    std::optional<int> t_bits;
    double delta = 0.01;
    ae::AEMode mode = ae::AEMode::ideal;
    std::optional<std::uint64_t> seed;
    arith::Format format{8, 16, true};
    data::DegeneratePolicy policy = data::DegeneratePolicy::error;
    adde::Route route = adde::Route::fused;
    flawlab::ChiReading chi = flawlab::ChiReading::component_norm;
    std::string suite;
    int seeds = 100;
    std::string out_path;

    /// ConfigError on a combination the subcommand cannot run.
    void validate() const;
    adde::EstimatorSettings settings() const;
    ordered_json to_json() const;
};

/// Parses argv. Throws ConfigError with the usage text appended on bad flags;
/// returns nullopt after printing help.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Runs the subcommand; the report goes to --out (or `out` when none is given)
/// and a short summary to `out` (or `err`).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// ---- fit -------------------------------------------------------------------

/// Steps 1 and 2 of the density pipeline without a query point. An epsilon
/// asks for mean and variance errors within epsilon under the published bounds.
struct FitReport {
    std::size_t rows = 0, cols = 0;
    adde::GaussianModel classical, estimated;
    adde::VectorEstimate means, variances;
    double C = 0.0, D = 0.0;
    std::vector<std::string> retries;
    int t_mean = 0, t_variance = 0;
    double eps_mean = 0.0, eps_variance = 0.0;
    std::vector<double> published_mean, published_variance;
    std::vector<double> observed_mean, observed_variance;
    data::LedgerSnapshot ledger;
};

FitReport fit_model(const data::DataMatrix& X, const RunConfig& config);
ordered_json fit_json(const FitReport& r);

// ---- verification suites ---------------------------------------------------

/// bounds | equivalence | scaling | flaws. The result carries "pass", the
/// pass/fail counts and one entry per case.
ordered_json verify_suite(const std::string& name, int seeds, const RunConfig& config);

}  // namespace qadsim::cli
