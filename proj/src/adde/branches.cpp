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

#include "qadsim/adde/pipeline.hpp"
#include "qadsim/error.hpp"

namespace qadsim::adde {

BranchComparison compare_branches(Stage stage, const data::DataMatrix& X, std::span<const double> mu_hat,
                                  double scale, int t, const EstimatorSettings& settings) {
    EstimatorSettings s = settings;
    s.route = Route::fused;
    auto build = [&](std::optional<std::size_t> j) {
        return stage == Stage::mean ? mean_preparation(X, j, scale, s) : variance_preparation(X, j, mu_hat, scale, s);
    };
    const std::size_t d = X.cols();
    BranchComparison out;
    for (std::size_t j = 0; j < d; ++j) {
        auto p = build(j);
        out.branch.push_back(ae::phase_distribution(p, t, ae::QpeStrategy::gate_level));
        out.branch_a.push_back(p.exact_amplitude());
    }

    // Coherent run: j in uniform superposition, controlled powers of the j-blocked Grover operator.
    auto prep = build(std::nullopt);
    std::vector<std::pair<std::string, int>> spec;
    for (const auto& r : prep.layout.registers()) spec.emplace_back(r.name, r.width);
    spec.emplace_back("phase", t);
    sim::RegisterLayout layout(spec);
    sim::StateVector st(layout);
    sim::apply_hadamard_block(st, "j");
    prep.A->apply(st);

    const std::size_t nd = X.padded_cols();
    std::vector<double> pj(nd, 0.0), pgood(nd, 0.0);
    for (std::uint64_t i = 0; i < st.dim(); ++i) {
        const double w = std::norm(st.amplitude(i));
        const auto j = layout.label(i, "j");
        pj[j] += w;
        if (prep.good(layout.label(i, prep.good_register))) pgood[j] += w;
    }
    for (std::size_t j = 0; j < d; ++j) out.coherent_a.push_back(pgood[j] / pj[j]);

    sim::apply_hadamard_block(st, "phase");
    auto q = ae::build_grover(prep);
    const auto& ph = layout.at("phase");
    for (int k = 0; k < t; ++k) {
        const std::uint64_t bit = std::uint64_t{1} << (ph.offset + k);
        for (std::uint64_t r = 0; r < (std::uint64_t{1} << k); ++r) q->apply(st, sim::Control{bit, bit});
    }
    sim::apply_qft(st, "phase", true);
    const std::size_t ny = std::size_t{1} << t;
    std::vector<std::vector<double>> joint(nd, std::vector<double>(ny, 0.0));
    for (std::uint64_t i = 0; i < st.dim(); ++i) {
        joint[layout.label(i, "j")][layout.label(i, "phase")] += std::norm(st.amplitude(i));
    }
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> row(ny);
        for (std::size_t y = 0; y < ny; ++y) row[y] = joint[j][y] / pj[j];
        out.coherent.push_back(std::move(row));
    }

    for (std::size_t j = 0; j < d; ++j) {
        out.max_difference = std::max(out.max_difference, std::abs(out.branch_a[j] - out.coherent_a[j]));
        for (std::size_t y = 0; y < ny; ++y)
            out.max_difference = std::max(out.max_difference, std::abs(out.branch[j][y] - out.coherent[j][y]));
    }
    return out;
}

}  // namespace qadsim::adde
