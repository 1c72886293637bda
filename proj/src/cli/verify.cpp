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

#include "qadsim/cli/cli.hpp"
#include "qadsim/error.hpp"

namespace qadsim::cli {

namespace {

struct Tally {
    int passed = 0, failed = 0;
    ordered_json cases = ordered_json::array();

    void add(bool ok, ordered_json detail) {
        (ok ? passed : failed)++;
        detail["pass"] = ok;
        cases.push_back(std::move(detail));
    }

    ordered_json finish(const std::string& suite) const {
        return {{"suite", suite}, {"pass", failed == 0}, {"passed", passed}, {"failed", failed}, {"cases", cases}};
    }
};

adde::EstimatorSettings seeded(const RunConfig& c, std::uint64_t instance) {
    auto s = c.settings();
    if (s.mode == ae::AEMode::circuit) s.seed = adde::derive_seed(c.seed.value_or(0), instance);
    return s;
}

/// Least-squares slope of ln y against ln x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ordered_json bounds_suite(int seeds, const RunConfig& c) {
    const int t = c.t_bits.value_or(10);
    Tally tally;
    for (int n = 0; n < seeds; ++n) {
        const auto seed = static_cast<std::uint64_t>(n);
        auto inst = data::random_instance(seed);
        adde::DensityConfig dc;
        dc.settings = seeded(c, seed);
        dc.t_bits = t;
        dc.policy = c.policy;
        auto a = adde::run_adde(inst.data, inst.query, dc);
        bool mean_ok = true, var_ok = true;
        for (std::size_t j = 0; j < a.cols; ++j) {
            mean_ok = mean_ok && a.observed.mean[j] <= a.published_bounds.mean[j];
            var_ok = var_ok && a.observed.variance[j] <= a.published_bounds.variance[j];
        }
        adkpca::KpcaConfig kc;
        kc.settings = dc.settings;
        kc.t_bits = t;
        auto k = adkpca::run_adkpca(inst.data, inst.query, kc);
        const bool dist_ok = k.observed.distance <= k.published_bounds.distance;
        const bool b_ok = k.observed.b <= k.published_bounds.b;
        tally.add(mean_ok && var_ok && dist_ok && b_ok,
                  {{"seed", seed},
                   {"mean", mean_ok},
                   {"variance", var_ok},
                   {"distance", dist_ok},
                   {"b", b_ok}});
    }
    auto out = tally.finish("bounds");
    out["t_bits"] = t;
    return out;
}

ordered_json equivalence_suite(int seeds, const RunConfig& c) {
    const int t = c.t_bits.value_or(3);
    data::InstanceSpec spec;
    spec.min_rows = spec.max_rows = 2;
    spec.min_cols = spec.max_cols = 2;
    auto s = c.settings();
    s.mode = ae::AEMode::ideal;
    Tally tally;
    for (int n = 0; n < seeds; ++n) {
        const auto seed = static_cast<std::uint64_t>(n);
        auto inst = data::random_instance(seed, spec);
        auto g = adde::classical_fit(inst.data, c.policy);
        double C = 0.0;
        for (std::size_t i = 0; i < inst.data.rows(); ++i)
            for (std::size_t j = 0; j < inst.data.cols(); ++j)
                C = std::max(C, std::abs(arith::quantize(inst.data.at(i, j), s.format)));
        const double D = adde::refit_D(inst.data, g.mu, s.format);
        auto m = adde::compare_branches(adde::Stage::mean, inst.data, {}, C, t, s);
        auto v = adde::compare_branches(adde::Stage::variance, inst.data, g.mu, D, t, s);
        const double worst = std::max(m.max_difference, v.max_difference);
        tally.add(worst <= 1e-12, {{"seed", seed}, {"mean", m.max_difference}, {"variance", v.max_difference}});
    }
    auto out = tally.finish("equivalence");
    out["t_bits"] = t;
    out["tolerance"] = 1e-12;
    return out;
}

ordered_json scaling_suite(int seeds, const RunConfig& c) {
    constexpr int kLo = 6, kHi = 11;
    Tally tally;
    for (int n = 0; n < seeds; ++n) {
        const auto seed = static_cast<std::uint64_t>(n);
        auto inst = data::random_instance(seed);
        std::vector<double> inv_eps, adde_q, kpca_q;
        bool per_run = true;
        for (int t = kLo; t <= kHi; ++t) {
            const std::uint64_t expect = (std::uint64_t{1} << t) - 1;
            adde::DensityConfig dc;
            dc.settings = seeded(c, seed);
            dc.t_bits = t;
            dc.policy = c.policy;
            auto a = adde::run_adde(inst.data, inst.query, dc);
            for (const auto* v : {&a.means.runs, &a.variances.runs})
                for (const auto& r : *v) per_run = per_run && r.grover_applications == expect;
            per_run = per_run && a.p.run.grover_applications == expect && a.q.run.grover_applications == expect;
            adkpca::KpcaConfig kc;
            kc.settings = dc.settings;
            kc.t_bits = t;
            auto k = adkpca::run_adkpca(inst.data, inst.query, kc);
            per_run = per_run && k.ledger.grover == adkpca::planned_grover(k.cols, k.rows, t, t, t, t);
            inv_eps.push_back(1.0 / ae::worst_case_error(t));
            adde_q.push_back(static_cast<double>(a.ledger.grover));
            kpca_q.push_back(static_cast<double>(k.ledger.grover));
        }
        const double sa = loglog_slope(inv_eps, adde_q);
        const double sk = loglog_slope(inv_eps, kpca_q);
        const bool ok = per_run && std::abs(sa - 1.0) <= 0.05 && std::abs(sk - 1.0) <= 0.05;
        tally.add(ok, {{"seed", seed},
                       {"per_run_count_exact", per_run},
                       {"slope_adde", sa},
                       {"slope_adkpca", sk},
                       {"grover_adde", adde_q},
                       {"grover_adkpca", kpca_q}});
    }
    auto out = tally.finish("scaling");
    out["t_range"] = {kLo, kHi};
    out["slope_tolerance"] = 0.05;
    return out;
}

ordered_json flaws_suite(int seeds) {
    const double e = std::numbers::e;
    Tally tally;

    auto m2 = flawlab::audit_m2({e, e});
    tally.add(std::abs(m2.gap_claimed - 2.0) <= 1e-9,
              {{"check", "chi=(e,e) gap"}, {"actual", m2.actual}, {"claimed", m2.claimed}, {"gap", m2.gap_claimed}});

    auto X = data::DataMatrix::from_rows({{1, 2}, {3, 4}});
    auto x0 = data::QueryPoint::from_values({2.5, 2.0});
    auto rep = flawlab::run_flaws(X, x0, 0);
    tally.add(rep.normalization.discrepancy > 0.01,
              {{"check", "generic 2x2 discrepancy"}, {"discrepancy", rep.normalization.discrepancy}});
    bool analog = rep.encoding.size() == 2;
    for (const auto& site : rep.encoding) analog = analog && site.encoding == flawlab::Encoding::analog;
    tally.add(analog, {{"check", "R1 and R2 analog"}});

    // chi_j in {1, e^2} closes the gap; anything else leaves one.
    for (int n = 0; n < seeds; ++n) {
        std::vector<double> fixed, other;
        for (int j = 0; j < 1 + n % 4; ++j) {
            fixed.push_back(((n >> j) & 1) ? std::exp(2.0) : 1.0);
            other.push_back(0.5 + 0.37 * (n + j + 1));
        }
        const double gf = flawlab::audit_m2(fixed).gap_claimed;
        const double go = flawlab::audit_m2(other).gap_claimed;
        tally.add(std::abs(gf) <= 1e-12 && std::abs(go) > 1e-9, {{"check", "gap zero set"}, {"seed", n}, {"gap_fixed", gf}, {"gap_other", go}});
    }
    return tally.finish("flaws");
}

}  // namespace

ordered_json verify_suite(const std::string& name, int seeds, const RunConfig& config) {
    if (seeds < 1) throw ConfigError("--seeds must be at least 1");
    if (name == "bounds") return bounds_suite(seeds, config);
    if (name == "equivalence") return equivalence_suite(seeds, config);
    if (name == "scaling") return scaling_suite(seeds, config);
    if (name == "flaws") return flaws_suite(seeds);
    throw ConfigError("unknown suite '" + name + "' (expected bounds|equivalence|scaling|flaws)");
}

}  // namespace qadsim::cli
