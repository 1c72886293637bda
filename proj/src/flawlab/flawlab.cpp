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

#include "qadsim/flawlab/flawlab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "qadsim/config.hpp"
#include "qadsim/error.hpp"

namespace qadsim::flawlab {

namespace {

using Amp = std::complex<double>;

constexpr std::size_t kMaxSide = 4;

sim::StateVector normalized_state(sim::RegisterLayout layout, std::vector<Amp> v, double& written_norm) {
    double n = 0.0;
    for (const auto& a : v) n += std::norm(a);
    written_norm = std::sqrt(n);
    for (auto& a : v) a /= written_norm;
    return sim::StateVector::from_amplitudes(std::move(layout), std::move(v));
}

// Builds sum_j |j>(f_j |0> + sqrt(1 - g_j)|1>) over the features in `use`
// and reads I (x) |0><0| on it. The square root may be imaginary.
ObservableAudit audit_pairs(const std::vector<double>& f, const std::vector<double>& g,
                            const std::vector<std::size_t>& use) {
    ObservableAudit a;
    a.norm_defect.assign(f.size(), 0.0);
    for (std::size_t j : use) {
        a.norm_defect[j] = f[j] * f[j] + (1.0 - g[j]) - 1.0;
        if (std::abs(f[j]) > 1.0 || 1.0 - g[j] < 0.0) a.unphysical.push_back(j);
    }
    if (use.empty()) return a;
    const int jb = data::index_bits(f.size());
    sim::RegisterLayout layout{{"j", jb}, {"anc", 1}};
    std::vector<Amp> v(layout.dim(), 0.0);
    const auto& anc = layout.at("anc");
    for (std::size_t j : use) {
        v[j] = f[j];
        v[j | (std::uint64_t{1} << anc.offset)] = std::sqrt(Amp{1.0 - g[j], 0.0});
    }
    auto state = normalized_state(layout, std::move(v), a.written_norm);
    a.actual_normalized = sim::probability_of(state, "anc", [](std::uint64_t l) { return l == 0; });
    a.actual = a.written_norm * a.written_norm * a.actual_normalized;
    return a;
}

std::vector<double> column_means(const data::DataMatrix& X) {
    std::vector<double> mu(X.cols(), 0.0);
    for (std::size_t j = 0; j < X.cols(); ++j) {
        for (std::size_t i = 0; i < X.rows(); ++i) mu[j] += X.at(i, j);
        mu[j] /= static_cast<double>(X.rows());
    }
    return mu;
}

}  // namespace

Superposition build_superposition(const data::DataMatrix& X) {
    const std::size_t M = X.rows(), d = X.cols();
    if (M > kMaxSide || d > kMaxSide) {
        throw LayoutError("the superposition construction is limited to 4 rows and 4 features");
    }
    Superposition s{sim::StateVector(sim::RegisterLayout{{"a", 1}}), {}, std::vector<double>(d, 0.0), 0.0, 0.0};
    for (std::size_t i = 0; i < M; ++i) {
        std::vector<double> r(d);
        double n = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            r[j] = X.at(i, j);
            n += r[j] * r[j];
        }
        if (n == 0.0) throw DomainError("row " + std::to_string(i) + " is zero and has no unit-norm state");
        for (auto& v : r) v /= std::sqrt(n);
        for (std::size_t j = 0; j < d; ++j) s.mu[j] += r[j];
        s.rows.push_back(std::move(r));
    }
    for (double m : s.mu) s.N_mu += m * m;
    s.N_mu = std::sqrt(s.N_mu);
    if (!(s.N_mu > Tolerances::zero_amplitude)) throw DomainError("mu is the zero vector, so N_mu is undefined");

    sim::RegisterLayout layout{{"i", X.row_bits()}, {"j", X.col_bits()}, {"a", 1}};
    const auto& ri = layout.at("i");
    const auto& rj = layout.at("j");
    const auto& ra = layout.at("a");
    std::vector<Amp> v(layout.dim(), 0.0);
    const double h = std::numbers::sqrt2 / 2.0;
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const std::uint64_t base = (i << ri.offset) | (j << rj.offset);
            v[base] = h * s.rows[i][j];
            v[base | (std::uint64_t{1} << ra.offset)] = h * s.mu[j] / s.N_mu;
        }
    }
    s.state = normalized_state(layout, std::move(v), s.written_norm);
    return s;
}

PostSelection interfere_and_postselect(const Superposition& s, std::uint64_t seed) {
    auto state = s.state;
    sim::apply_hadamard_block(state, "a");
    PostSelection p;
    p.sampled_outcome = sim::measure(state, "a", seed).label;
    p.probability = sim::probability_of(state, "a", [](std::uint64_t l) { return l == 1; });
    if (!(p.probability > Tolerances::zero_amplitude)) {
        throw DomainError("the |1> branch has zero probability; nothing to post-select");
    }
    const auto& layout = state.layout();
    const auto& ri = layout.at("i");
    const auto& rj = layout.at("j");
    const std::uint64_t one = std::uint64_t{1} << layout.at("a").offset;
    const std::size_t M = s.rows.size(), d = s.mu.size();
    const double scale = 1.0 / std::sqrt(p.probability);
    double cn = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            p.actual.push_back(state.amplitude(one | (i << ri.offset) | (j << rj.offset)) * scale);
            p.claimed.push_back(s.rows[i][j] - s.mu[j]);
            cn += p.claimed.back() * p.claimed.back();
        }
    }
    if (cn > 0.0) {
        for (auto& c : p.claimed) c /= std::sqrt(cn);
        Amp overlap = 0.0;
        for (std::size_t k = 0; k < p.actual.size(); ++k) overlap += p.claimed[k] * p.actual[k];
        // distance after aligning the phase; summing differences keeps tiny gaps accurate
        const Amp phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Amp{1.0};
        double dist = 0.0;
        for (std::size_t k = 0; k < p.actual.size(); ++k) dist += std::norm(p.actual[k] - phase * p.claimed[k]);
        p.discrepancy = std::sqrt(dist);
    } else {
        // the claimed state is the zero vector: no state at all
        p.discrepancy = std::numbers::sqrt2;
    }
    return p;
}

std::string to_string(ChiReading r) { return r == ChiReading::component_norm ? "norm" : "sum"; }

ChiReading parse_chi_reading(const std::string& s) {
    if (s == "norm") return ChiReading::component_norm;
    if (s == "sum") return ChiReading::component_sum;
    throw ConfigError("unknown chi reading '" + s + "' (expected norm|sum)");
}

ChiValues chi_values(const data::DataMatrix& X, const data::QueryPoint& x0, ChiReading reading) {
    data::check_compatible(X, x0);
    const auto mu = column_means(X);
    const std::size_t M = X.rows(), d = X.cols();
    const double m = static_cast<double>(M);
    ChiValues c{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    for (std::size_t j = 0; j < d; ++j) {
        double sq = 0.0, sum = 0.0, size = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            const double z = X.at(i, j) - mu[j];
            sq += z * z;
            sum += z;
            size += std::abs(X.at(i, j));
        }
        const double z0 = x0.at(j) - mu[j];
        if (reading == ChiReading::component_norm) {
            c.chi[j] = std::sqrt(sq);
            c.chi0[j] = std::sqrt(m) * std::abs(z0);
        } else {
            // deviations from the mean cancel; keep the exact zero rather than round-off
            c.chi[j] = std::abs(sum) <= 1e-12 * (1.0 + size) ? 0.0 : sum;
            c.chi0[j] = m * z0;
        }
    }
    return c;
}

data::DataMatrix chi_dataset(const std::vector<double>& chi, double center) {
    std::vector<std::vector<double>> rows(2, std::vector<double>(chi.size()));
    for (std::size_t j = 0; j < chi.size(); ++j) {
        rows[0][j] = center + chi[j] / std::numbers::sqrt2;
        rows[1][j] = center - chi[j] / std::numbers::sqrt2;
    }
    return data::DataMatrix::from_rows(rows);
}

ObservableAudit audit_m2(const std::vector<double>& chi) {
    std::vector<double> f(chi.size(), 0.0), g(chi.size(), 0.0);
    std::vector<std::size_t> use;
    for (std::size_t j = 0; j < chi.size(); ++j) {
        if (!(chi[j] > 0.0)) continue;
        f[j] = std::log(chi[j]);
        g[j] = 2.0 * f[j];
        use.push_back(j);
    }
    auto a = audit_pairs(f, g, use);
    for (std::size_t j : use) a.claimed += 2.0 * f[j];
    a.gap_claimed = a.claimed - a.actual;
    return a;
}

ExpectationAudit expectation_audit(const data::DataMatrix& X, const data::QueryPoint& x0, ChiReading reading) {
    ExpectationAudit out;
    out.reading = reading;
    out.chi = chi_values(X, x0, reading);
    const std::size_t M = X.rows(), d = X.cols();
    const auto mu = column_means(X);
    std::vector<double> s2(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < M; ++i) s2[j] += (X.at(i, j) - mu[j]) * (X.at(i, j) - mu[j]);
        s2[j] /= static_cast<double>(M);
    }
    std::vector<std::size_t> use;
    for (std::size_t j = 0; j < d; ++j) {
        if (out.chi.chi[j] > 0.0) {
            use.push_back(j);
        } else {
            out.undefined.push_back(j);
        }
    }
    if (!out.undefined.empty()) {
        out.notes.push_back("chi_j <= 0 for " + std::to_string(out.undefined.size()) + " of " + std::to_string(d) +
                            " features under the '" + to_string(reading) +
                            "' reading: ln chi_j and chi0_j/chi_j are undefined there");
    }

    std::vector<double> r(d, 0.0), r2(d, 0.0);
    for (std::size_t j : use) {
        r[j] = out.chi.chi0[j] / out.chi.chi[j];
        r2[j] = r[j] * r[j];
    }
    out.m1 = audit_pairs(r, r2, use);
    for (std::size_t j : use) out.m1.claimed += r2[j];
    out.m1.gap_claimed = out.m1.claimed - out.m1.actual;

    out.m2 = audit_m2(out.chi.chi);

    double log_var = 0.0, quad = 0.0;
    bool finite = true;
    for (std::size_t j = 0; j < d; ++j) {
        if (!(s2[j] > 0.0)) {
            finite = false;
            continue;
        }
        log_var += std::log(s2[j]);
        quad += (x0.at(j) - mu[j]) * (x0.at(j) - mu[j]) / (2.0 * s2[j]);
    }
    if (!finite) out.notes.push_back("a feature has zero variance; the density targets are undefined");
    out.m1.target = quad;
    out.m2.target = log_var;
    out.m1.gap_target = out.m1.actual - out.m1.target;
    out.m2.gap_target = out.m2.actual - out.m2.target;
    const double dd = static_cast<double>(d);
    const double ln2pi = std::log(2.0 * std::numbers::pi);
    out.log_density_claimed = -0.5 * dd * ln2pi - 0.5 * (out.m1.actual + out.m2.actual);
    out.log_density = -0.5 * dd * ln2pi - 0.5 * log_var - quad;
    return out;
}

std::string to_string(Encoding e) { return e == Encoding::digital ? "digital" : "analog"; }

std::vector<SiteClass> encoding_classifier(const std::vector<CallSite>& trace) {
    std::vector<SiteClass> out;
    for (const auto& site : trace) {
        const auto& layout = site.state.layout();
        std::uint64_t operand_mask = 0;
        for (const auto& name : site.operands) operand_mask |= layout.at(name).mask();
        std::map<std::uint64_t, std::set<std::uint64_t>> labels;
        const auto amps = site.state.amplitudes();
        for (std::uint64_t k = 0; k < amps.size(); ++k) {
            if (std::abs(amps[k]) <= Tolerances::zero_amplitude) continue;
            labels[k & ~operand_mask].insert(k & operand_mask);
        }
        SiteClass c;
        c.name = site.name;
        for (const auto& [branch, set] : labels) c.labels_per_branch = std::max(c.labels_per_branch, set.size());
        c.encoding = c.labels_per_branch <= 1 ? Encoding::digital : Encoding::analog;
        c.precondition_met = c.encoding == Encoding::digital;
        out.push_back(c);
    }
    return out;
}

std::vector<CallSite> construction_trace(const data::DataMatrix& X, const data::QueryPoint& x0) {
    data::check_compatible(X, x0);
    const std::size_t M = X.rows(), d = X.cols();
    const auto mu = column_means(X);
    const int rb = X.row_bits(), cb = X.col_bits();
    std::vector<CallSite> trace;

    sim::RegisterLayout l1{{"chi", rb}, {"chi0", rb}, {"j", cb}};
    std::vector<Amp> v1(l1.dim(), 0.0);
    const auto& c0 = l1.at("chi0");
    const auto& j1 = l1.at("j");
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t k = 0; k < M; ++k)
                v1[i | (k << c0.offset) | (j << j1.offset)] = (X.at(i, j) - mu[j]) * (x0.at(j) - mu[j]);
    double n1 = 0.0;
    for (const auto& a : v1) n1 += std::norm(a);
    if (n1 > 0.0) {
        double w = 0.0;
        trace.push_back(CallSite{"R1", normalized_state(l1, std::move(v1), w), {"chi", "chi0"}});
    }

    sim::RegisterLayout l2{{"chi", rb}, {"j", cb}};
    std::vector<Amp> v2(l2.dim(), 0.0);
    const auto& j2 = l2.at("j");
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < M; ++i) v2[i | (j << j2.offset)] = X.at(i, j) - mu[j];
    double n2 = 0.0;
    for (const auto& a : v2) n2 += std::norm(a);
    if (n2 > 0.0) {
        double w = 0.0;
        trace.push_back(CallSite{"R2", normalized_state(l2, std::move(v2), w), {"chi"}});
    }
    return trace;
}

FlawReport run_flaws(const data::DataMatrix& X, const data::QueryPoint& x0, std::uint64_t seed, ChiReading reading) {
    auto sup = build_superposition(X);
    auto post = interfere_and_postselect(sup, seed);
    return FlawReport{encoding_classifier(construction_trace(X, x0)), std::move(sup), std::move(post),
                      expectation_audit(X, x0, reading)};
}

}  // namespace qadsim::flawlab
