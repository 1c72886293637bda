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

#include "qadsim/ae/amplitude_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qadsim/config.hpp"
#include "qadsim/error.hpp"

namespace qadsim::ae {

namespace {

constexpr const char* kPhaseReg = "ae_phase";

void scale(sim::StateVector& s, sim::Amp v, sim::Control c) {
    if (s.backend() == sim::Backend::serial) {
        sim::serial::apply_scalar(s.amplitudes(), v, c);
    } else {
        sim::parallel::apply_scalar(s.amplitudes(), v, c);
    }
}

std::uint64_t prep_mask(const sim::RegisterLayout& state_layout, const StatePreparation& prep) {
    std::uint64_t m = 0;
    if (prep.reflect.empty()) {
        for (const auto& r : prep.layout.registers()) m |= state_layout.at(r.name).mask();
    } else {
        for (const auto& r : prep.reflect) m |= state_layout.at(r).mask();
    }
    return m;
}

std::uint64_t pow2(int t) { return std::uint64_t{1} << t; }

// Full QPE layout: the preparation registers with the phase register on top.
sim::RegisterLayout qpe_layout(const StatePreparation& prep, int t) {
    std::vector<std::pair<std::string, int>> spec;
    for (const auto& r : prep.layout.registers()) spec.emplace_back(r.name, r.width);
    spec.emplace_back(kPhaseReg, t);
    return sim::RegisterLayout(spec);
}

std::vector<double> qpe_marginal(const StatePreparation& prep, int t, QpeStrategy strategy,
                                 data::QueryLedger* ledger) {
    prep.validate();
    const auto layout = qpe_layout(prep, t);
    const auto q = build_grover(prep, ledger);
    if (ledger) ledger->charge(prep.A->cost());
    const std::uint64_t n_y = pow2(t);

    if (strategy == QpeStrategy::gate_level) {
        sim::StateVector s(layout);
        prep.A->apply(s);
        sim::apply_hadamard_block(s, kPhaseReg);
        const auto& ph = layout.at(kPhaseReg);
        for (int k = 0; k < t; ++k) {
            const std::uint64_t bit = std::uint64_t{1} << (ph.offset + k);
            for (std::uint64_t r = 0; r < pow2(k); ++r) q->apply(s, sim::Control{bit, bit});
        }
        sim::apply_qft(s, kPhaseReg, true);
        return sim::marginal(s, kPhaseReg);
    }

    // Phase branch y carries Q^y A|0>; build the branches one after another.
    auto work = prep.prepare();
    const std::uint64_t n_w = work.dim();
    std::vector<sim::Amp> amps(layout.dim());
    const double w = 1.0 / std::sqrt(static_cast<double>(n_y));
    for (std::uint64_t y = 0; y < n_y; ++y) {
        if (y > 0) q->apply(work);
        auto src = work.amplitudes();
        for (std::uint64_t i = 0; i < n_w; ++i) amps[y * n_w + i] = src[i] * w;
    }
    auto s = sim::StateVector::from_amplitudes(layout, std::move(amps));
    sim::apply_qft(s, kPhaseReg, true);
    return sim::marginal(s, kPhaseReg);
}

}  // namespace

void StatePreparation::validate() const {
    if (!A) throw ConfigError("state preparation '" + name + "' has no circuit");
    if (!good) throw ConfigError("state preparation '" + name + "' has no good-subspace predicate");
    if (!layout.contains(good_register)) {
        throw LayoutError("good-subspace register '" + good_register + "' is not part of '" + name + "'");
    }
    for (const auto& r : A->registers()) {
        if (!layout.contains(r)) throw LayoutError("'" + name + "' touches undeclared register '" + r + "'");
    }
    for (const auto& r : reflect) {
        if (!layout.contains(r)) throw LayoutError("'" + name + "' reflects about undeclared register '" + r + "'");
    }
}

sim::StateVector StatePreparation::prepare() const {
    sim::StateVector s(layout);
    A->apply(s);
    return s;
}

double StatePreparation::exact_amplitude() const {
    validate();
    return sim::probability_of(prepare(), good_register, good);
}

std::string to_string(AEMode m) { return m == AEMode::circuit ? "circuit" : "ideal"; }

AEMode parse_mode(const std::string& s) {
    if (s == "circuit") return AEMode::circuit;
    if (s == "ideal") return AEMode::ideal;
    throw ConfigError("unknown mode '" + s + "' (expected circuit or ideal)");
}

void AEConfig::validate() const {
    if (mode == AEMode::circuit) {
        if (t < 1 || t > kMaxCircuitPhaseBits) {
            throw ConfigError("circuit mode needs 1 <= t <= " + std::to_string(kMaxCircuitPhaseBits) + ", got " +
                              std::to_string(t) + " (use ideal mode for finer grids)");
        }
        if (!seed) throw ConfigError("circuit mode needs a seed");
    } else if (t < 1 || t > kMaxIdealPhaseBits) {
        throw ConfigError("ideal mode needs 1 <= t <= " + std::to_string(kMaxIdealPhaseBits) + ", got " +
                          std::to_string(t));
    }
}

GroverOp::GroverOp(StatePreparation prep, data::QueryLedger* ledger) : prep_(std::move(prep)), ledger_(ledger) {
    prep_.validate();
    flip_good_ = sim::phase_flip({prep_.good_register}, prep_.good, "S_chi");
}

void GroverOp::charge() const {
    if (!ledger_) return;
    ledger_->add_grover(1);
    ledger_->charge(prep_.A->cost(), 2);
}

void GroverOp::apply(sim::StateVector& state, sim::Control ctrl) const {
    charge();
    const std::uint64_t zero = prep_mask(state.layout(), prep_);
    flip_good_->apply(state, ctrl);
    prep_.A->apply_inverse(state, ctrl);
    scale(state, -1.0, ctrl.with(zero, 0));
    prep_.A->apply(state, ctrl);
    scale(state, -1.0, ctrl);
}

void GroverOp::apply_inverse(sim::StateVector& state, sim::Control ctrl) const {
    charge();
    const std::uint64_t zero = prep_mask(state.layout(), prep_);
    scale(state, -1.0, ctrl);
    prep_.A->apply_inverse(state, ctrl);
    scale(state, -1.0, ctrl.with(zero, 0));
    prep_.A->apply(state, ctrl);
    flip_good_->apply(state, ctrl);
}

std::vector<std::string> GroverOp::registers() const {
    std::vector<std::string> out;
    for (const auto& r : prep_.layout.registers()) out.push_back(r.name);
    return out;
}

sim::QueryCost GroverOp::cost() const { return prep_.A->cost() * 2; }

std::shared_ptr<const GroverOp> build_grover(const StatePreparation& prep, data::QueryLedger* ledger) {
    return std::make_shared<const GroverOp>(prep, ledger);
}

std::vector<double> phase_distribution(const StatePreparation& prep, int t, QpeStrategy strategy) {
    AEConfig{t, AEMode::circuit, 0, strategy}.validate();
    return qpe_marginal(prep, t, strategy, nullptr);
}

namespace {

// cos(pi x) for x in [0, 1]; exact at 0, 1/2 and 1.
double cos_pi(double x) {
    const double pi = std::numbers::pi;
    if (x <= 0.25) return std::cos(pi * x);
    if (x <= 0.75) return std::sin(pi * (0.5 - x));
    return -std::cos(pi * (1.0 - x));
}

}  // namespace

double fold_phase(std::uint64_t y, int t) {
    const std::uint64_t n = pow2(t);
    y %= n;
    return std::numbers::pi * static_cast<double>(std::min(y, n - y)) / static_cast<double>(n);
}

AEResult estimate_amplitude(const StatePreparation& prep, const AEConfig& config, data::QueryLedger* ledger) {
    config.validate();
    prep.validate();
    AEResult r;
    r.t = config.t;
    r.mode = config.mode;
    r.grid_step = std::numbers::pi / static_cast<double>(pow2(config.t));
    r.grover_applications = pow2(config.t) - 1;

    if (config.mode == AEMode::ideal) {
        const double a = std::clamp(prep.exact_amplitude(), 0.0, 1.0);
        const double theta = std::asin(std::sqrt(a));
        r.y = static_cast<std::uint64_t>(std::llround(theta / r.grid_step));
        if (ledger) {
            ledger->add_grover(r.grover_applications);
            ledger->charge(prep.A->cost(), 2 * r.grover_applications + 1);
        }
    } else {
        auto dist = qpe_marginal(prep, config.t, config.strategy, ledger);
        std::mt19937_64 rng(*config.seed);
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        double total = 0.0;
        for (double p : dist) total += p;
        double acc = 0.0;
        r.y = dist.size() - 1;
        for (std::uint64_t y = 0; y < dist.size(); ++y) {
            acc += dist[y] / total;
            if (u < acc) {
                r.y = y;
                break;
            }
        }
        while (dist[r.y] <= 0.0 && r.y > 0) --r.y;
        r.outcome_probability = dist[r.y];
    }
    r.theta = fold_phase(r.y, config.t);
    // sin^2(theta) = (1 - cos(2 theta))/2, with cos taken exactly at the quarter points
    const std::uint64_t n = pow2(config.t), y = r.y % n;
    r.a = std::clamp(0.5 * (1.0 - cos_pi(2.0 * static_cast<double>(std::min(y, n - y)) / static_cast<double>(n))),
                     0.0, 1.0);
    r.error_bound = ae_error_bound(r.a, config.t);
    return r;
}

double overlap_from_result(const AEResult& r, double scale_c) { return scale_c * (2.0 * r.a - 1.0); }

double ae_error_bound(double a, int t) {
    const double n = static_cast<double>(pow2(t));
    const double pi = std::numbers::pi;
    return 2.0 * pi * std::sqrt(std::max(0.0, a * (1.0 - a))) / n + pi * pi / (n * n);
}

double worst_case_error(int t) { return ae_error_bound(0.5, t); }

BitPlan bits_for_epsilon(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw ConfigError("target precision must be a positive finite number, got " + std::to_string(eps));
    }
    for (int t = 1; t <= kMaxIdealPhaseBits; ++t) {
        if (worst_case_error(t) <= eps) return BitPlan{t, t > kMaxCircuitPhaseBits};
    }
    throw ConfigError("target precision " + std::to_string(eps) + " needs more than " +
                      std::to_string(kMaxIdealPhaseBits) + " phase bits");
}

std::array<double, 2> grover_eigenphases(const StatePreparation& prep) {
    const auto psi = prep.prepare();
    const auto& layout = prep.layout;
    const double a = sim::probability_of(psi, prep.good_register, prep.good);
    if (!(a > 0.0 && a < 1.0)) throw DomainError("eigenphases need 0 < a < 1, got a = " + std::to_string(a));

    std::vector<sim::Amp> g(psi.dim()), b(psi.dim());
    for (std::uint64_t i = 0; i < psi.dim(); ++i) {
        if (prep.good(layout.label(i, prep.good_register))) {
            g[i] = psi.amplitude(i) / std::sqrt(a);
        } else {
            b[i] = psi.amplitude(i) / std::sqrt(1.0 - a);
        }
    }
    const auto q = build_grover(prep, nullptr);
    auto sg = sim::StateVector::from_amplitudes(layout, g);
    auto sb = sim::StateVector::from_amplitudes(layout, b);
    q->apply(sg);
    q->apply(sb);
    auto dot = [](const std::vector<sim::Amp>& u, const sim::StateVector& v) {
        sim::Amp s{0.0};
        for (std::uint64_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v.amplitude(i);
        return s;
    };
    const sim::Amp m00 = dot(g, sg), m01 = dot(g, sb), m10 = dot(b, sg), m11 = dot(b, sb);
    const sim::Amp tr = m00 + m11;
    const sim::Amp det = m00 * m11 - m01 * m10;
    const sim::Amp disc = std::sqrt(tr * tr - 4.0 * det);
    std::array<double, 2> out{std::arg((tr + disc) / 2.0), std::arg((tr - disc) / 2.0)};
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace qadsim::ae
