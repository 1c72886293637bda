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
#include <sstream>

#include "qadsim/adde/pipeline.hpp"
#include "qadsim/arith/gates.hpp"
#include "qadsim/config.hpp"
#include "qadsim/dataio/oracles.hpp"
#include "qadsim/error.hpp"

namespace qadsim::adde {

namespace {

using arith::Format;
using arith::Operand;

// Oracle and arithmetic charges of each step; the fused rotation carries the
// sum of what the explicit route spells out.
constexpr sim::QueryCost kMeanCost{2, 0, 0};
constexpr sim::QueryCost kVarianceCost{2, 0, 2};
constexpr sim::QueryCost kPCost{0, 2, 4};
constexpr sim::QueryCost kQCost{0, 0, 4};

double q(double x, const Format& f) { return arith::quantize(x, f); }

bool is_zero(std::uint64_t l) { return l == 0; }

void check_amplitudes(const std::vector<double>& f, const char* constant, double value,
                      const std::function<std::string(std::size_t)>& where) {
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (!std::isfinite(f[k]) || std::abs(f[k]) > 1.0 + Tolerances::rotation_slack) {
            std::ostringstream os;
            os.precision(17);
            os << "rotation amplitude " << f[k] << " at " << where(k) << " leaves [-1, 1]: constant " << constant
               << " = " << value << " is too small";
            throw ConstantViolation(constant, os.str());
        }
    }
}

void require_positive(double v, const char* constant) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DegenerateDataError("constant " + std::string(constant) + " must be positive, got " + std::to_string(v));
    }
}

std::function<double(std::uint64_t)> lookup(std::vector<double> table) {
    return [t = std::move(table)](std::uint64_t k) { return t[k]; };
}

std::vector<sim::OpPtr> set_index(const std::string& reg, std::size_t value, int bits) {
    std::vector<sim::OpPtr> ops;
    for (int b = 0; b < bits; ++b) {
        if ((value >> b) & 1u) ops.push_back(sim::pauli_x(reg, b));
    }
    return ops;
}

void require_fused(const EstimatorSettings& s, const char* what) {
    if (s.route != Route::fused) {
        throw ConfigError(std::string(what) + ": the spectator-branch preparation exists only on the fused route");
    }
}

std::vector<double> padded(std::span<const double> v, std::size_t n, double fill, const Format& fmt) {
    std::vector<double> out(n, fill);
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = q(v[k], fmt);
    return out;
}

}  // namespace

double held_difference(double a, double b, const Format& fmt) { return q(q(a, fmt) - q(b, fmt), fmt); }

double held_log(double v, const Format& fmt) {
    const double s = q(v, fmt);
    if (!(s > 0.0)) {
        throw DegenerateDataError("variance estimate " + std::to_string(v) + " is zero in format " + fmt.describe() +
                                  " (add fractional bits or use the epsilon-floor policy)");
    }
    return q(std::log(s), fmt);
}

double refit_D(const data::DataMatrix& X, std::span<const double> mu_hat, const Format& fmt) {
    double m = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j) m = std::max(m, std::abs(held_difference(X.at(i, j), mu_hat[j], fmt)));
    return m;
}

double refit_T(const data::QueryPoint& x0, std::span<const double> mu_hat, std::span<const double> sigma2_hat,
               const Format& fmt) {
    double m = 0.0;
    for (std::size_t j = 0; j < x0.dim(); ++j) {
        const double s = q(sigma2_hat[j], fmt);
        if (!(s > 0.0)) throw DegenerateDataError("variance estimate of feature " + std::to_string(j) + " is zero");
        m = std::max(m, std::abs(held_difference(x0.at(j), mu_hat[j], fmt)) / std::sqrt(s));
    }
    return data::power_of_two_at_least(m);
}

double refit_E(std::span<const double> sigma2_hat, const Format& fmt) {
    double m = 0.0;
    for (double v : sigma2_hat) m = std::max(m, std::abs(held_log(v, fmt)));
    return m > 0.0 ? m : 1.0;
}

ae::StatePreparation mean_preparation(const data::DataMatrix& X, std::optional<std::size_t> branch, double C,
                                      const EstimatorSettings& s) {
    require_positive(C, "C");
    const Format& fmt = s.format;
    const int rb = X.row_bits(), cb = X.col_bits();
    const std::size_t nr = X.padded_rows();

    if (!branch) {
        require_fused(s, "mean_preparation");
        std::vector<double> f(nr * X.padded_cols(), 0.0);
        for (std::size_t j = 0; j < X.cols(); ++j)
            for (std::size_t i = 0; i < X.rows(); ++i) f[i | (j << rb)] = q(X.at(i, j), fmt) / C;
        check_amplitudes(f, "C", C, [&](std::size_t k) {
            return "row " + std::to_string(k % nr) + ", feature " + std::to_string(k / nr);
        });
        auto c = std::make_shared<sim::Circuit>("mean[all]");
        c->add(sim::hadamard("anc2")).add(sim::hadamard("i"));
        c->add(sim::controlled("anc2", 0, sim::keyed_rotation("anc5", {"i", "j"}, lookup(std::move(f)), kMeanCost, "x/C")));
        c->add(sim::hadamard("anc2"));
        return ae::StatePreparation{sim::RegisterLayout{{"anc2", 1}, {"i", rb}, {"anc5", 1}, {"j", cb}},
                                    c, "anc2", is_zero, "mean[all]", {"anc2", "i", "anc5"}};
    }

    const std::size_t j = *branch;
    std::vector<double> f(nr, 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) f[i] = q(X.at(i, j), fmt) / C;
    check_amplitudes(f, "C", C, [&](std::size_t i) { return "row " + std::to_string(i) + ", feature " + std::to_string(j); });
    const std::string name = "mean[" + std::to_string(j) + "]";
    auto c = std::make_shared<sim::Circuit>(name);
    c->add(sim::hadamard("anc2")).add(sim::hadamard("i"));
    if (s.route == Route::fused) {
        c->add(sim::controlled("anc2", 0, sim::keyed_rotation("anc5", {"i"}, lookup(std::move(f)), kMeanCost, "x/C")));
        c->add(sim::hadamard("anc2"));
        return ae::StatePreparation{sim::RegisterLayout{{"anc2", 1}, {"i", rb}, {"anc5", 1}}, c, "anc2", is_zero, name, {}};
    }
    const auto sj = set_index("j", j, cb);
    for (const auto& op : sj) c->add(op);
    auto ox = data::oracle_OX(X, "i", "j", "x", fmt);
    c->add(ox);
    c->add(sim::controlled(
        "anc2", 0, arith::digital_rotation("anc5", {Operand{"x", fmt}}, [C](std::span<const double> v) { return v[0] / C; }, "x/C")));
    c->add(ox);
    for (const auto& op : sj) c->add(op);
    c->add(sim::hadamard("anc2"));
    return ae::StatePreparation{
        sim::RegisterLayout{{"anc2", 1}, {"i", rb}, {"j", cb}, {"x", fmt.width()}, {"anc5", 1}}, c, "anc2", is_zero, name, {}};
}

ae::StatePreparation variance_preparation(const data::DataMatrix& X, std::optional<std::size_t> branch,
                                          std::span<const double> mu_hat, double D, const EstimatorSettings& s) {
    require_positive(D, "D");
    const Format& fmt = s.format;
    const int rb = X.row_bits(), cb = X.col_bits();
    const std::size_t nr = X.padded_rows();
    const std::size_t M = X.rows();

    if (!branch) {
        require_fused(s, "variance_preparation");
        std::vector<double> f(nr * X.padded_cols(), 0.0);
        for (std::size_t j = 0; j < X.cols(); ++j)
            for (std::size_t i = 0; i < M; ++i) f[i | (j << rb)] = held_difference(X.at(i, j), mu_hat[j], fmt) / D;
        check_amplitudes(f, "D", D, [&](std::size_t k) {
            return "row " + std::to_string(k % nr) + ", feature " + std::to_string(k / nr);
        });
        auto c = std::make_shared<sim::Circuit>("variance[all]");
        c->add(sim::hadamard("i"));
        c->add(sim::keyed_rotation("anc", {"i", "j"}, lookup(std::move(f)), kVarianceCost, "(x-mu)/D"));
        return ae::StatePreparation{sim::RegisterLayout{{"i", rb}, {"anc", 1}, {"j", cb}}, c, "anc", is_zero,
                                    "variance[all]", {"i", "anc"}};
    }

    const std::size_t j = *branch;
    std::vector<double> f(nr, 0.0);
    for (std::size_t i = 0; i < M; ++i) f[i] = held_difference(X.at(i, j), mu_hat[j], fmt) / D;
    check_amplitudes(f, "D", D, [&](std::size_t i) { return "row " + std::to_string(i) + ", feature " + std::to_string(j); });
    const std::string name = "variance[" + std::to_string(j) + "]";
    auto c = std::make_shared<sim::Circuit>(name);
    c->add(sim::hadamard("i"));
    if (s.route == Route::fused) {
        c->add(sim::keyed_rotation("anc", {"i"}, lookup(std::move(f)), kVarianceCost, "(x-mu)/D"));
        return ae::StatePreparation{sim::RegisterLayout{{"i", rb}, {"anc", 1}}, c, "anc", is_zero, name, {}};
    }
    const double qmu = q(mu_hat[j], fmt);
    const auto sj = set_index("j", j, cb);
    for (const auto& op : sj) c->add(op);
    auto ox = data::oracle_OX(X, "i", "j", "x", fmt);
    // padded rows hold no data; their difference is masked to zero
    auto sub = arith::make_gate("x-mu", {Operand{"x", fmt}, Operand{"i", Format::index(rb)}}, Operand{"dz", fmt},
                                [qmu, M](std::span<const double> v) {
                                    return static_cast<std::size_t>(v[1]) < M ? v[0] - qmu : 0.0;
                                });
    c->add(ox).add(sub);
    c->add(arith::digital_rotation("anc", {Operand{"dz", fmt}}, [D](std::span<const double> v) { return v[0] / D; },
                                   "(x-mu)/D"));
    c->add(sub).add(ox);
    for (const auto& op : sj) c->add(op);
    return ae::StatePreparation{
        sim::RegisterLayout{{"i", rb}, {"j", cb}, {"x", fmt.width()}, {"dz", fmt.width()}, {"anc", 1}}, c, "anc",
        is_zero, name, {}};
}

ae::StatePreparation p_preparation(const data::QueryPoint& x0, std::span<const double> mu_hat,
                                   std::span<const double> sigma2_hat, double T, const EstimatorSettings& s) {
    require_positive(T, "T");
    const Format& fmt = s.format;
    const std::size_t d = x0.dim();
    const int cb = x0.bits();
    const std::size_t nd = x0.padded_dim();

    std::vector<double> f(nd, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        const double sv = q(sigma2_hat[j], fmt);
        if (!(sv > 0.0)) {
            throw DegenerateDataError("variance estimate of feature " + std::to_string(j) + " is zero in format " +
                                      fmt.describe());
        }
        f[j] = held_difference(x0.at(j), mu_hat[j], fmt) / (std::sqrt(sv) * T);
    }
    check_amplitudes(f, "T", T, [](std::size_t j) { return "feature " + std::to_string(j); });
    auto c = std::make_shared<sim::Circuit>("p");
    c->add(sim::hadamard("j"));
    if (s.route == Route::fused) {
        c->add(sim::keyed_rotation("anc", {"j"}, lookup(std::move(f)), kPCost, "(x0-mu)/(sigma T)"));
        return ae::StatePreparation{sim::RegisterLayout{{"j", cb}, {"anc", 1}}, c, "anc", is_zero, "p", {}};
    }
    // padded features load mu = 0, sigma^2 = 1 and a zero query entry, so their amplitude is 0
    const auto qmu = padded(mu_hat, nd, 0.0, fmt);
    auto ox = data::oracle_Ox(x0, "j", "x0", fmt);
    auto load_s = arith::table_gate(Operand{"j", Format::index(cb)}, padded(sigma2_hat, nd, 1.0, fmt), Operand{"s", fmt},
                                    "sigma2");
    auto sub = arith::make_gate("x0-mu", {Operand{"x0", fmt}, Operand{"j", Format::index(cb)}}, Operand{"dz", fmt},
                                [qmu](std::span<const double> v) { return v[0] - qmu[static_cast<std::size_t>(v[1])]; });
    auto rot = arith::digital_rotation(
        "anc", {Operand{"dz", fmt}, Operand{"s", fmt}},
        [T](std::span<const double> v) {
            if (!(v[1] > 0.0)) throw DegenerateDataError("zero variance register");
            return v[0] / (std::sqrt(v[1]) * T);
        },
        "(x0-mu)/(sigma T)");
    c->add(ox).add(load_s).add(sub).add(rot).add(sub).add(load_s).add(ox);
    return ae::StatePreparation{
        sim::RegisterLayout{{"j", cb}, {"x0", fmt.width()}, {"dz", fmt.width()}, {"s", fmt.width()}, {"anc", 1}}, c,
        "anc", is_zero, "p", {}};
}

ae::StatePreparation q_preparation(std::span<const double> sigma2_hat, double E, const EstimatorSettings& s) {
    require_positive(E, "E");
    const Format& fmt = s.format;
    const std::size_t d = sigma2_hat.size();
    const int cb = data::index_bits(d);
    const std::size_t nd = std::size_t{1} << cb;

    std::vector<double> f(nd, 0.0);
    for (std::size_t j = 0; j < d; ++j) f[j] = held_log(sigma2_hat[j], fmt) / E;
    check_amplitudes(f, "E", E, [](std::size_t j) { return "feature " + std::to_string(j); });
    auto c = std::make_shared<sim::Circuit>("q");
    c->add(sim::hadamard("e")).add(sim::hadamard("j"));
    if (s.route == Route::fused) {
        c->add(sim::controlled("e", 0, sim::keyed_rotation("g", {"j"}, lookup(std::move(f)), kQCost, "ln(sigma2)/E")));
        c->add(sim::hadamard("e"));
        return ae::StatePreparation{sim::RegisterLayout{{"e", 1}, {"j", cb}, {"g", 1}}, c, "e", is_zero, "q", {}};
    }
    auto load_s = arith::table_gate(Operand{"j", Format::index(cb)}, padded(sigma2_hat, nd, 1.0, fmt), Operand{"s", fmt},
                                    "sigma2");
    auto ln = arith::ln_gate(Operand{"s", fmt}, Operand{"l", fmt});
    auto rot = arith::digital_rotation("g", {Operand{"l", fmt}}, [E](std::span<const double> v) { return v[0] / E; },
                                       "ln(sigma2)/E");
    c->add(load_s).add(ln).add(sim::controlled("e", 0, rot)).add(ln).add(load_s);
    c->add(sim::hadamard("e"));
    return ae::StatePreparation{
        sim::RegisterLayout{{"e", 1}, {"j", cb}, {"s", fmt.width()}, {"l", fmt.width()}, {"g", 1}}, c, "e", is_zero,
        "q", {}};
}

}  // namespace qadsim::adde
