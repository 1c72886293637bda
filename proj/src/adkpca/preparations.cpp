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

#include "qadsim/adkpca/adkpca.hpp"
#include "qadsim/arith/gates.hpp"
#include "qadsim/config.hpp"
#include "qadsim/dataio/oracles.hpp"
#include "qadsim/error.hpp"

namespace qadsim::adkpca {

namespace {

using arith::Format;
using arith::Operand;
using adde::Route;

constexpr sim::QueryCost kACost{0, 2, 2};
constexpr sim::QueryCost kOmegaCost{2, 2, 2};
constexpr sim::QueryCost kBCost{0, 0, 2};

bool is_zero(std::uint64_t l) { return l == 0; }

void check_amplitudes(const std::vector<double>& f, const char* constant, double value, const char* what) {
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (!std::isfinite(f[k]) || std::abs(f[k]) > 1.0 + Tolerances::rotation_slack) {
            std::ostringstream os;
            os.precision(17);
            os << "rotation amplitude " << f[k] << " at " << what << " " << k << " leaves [-1, 1]: constant "
               << constant << " = " << value << " is too small";
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

std::vector<double> padded_means(std::span<const double> mu, std::size_t n, const Format& fmt) {
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < mu.size(); ++k) out[k] = arith::quantize(mu[k], fmt);
    return out;
}

}  // namespace

ae::StatePreparation a_preparation(const data::QueryPoint& x0, std::span<const double> mu_hat, double C_prime,
                                   const EstimatorSettings& s) {
    require_positive(C_prime, "C'");
    const Format& fmt = s.format;
    const int cb = x0.bits();
    const std::size_t nd = x0.padded_dim();

    std::vector<double> f(nd, 0.0);
    for (std::size_t j = 0; j < x0.dim(); ++j) f[j] = adde::held_difference(x0.at(j), mu_hat[j], fmt) / C_prime;
    check_amplitudes(f, "C'", C_prime, "feature");
    auto c = std::make_shared<sim::Circuit>("a");
    c->add(sim::hadamard("j"));
    if (s.route == Route::fused) {
        c->add(sim::keyed_rotation("anc", {"j"}, lookup(std::move(f)), kACost, "(x0-mu)/C'"));
        return ae::StatePreparation{sim::RegisterLayout{{"j", cb}, {"anc", 1}}, c, "anc", is_zero, "a", {}};
    }
    // padded features hold x0 = 0 and mu = 0
    const auto qmu = padded_means(mu_hat, nd, fmt);
    auto ox = data::oracle_Ox(x0, "j", "x0", fmt);
    auto sub = arith::make_gate("x0-mu", {Operand{"x0", fmt}, Operand{"j", Format::index(cb)}}, Operand{"dz", fmt},
                                [qmu](std::span<const double> v) { return v[0] - qmu[static_cast<std::size_t>(v[1])]; });
    auto rot = arith::digital_rotation("anc", {Operand{"dz", fmt}},
                                       [C_prime](std::span<const double> v) { return v[0] / C_prime; }, "(x0-mu)/C'");
    c->add(ox).add(sub).add(rot).add(sub).add(ox);
    return ae::StatePreparation{sim::RegisterLayout{{"j", cb}, {"x0", fmt.width()}, {"dz", fmt.width()}, {"anc", 1}},
                                c, "anc", is_zero, "a", {}};
}

ae::StatePreparation omega_preparation(const data::DataMatrix& X, const data::QueryPoint& x0,
                                       std::span<const double> mu_hat, double C_dprime, std::size_t row,
                                       const EstimatorSettings& s) {
    require_positive(C_dprime, "C''");
    if (row >= X.rows()) throw ConfigError("row " + std::to_string(row) + " out of range");
    const Format& fmt = s.format;
    const int rb = X.row_bits(), cb = X.col_bits();
    const std::size_t d = X.cols();

    std::vector<double> f(X.padded_cols(), 0.0);
    for (std::size_t j = 0; j < d; ++j) f[j] = held_product(X.at(row, j), x0.at(j), mu_hat[j], fmt) / C_dprime;
    check_amplitudes(f, "C''", C_dprime, ("row " + std::to_string(row) + ", feature").c_str());
    const std::string name = "omega[" + std::to_string(row) + "]";
    auto c = std::make_shared<sim::Circuit>(name);
    c->add(sim::hadamard("anc2")).add(sim::hadamard("j"));
    if (s.route == Route::fused) {
        c->add(sim::controlled("anc2", 0,
                               sim::keyed_rotation("anc5", {"j"}, lookup(std::move(f)), kOmegaCost, "(x-mu)(x0-mu)/C''")));
        c->add(sim::hadamard("anc2"));
        return ae::StatePreparation{sim::RegisterLayout{{"anc2", 1}, {"j", cb}, {"anc5", 1}}, c, "anc2", is_zero, name, {}};
    }
    const auto qmu = padded_means(mu_hat, X.padded_cols(), fmt);
    std::vector<sim::OpPtr> set_row;
    for (int b = 0; b < rb; ++b)
        if ((row >> b) & 1u) set_row.push_back(sim::pauli_x("i", b));
    auto oX = data::oracle_OX(X, "i", "j", "x", fmt);
    auto ox = data::oracle_Ox(x0, "j", "x0", fmt);
    auto prod = arith::make_gate(
        "(x-mu)(x0-mu)", {Operand{"x", fmt}, Operand{"x0", fmt}, Operand{"j", Format::index(cb)}}, Operand{"w", fmt},
        [qmu, d, fmt](std::span<const double> v) {
            const auto j = static_cast<std::size_t>(v[2]);
            if (j >= d) return 0.0;
            return arith::quantize(v[0] - qmu[j], fmt) * arith::quantize(v[1] - qmu[j], fmt);
        });
    auto rot = arith::digital_rotation("anc5", {Operand{"w", fmt}},
                                       [C_dprime](std::span<const double> v) { return v[0] / C_dprime; },
                                       "(x-mu)(x0-mu)/C''");
    for (const auto& op : set_row) c->add(op);
    c->add(oX).add(ox).add(prod).add(sim::controlled("anc2", 0, rot)).add(prod).add(ox).add(oX);
    for (const auto& op : set_row) c->add(op);
    c->add(sim::hadamard("anc2"));
    return ae::StatePreparation{sim::RegisterLayout{{"anc2", 1},
                                                    {"j", cb},
                                                    {"i", rb},
                                                    {"x", fmt.width()},
                                                    {"x0", fmt.width()},
                                                    {"w", fmt.width()},
                                                    {"anc5", 1}},
                                c, "anc2", is_zero, name, {}};
}

ae::StatePreparation b_preparation(std::span<const double> omega_hat, const EstimatorSettings& s) {
    const Format& fmt = s.format;
    const std::size_t M = omega_hat.size();
    const int rb = data::index_bits(M);
    const std::size_t nr = std::size_t{1} << rb;

    std::vector<double> f(nr, 0.0);
    for (std::size_t i = 0; i < M; ++i) {
        if (!(std::abs(omega_hat[i]) <= 1.0)) {
            throw DomainError("stored overlap " + std::to_string(omega_hat[i]) + " of row " + std::to_string(i) +
                              " is outside [-1, 1]");
        }
        f[i] = omega_hat[i];
    }
    auto c = std::make_shared<sim::Circuit>("b");
    c->add(sim::hadamard("i"));
    if (s.route == Route::fused) {
        c->add(sim::keyed_rotation("anc", {"i"}, lookup(std::move(f)), kBCost, "omega"));
        return ae::StatePreparation{sim::RegisterLayout{{"i", rb}, {"anc", 1}}, c, "anc", is_zero, "b", {}};
    }
    auto load = arith::table_gate(Operand{"i", Format::index(rb)}, f, Operand{"w", fmt}, "omega");
    auto rot = arith::digital_rotation("anc", {Operand{"w", fmt}}, [](std::span<const double> v) { return v[0]; }, "omega");
    c->add(load).add(rot).add(load);
    return ae::StatePreparation{sim::RegisterLayout{{"i", rb}, {"w", fmt.width()}, {"anc", 1}}, c, "anc", is_zero, "b",
                                {}};
}

}  // namespace qadsim::adkpca
