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
#include <random>

#include "doctest.h"
#include "qadsim/adkpca/adkpca.hpp"
#include "qadsim/arith/fixed_point.hpp"
#include "qadsim/error.hpp"

using namespace qadsim;
using namespace qadsim::adkpca;
using data::DataMatrix;
using data::QueryPoint;

namespace {

constexpr double kPi = std::numbers::pi;

double grid(int t) { return kPi / std::ldexp(1.0, t + 1); }

// Longhand mean, covariance and proximity.
double brute_proximity(const std::vector<std::vector<double>>& rows, const std::vector<double>& x0,
                       std::vector<double>* mu_out = nullptr, std::vector<std::vector<double>>* cov_out = nullptr) {
    const std::size_t m = rows.size(), d = x0.size();
    std::vector<double> mu(d, 0.0);
    for (const auto& r : rows)
        for (std::size_t j = 0; j < d; ++j) mu[j] += r[j] / static_cast<double>(m);
    std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
    for (const auto& r : rows)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) cov[a][b] += (r[a] - mu[a]) * (r[b] - mu[b]) / static_cast<double>(m - 1);
    double f = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        f += (x0[a] - mu[a]) * (x0[a] - mu[a]);
        for (std::size_t b = 0; b < d; ++b) f -= (x0[a] - mu[a]) * cov[a][b] * (x0[b] - mu[b]);
    }
    if (mu_out) *mu_out = mu;
    if (cov_out) *cov_out = cov;
    return f;
}

EstimatorSettings tiny_format(adde::Route r) {
    EstimatorSettings s;
    s.format = arith::Format{1, 3, true};
    s.route = r;
    return s;
}

}  // namespace

TEST_CASE("classical moments and proximity examples") {
    auto m = classical_moments(DataMatrix::from_rows({{1}, {3}}));
    CHECK(m.mu == std::vector<double>{2});
    CHECK(m.cov[0][0] == 2.0);
    CHECK(classical_proximity(m, QueryPoint::from_values({4})) == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(classical_proximity(m, QueryPoint::from_values({2})) == 0.0);
    auto z = classical_moments(DataMatrix::from_rows({{1, 5}, {1, 5}, {1, 5}}));
    for (const auto& row : z.cov)
        for (double v : row) CHECK(v == 0.0);
    CHECK_THROWS_AS(classical_moments(DataMatrix::from_rows({{1, 2}})), DegenerateDataError);
}

TEST_CASE("classical moments match a brute-force evaluation") {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto inst = data::random_instance(seed);
        auto rows = inst.data.to_rows();
        std::vector<double> x0(inst.query.dim());
        for (std::size_t j = 0; j < x0.size(); ++j) x0[j] = inst.query.at(j);
        std::vector<double> mu;
        std::vector<std::vector<double>> cov;
        const double f = brute_proximity(rows, x0, &mu, &cov);
        auto m = classical_moments(inst.data);
        const std::size_t d = mu.size();
        for (std::size_t a = 0; a < d; ++a) {
            CHECK(std::abs(m.mu[a] - mu[a]) < 1e-10);
            for (std::size_t b = 0; b < d; ++b) {
                CHECK(std::abs(m.cov[a][b] - cov[a][b]) < 1e-10);
                CHECK(m.cov[a][b] == m.cov[b][a]);
            }
        }
        // positive semidefinite: v^T Sigma v >= 0 for random directions
        for (int n = 0; n < 10; ++n) {
            std::vector<double> v(d);
            for (auto& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
            double q = 0.0;
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) q += v[a] * m.cov[a][b] * v[b];
            CHECK(q >= -1e-10);
        }
        CHECK(std::abs(classical_proximity(m, inst.query) - f) < 1e-10);

        // translating data and query together leaves f unchanged
        auto shifted_rows = rows;
        auto shifted_x0 = x0;
        for (auto& r : shifted_rows)
            for (std::size_t j = 0; j < d; ++j) r[j] += 0.75 * static_cast<double>(j + 1);
        for (std::size_t j = 0; j < d; ++j) shifted_x0[j] += 0.75 * static_cast<double>(j + 1);
        CHECK(std::abs(classical_proximity(classical_moments(DataMatrix::from_rows(shifted_rows)),
                                           QueryPoint::from_values(shifted_x0)) - f) < 1e-10);
    }
}

TEST_CASE("bridge identity and exact substitution") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto inst = data::random_instance(seed);
        auto m = classical_moments(inst.data);
        const std::size_t d = m.mu.size(), M = inst.data.rows();
        double dist = 0.0, quad = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
            const double za = inst.query.at(a) - m.mu[a];
            dist += za * za;
            for (std::size_t b = 0; b < d; ++b) quad += za * m.cov[a][b] * (inst.query.at(b) - m.mu[b]);
        }
        CHECK(std::abs(bridge_quadratic(inst.data, m.mu, inst.query) - quad) < 1e-10);

        auto k = compute_constants(inst.data, inst.query, m.mu, arith::Format{8, 16, true});
        const double a = a_formula(inst.query, m.mu, k.C_prime);
        const double b = b_formula(omega_formula(inst.data, inst.query, m.mu, k.C_dprime));
        const double f = proximity_estimate(a, b, d, M, k.C_prime, k.C_dprime);
        CHECK(std::abs(f - classical_proximity(m, inst.query)) < 1e-10);
    }
    CHECK(proximity_estimate(0.0, 0.0, 3, 5, 2.0, 7.0) == 0.0);
    auto X = DataMatrix::from_rows({{1}, {3}});
    auto x0 = QueryPoint::from_values({4});
    std::vector<double> mu{2};
    CHECK(proximity_estimate(a_formula(x0, mu, 2.0), b_formula(omega_formula(X, x0, mu, 2.0)), 1, 2, 2.0, 2.0) ==
          doctest::Approx(-4.0).epsilon(1e-14));
}

TEST_CASE("step 1 examples") {
    EstimatorSettings s;
    auto x0 = QueryPoint::from_values({0.5, -1.0, 2.0});
    std::vector<double> at{0.5, -1.0, 2.0};
    CHECK(estimate_a(x0, at, 1.0, 8, s).value == 0.0);
    auto one = estimate_a(QueryPoint::from_values({3.0}), std::vector<double>{1.0}, 2.0, 5, s);
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-14));
    try {
        estimate_a(QueryPoint::from_values({3.0}), std::vector<double>{1.0}, 1.5, 5, s);
        FAIL("expected a violation");
    } catch (const ConstantViolation& e) {
        CHECK(e.constant() == "C'");
    }
}

TEST_CASE("step 2 examples") {
    EstimatorSettings s;
    SUBCASE("a row at the mean has zero overlap") {
        auto X = DataMatrix::from_rows({{1, 2}, {3, 4}, {2, 3}, {0, 1}});
        auto x0 = QueryPoint::from_values({3.5, 1.0});
        std::vector<double> mu{1.5, 2.5};
        X = DataMatrix::from_rows({{1, 2}, {3, 4}, {1.5, 2.5}, {0.5, 1.5}});
        auto k = refit_C_dprime(X, x0, mu, s.format);
        auto w = estimate_omegas(X, x0, mu, k, 9, s);
        CHECK(w.values[2] == 0.0);
    }
    SUBCASE("d = 1 with both factors maximal") {
        auto X = DataMatrix::from_rows({{1}, {3}});
        auto x0 = QueryPoint::from_values({4});
        std::vector<double> mu{2};
        for (int t : {6, 10, 14}) {
            auto w = estimate_omegas(X, x0, mu, 2.0, t, s);
            CHECK(w.values[0] < 0.0);
            CHECK(w.values[1] > 0.0);
            for (double v : w.values) {
                CHECK(std::abs(v) <= 1.0);
                CHECK(1.0 - std::abs(v) <= 2.0 * 2.0 * grid(t) + s.format.ulp());
            }
        }
    }
    SUBCASE("random instances against the overlap formula") {
        const int t = 10;
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            auto inst = data::random_instance(seed);
            auto m = classical_moments(inst.data);
            const double C2 = refit_C_dprime(inst.data, inst.query, m.mu, s.format) * 1.01;
            auto w = estimate_omegas(inst.data, inst.query, m.mu, C2, t, s);
            auto f = omega_formula(inst.data, inst.query, m.mu, C2);
            const std::size_t d = inst.data.cols();
            const double pad = static_cast<double>(inst.data.padded_cols()) / static_cast<double>(d);
            const double ulp = s.format.ulp();
            for (std::size_t i = 0; i < inst.data.rows(); ++i) {
                double quant = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    const double a = std::abs(inst.query.at(j) - m.mu[j]), b = std::abs(inst.data.at(i, j) - m.mu[j]);
                    quant += ulp * (a + b + ulp) + ulp / 2;
                }
                quant = quant / (static_cast<double>(d) * C2) + ulp / 2;
                CHECK(std::abs(w.values[i] - f[i]) <= 2.0 * pad * grid(t) + quant);
            }
        }
    }
}

TEST_CASE("step 2 mean of squares") {
    EstimatorSettings s;
    CHECK(estimate_b(std::vector<double>{0, 0, 0}, 6, s).value == 0.0);
    CHECK(estimate_b(std::vector<double>{1, 1}, 6, s).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(estimate_b(std::vector<double>{1, -1, 1, -1}, 6, s).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(estimate_b(std::vector<double>{1.5}, 6, s), DomainError);
    std::mt19937_64 rng(2);
    for (int n = 0; n < 30; ++n) {
        const std::size_t M = 2 + rng() % 7;
        std::vector<double> w(M);
        double mean_sq = 0.0;
        for (auto& v : w) {
            v = arith::quantize(2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0, s.format);
            mean_sq += v * v / static_cast<double>(M);
        }
        const int t = 8;
        const double pad = static_cast<double>(std::size_t{1} << data::index_bits(M)) / static_cast<double>(M);
        CHECK(std::abs(estimate_b(w, t, s).value - mean_sq) <= pad * grid(t) + 1e-12);
    }
}

TEST_CASE("budget allocation") {
    Constants k{1.0, 1.0, 1.0};
    for (double eps : {0.4, 0.1}) {
        auto b = plan_budget_kpca(eps, 1, 4, k);
        CHECK(b.eps_mean == doctest::Approx(eps / 48).epsilon(1e-15));
        CHECK(b.eps_a == doctest::Approx(eps).epsilon(1e-15));
        CHECK(b.eps_a_published == b.eps_a);
        // C' > C'': step 1 is sized by C' so that d C'^2 eps'' stays at eps
        auto w = plan_budget_kpca(eps, 2, 4, Constants{1.0, 3.0, 0.5});
        CHECK(w.eps_a == doctest::Approx(eps / 18).epsilon(1e-15));
        CHECK(w.eps_a_published == doctest::Approx(eps / 0.5).epsilon(1e-15));
        CHECK(2 * 9.0 * w.eps_a == doctest::Approx(eps).epsilon(1e-15));
        CHECK(b.eps_omega == doctest::Approx(eps / 3).epsilon(1e-15));
        CHECK(b.eps_b == doctest::Approx(eps / 3).epsilon(1e-15));
        CHECK(b.target == 2 * eps);
        auto h = plan_budget_kpca(eps / 2, 1, 4, k);
        CHECK(h.eps_mean == doctest::Approx(b.eps_mean / 2).epsilon(1e-15));
        CHECK(h.eps_a == doctest::Approx(b.eps_a / 2).epsilon(1e-15));
        CHECK(h.eps_omega == doctest::Approx(b.eps_omega / 2).epsilon(1e-15));
        CHECK(h.eps_b == doctest::Approx(b.eps_b / 2).epsilon(1e-15));
    }
    CHECK_THROWS_AS(plan_budget_kpca(-1.0, 1, 4, k), ConfigError);
}

TEST_CASE("published step bounds hold at t = 10") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto inst = data::random_instance(seed);
        KpcaConfig cfg;
        cfg.t_bits = 10;
        auto rep = run_adkpca(inst.data, inst.query, cfg);
        CHECK(rep.observed.distance <= rep.published_bounds.distance);
        CHECK(rep.observed.b <= rep.published_bounds.b);
        CHECK(rep.observed.distance <= rep.bounds.distance);
        CHECK(rep.observed.b <= rep.bounds.b);
        CHECK(rep.observed.proximity <= rep.bounds.proximity);
        CHECK(rep.a.value >= 0.0);
        CHECK(rep.a.value <= 1.0 + 1e-12);
        CHECK(rep.b.value >= 0.0);
        CHECK(rep.b.value <= 1.0 + 1e-12);
        for (double w : rep.omegas.values) CHECK(std::abs(w) <= 1.0);
        CHECK(rep.ledger.grover == planned_grover(inst.data.cols(), inst.data.rows(), 10, 10, 10, 10));
    }
}

TEST_CASE("honest bounds hold at low precision") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto inst = data::random_instance(seed + 500);
        KpcaConfig cfg;
        cfg.t_bits = 3 + static_cast<int>(seed % 6);
        auto rep = run_adkpca(inst.data, inst.query, cfg);
        CHECK(rep.observed.distance <= rep.bounds.distance);
        CHECK(rep.observed.b <= rep.bounds.b);
        CHECK(rep.observed.proximity <= rep.bounds.proximity);
    }
}

TEST_CASE("epsilon-driven runs stay within 2 eps") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto inst = data::random_instance(seed);
        KpcaConfig cfg;
        cfg.epsilon = 0.2;
        auto rep = run_adkpca(inst.data, inst.query, cfg);
        REQUIRE(rep.budget.has_value());
        CHECK(rep.observed.proximity <= 2 * 0.2);
        CHECK(rep.ledger.grover == rep.budget->planned_grover);
    }
}

TEST_CASE("query at the mean") {
    auto X = DataMatrix::from_rows({{1, 2}, {3, 4}});
    auto x0 = QueryPoint::from_values({2, 3});
    KpcaConfig cfg;
    cfg.t_bits = 6;
    auto rep = run_adkpca(X, x0, cfg);
    CHECK(rep.constants.C_prime == 1.0);
    CHECK(rep.proximity_classical == 0.0);
    CHECK(std::abs(rep.proximity) <= rep.bounds.proximity);
}

TEST_CASE("circuit mode is reproducible per seed") {
    auto inst = data::random_instance(4);
    KpcaConfig cfg;
    cfg.t_bits = 5;
    cfg.settings.mode = ae::AEMode::circuit;
    cfg.settings.seed = 99;
    auto a = run_adkpca(inst.data, inst.query, cfg);
    auto b = run_adkpca(inst.data, inst.query, cfg);
    CHECK(a.proximity == b.proximity);
    CHECK(a.omegas.values == b.omegas.values);
    CHECK(a.ledger == b.ledger);
    cfg.settings.seed.reset();
    CHECK_THROWS_AS(run_adkpca(inst.data, inst.query, cfg), ConfigError);
}

TEST_CASE("fused and explicit routes build the same states") {
    const auto fused = tiny_format(adde::Route::fused);
    const auto expl = tiny_format(adde::Route::explicit_gates);
    for (auto rows : std::vector<std::vector<std::vector<double>>>{
             {{0.5, -0.25}, {-0.375, 0.125}},
             {{0.5, -0.25, 0.125}, {-0.375, 0.125, 0.25}, {0.0, 0.5, -0.5}}}) {
        auto X = DataMatrix::from_rows(rows);
        std::vector<double> x0v(X.cols(), 0.375);
        auto x0 = QueryPoint::from_values(x0v);
        auto m = classical_moments(X);
        std::vector<double> mu(m.mu);
        for (auto& v : mu) v = arith::quantize(v + 0.0625, fused.format);
        const double c1 = refit_C_prime(x0, mu, fused.format);
        const double c2 = refit_C_dprime(X, x0, mu, fused.format);

        auto a1 = a_preparation(x0, mu, c1, fused), a2 = a_preparation(x0, mu, c1, expl);
        CHECK(std::abs(a1.exact_amplitude() - a2.exact_amplitude()) < 1e-12);
        CHECK(a1.A->cost() == a2.A->cost());
        for (std::size_t i = 0; i < X.rows(); ++i) {
            auto w1 = omega_preparation(X, x0, mu, c2, i, fused), w2 = omega_preparation(X, x0, mu, c2, i, expl);
            CHECK(std::abs(w1.exact_amplitude() - w2.exact_amplitude()) < 1e-12);
            CHECK(w1.A->cost() == w2.A->cost());
        }
        auto w = estimate_omegas(X, x0, mu, c2, 6, fused).values;
        auto b1 = b_preparation(w, fused), b2 = b_preparation(w, expl);
        CHECK(std::abs(b1.exact_amplitude() - b2.exact_amplitude()) < 1e-12);
        CHECK(b1.A->cost() == b2.A->cost());
        auto d1 = ae::phase_distribution(b1, 3), d2 = ae::phase_distribution(b2, 3);
        for (std::size_t y = 0; y < d1.size(); ++y) CHECK(std::abs(d1[y] - d2[y]) < 1e-12);
    }
}
