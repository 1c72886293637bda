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
#include "qadsim/dataio/oracles.hpp"
#include "qadsim/error.hpp"
#include "qadsim/flawlab/flawlab.hpp"
#include "qadsim/simcore/ops.hpp"

using namespace qadsim;
using namespace qadsim::flawlab;
using data::DataMatrix;
using data::QueryPoint;

namespace {

const double kE = std::exp(1.0);

// Discrepancy between x - mu/N and x - mu over unit rows, by hand.
double hand_discrepancy(const std::vector<std::vector<double>>& raw) {
    auto rows = raw;
    const std::size_t d = rows[0].size();
    std::vector<double> mu(d, 0.0);
    for (auto& r : rows) {
        double n = 0.0;
        for (double v : r) n += v * v;
        for (auto& v : r) v /= std::sqrt(n);
        for (std::size_t j = 0; j < d; ++j) mu[j] += r[j];
    }
    double N = 0.0;
    for (double m : mu) N += m * m;
    N = std::sqrt(N);
    std::vector<double> u, w;
    for (const auto& r : rows)
        for (std::size_t j = 0; j < d; ++j) {
            u.push_back(r[j] - mu[j] / N);
            w.push_back(r[j] - mu[j]);
        }
    double nu = 0.0, nw = 0.0, dot = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        nu += u[k] * u[k];
        nw += w[k] * w[k];
        dot += u[k] * w[k];
    }
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::abs(dot) / std::sqrt(nu * nw)));
}

}  // namespace

TEST_CASE("superposition construction") {
    SUBCASE("single training point") {
        auto s = build_superposition(DataMatrix::from_rows({{3.0, 4.0}}));
        CHECK(s.N_mu == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(s.written_norm == doctest::Approx(1.0).epsilon(1e-15));
        auto st = s.state;
        sim::apply_hadamard_block(st, "a");
        // |1> branch: (x_j - mu_j/N)/2, which vanishes for one point
        const auto& a = st.layout().at("a");
        for (std::uint64_t j = 0; j < 2; ++j) {
            const double x = (j == 0 ? 0.6 : 0.8);
            CHECK(std::abs(st.amplitude((std::uint64_t{1} << a.offset) | (j << st.layout().at("j").offset))) < 1e-15);
            CHECK(std::abs(st.amplitude(j << st.layout().at("j").offset) - x) < 1e-15);
        }
        CHECK_THROWS_AS(interfere_and_postselect(s, 1), DomainError);
    }
    SUBCASE("two orthogonal unit states") {
        auto s = build_superposition(DataMatrix::from_rows({{1, 0}, {0, 1}}));
        CHECK(s.N_mu == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(s.written_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(std::abs(s.state.norm_squared() - 1.0) < 1e-12);
    }
    SUBCASE("zero mean vector") {
        CHECK_THROWS_AS(build_superposition(DataMatrix::from_rows({{1, 0}, {-1, 0}})), DomainError);
        CHECK_THROWS_AS(build_superposition(DataMatrix::from_rows({{0, 0}, {1, 0}})), DomainError);
    }
    CHECK_THROWS_AS(build_superposition(DataMatrix::from_rows({{1}, {2}, {3}, {4}, {5}})), LayoutError);
}

TEST_CASE("post-selected state against the claimed state") {
    SUBCASE("N_mu = 1 gives no discrepancy") {
        auto s = build_superposition(DataMatrix::from_rows({{1.0, 0.0}, {-0.5, std::sqrt(3.0) / 2}}));
        CHECK(s.N_mu == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(interfere_and_postselect(s, 3).discrepancy < 1e-10);
    }
    SUBCASE("generic 2x2 data") {
        auto s = build_superposition(DataMatrix::from_rows({{1, 2}, {3, 4}}));
        auto p = interfere_and_postselect(s, 3);
        CHECK(p.discrepancy > 0.01);
        CHECK(p.discrepancy == doctest::Approx(hand_discrepancy({{1, 2}, {3, 4}})).epsilon(1e-10));
        double n = 0.0;
        for (const auto& a : p.actual) n += std::norm(a);
        CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("global phase does not matter") {
        auto s = build_superposition(DataMatrix::from_rows({{1, 2}, {3, 4}, {-1, 0.5}}));
        const double before = interfere_and_postselect(s, 5).discrepancy;
        for (auto& a : s.state.amplitudes()) a *= std::polar(1.0, 0.7);
        CHECK(interfere_and_postselect(s, 5).discrepancy == doctest::Approx(before).epsilon(1e-12));
    }
    SUBCASE("zero exactly when N_mu = 1") {
        std::mt19937_64 rng(8);
        auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
        for (int n = 0; n < 50; ++n) {
            // d = 1 rows normalize to +-1, which either cancel or coincide
            const std::size_t M = 2 + rng() % 3, d = 2 + rng() % 3;
            std::vector<std::vector<double>> rows(M, std::vector<double>(d));
            for (auto& r : rows)
                for (auto& v : r) v = u();
            auto s = build_superposition(DataMatrix::from_rows(rows));
            auto p = interfere_and_postselect(s, static_cast<std::uint64_t>(n));
            CHECK((std::abs(s.N_mu - 1.0) > 1e-6) == (p.discrepancy > 1e-10));
            CHECK(p.discrepancy == doctest::Approx(hand_discrepancy(rows)).epsilon(1e-9));
        }
    }
}

TEST_CASE("second observable audit") {
    auto e = audit_m2({kE, kE});
    CHECK(e.actual == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e.claimed == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(std::abs(e.gap_claimed - 2.0) <= 1e-9);
    CHECK(e.norm_defect[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(e.unphysical == std::vector<std::size_t>{0, 1});

    auto one = audit_m2({1.0, 1.0});
    CHECK(one.actual == 0.0);
    CHECK(one.claimed == 0.0);
    CHECK(one.norm_defect[0] == 0.0);

    // componentwise (ln chi)^2 = 2 ln chi only at chi in {1, e^2}
    auto fixed = audit_m2({1.0, std::exp(2.0), 1.0});
    CHECK(std::abs(fixed.gap_claimed) < 1e-12);
    std::mt19937_64 rng(4);
    for (int n = 0; n < 50; ++n) {
        std::vector<double> chi(1 + rng() % 4);
        for (auto& c : chi) c = 0.2 + 3.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
        double ls = 0.0, l2 = 0.0;
        for (double c : chi) {
            ls += std::log(c);
            l2 += std::log(c) * std::log(c);
        }
        auto a = audit_m2(chi);
        CHECK(a.actual == doctest::Approx(l2).epsilon(1e-12));
        CHECK(std::abs(a.gap_claimed - (2 * ls - l2)) < 1e-12);
        CHECK(std::abs(a.gap_claimed) > 1e-6);
    }
}

TEST_CASE("expectation audit from data") {
    SUBCASE("chi = (e, e) construction") {
        auto X = chi_dataset({kE, kE});
        auto a = expectation_audit(X, QueryPoint::from_values({1.5, 0.5}));
        CHECK(a.chi.chi[0] == doctest::Approx(kE).epsilon(1e-14));
        CHECK(std::abs(a.m2.gap_claimed - 2.0) <= 1e-9);
        // sigma^2 = chi^2 / M
        CHECK(a.m2.target == doctest::Approx(2 * (2.0 - std::log(2.0))).epsilon(1e-12));
    }
    SUBCASE("generic 2x2 data") {
        auto X = DataMatrix::from_rows({{1, 2}, {3, 4}});
        auto x0 = QueryPoint::from_values({2.5, 2.0});
        auto a = expectation_audit(X, x0);
        CHECK(std::abs(a.m2.gap_claimed) > 1e-3);
        CHECK(std::abs(a.m2.gap_target) > 1e-3);
        CHECK(std::abs(a.log_density_claimed - a.log_density) > 1e-3);
        // ln P from the Gaussian formula: mu = (2, 3), sigma^2 = (1, 1)
        CHECK(a.log_density == doctest::Approx(-std::log(2 * std::numbers::pi) - 0.125 - 0.5).epsilon(1e-12));
    }
    SUBCASE("first observable reads twice its target") {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            auto inst = data::random_instance(seed);
            auto a = expectation_audit(inst.data, inst.query);
            CHECK(a.m1.actual == doctest::Approx(2.0 * a.m1.target).epsilon(1e-10));
            CHECK(a.m1.actual == doctest::Approx(a.m1.claimed).epsilon(1e-10));
            for (double v : a.m1.norm_defect) CHECK(std::abs(v) < 1e-12);
        }
    }
    SUBCASE("signed-sum reading is undefined everywhere") {
        auto a = expectation_audit(DataMatrix::from_rows({{1, 2}, {3, 5}}), QueryPoint::from_values({0, 0}),
                                   ChiReading::component_sum);
        CHECK(a.undefined.size() == 2);
        CHECK_FALSE(a.notes.empty());
        CHECK(a.m2.actual == 0.0);
    }
}

TEST_CASE("encoding classifier") {
    auto X = DataMatrix::from_rows({{1, 2}, {3, 4}});
    auto x0 = QueryPoint::from_values({2.5, 2.0});
    auto trace = construction_trace(X, x0);
    auto cls = encoding_classifier(trace);
    REQUIRE(cls.size() == 2);
    for (const auto& c : cls) {
        CHECK(c.encoding == Encoding::analog);
        CHECK_FALSE(c.precondition_met);
        CHECK(c.labels_per_branch >= 2);
    }

    // a register written by the data oracle holds one label per (i, j)
    arith::Format fmt{3, 4, true};
    sim::RegisterLayout layout{{"i", 1}, {"j", 1}, {"x", fmt.width()}};
    auto st = sim::new_state(layout);
    sim::apply_hadamard_block(st, "i");
    sim::apply_hadamard_block(st, "j");
    data::oracle_OX(X, "i", "j", "x", fmt)->apply(st);
    CallSite digital{"digital", st, {"x"}};
    auto mixed = encoding_classifier({trace[0], digital, trace[1]});
    CHECK(mixed[0].encoding == Encoding::analog);
    CHECK(mixed[1].encoding == Encoding::digital);
    CHECK(mixed[1].precondition_met);
    CHECK(mixed[1].labels_per_branch == 1);
    CHECK(mixed[2].encoding == Encoding::analog);
}

TEST_CASE("flaw report") {
    auto X = DataMatrix::from_rows({{1, 2}, {3, 4}});
    auto rep = run_flaws(X, QueryPoint::from_values({2.5, 2.0}), 11);
    CHECK(rep.encoding.size() == 2);
    CHECK(rep.normalization.discrepancy > 0.01);
    CHECK(std::abs(rep.superposition.state.norm_squared() - 1.0) < 1e-10);
    CHECK(rep.expectation.reading == ChiReading::component_norm);
}
