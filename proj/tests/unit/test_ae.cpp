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
#include "qadsim/ae/amplitude_estimation.hpp"
#include "qadsim/config.hpp"
#include "qadsim/error.hpp"

using namespace qadsim;
using namespace qadsim::ae;
using sim::RegisterLayout;

namespace {

constexpr double kPi = std::numbers::pi;

bool is_one(std::uint64_t l) { return l == 1; }

StatePreparation one_qubit(sim::Mat2 m, sim::QueryCost cost = {}) {
    auto c = std::make_shared<sim::Circuit>("A");
    c->add(sim::single_qubit("w", 0, m));
    if (cost.data_oracle || cost.query_oracle || cost.arithmetic) {
        // a do-nothing rotation that only carries the cost tag
        c->add(sim::keyed_rotation("w", {}, [](std::uint64_t) { return 1.0; }, cost, "tag"));
    }
    return StatePreparation{RegisterLayout{{"w", 1}}, c, "w", is_one, "A"};
}

// a = 1 - f^2 on a single qubit.
StatePreparation with_amplitude(double a) { return one_qubit(sim::rotation_matrix(std::sqrt(1.0 - a))); }

const sim::Mat2 kH{std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2};

// Two work registers: uniform k, then a k-dependent rotation of the flag.
StatePreparation two_register(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> f(4);
    for (auto& v : f) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    auto c = std::make_shared<sim::Circuit>("A");
    c->add(sim::hadamard("k"));
    c->add(sim::keyed_rotation("flag", {"k"}, [f](std::uint64_t k) { return f[k]; }));
    return StatePreparation{RegisterLayout{{"k", 2}, {"flag", 1}}, c, "flag", is_one, "A2"};
}

}  // namespace

TEST_CASE("Grover operator examples") {
    data::QueryLedger ledger;
    SUBCASE("A = H, good = {1}: one application gives 1/2") {
        auto prep = one_qubit(kH);
        auto q = build_grover(prep, &ledger);
        auto s = prep.prepare();
        q->apply(s);
        CHECK(sim::probability_of(s, "w", is_one) == doctest::Approx(std::pow(std::sin(3 * kPi / 4), 2)));
        CHECK(ledger.snapshot().grover == 1);
    }
    SUBCASE("a = 0 stays 0") {
        auto prep = one_qubit(sim::Mat2{});
        auto q = build_grover(prep, &ledger);
        auto s = prep.prepare();
        for (int l = 0; l < 5; ++l) {
            q->apply(s);
            CHECK(sim::probability_of(s, "w", is_one) == doctest::Approx(0.0));
        }
    }
    SUBCASE("a = 1 keeps unit magnitude") {
        auto prep = one_qubit(sim::Mat2{0, 1, 1, 0});
        auto q = build_grover(prep, &ledger);
        auto s = prep.prepare();
        for (int l = 0; l < 5; ++l) {
            q->apply(s);
            CHECK(std::abs(s.amplitude(1)) == doctest::Approx(1.0));
        }
    }
    SUBCASE("general l: good probability is sin^2((2l+1) theta)") {
        auto prep = two_register(7);
        const double theta = std::asin(std::sqrt(prep.exact_amplitude()));
        auto q = build_grover(prep, nullptr);
        auto s = prep.prepare();
        for (int l = 1; l <= 6; ++l) {
            q->apply(s);
            CHECK(sim::probability_of(s, "flag", is_one) ==
                  doctest::Approx(std::pow(std::sin((2 * l + 1) * theta), 2)).epsilon(1e-10));
        }
        auto back = s;
        q->apply_inverse(back);
        q->apply(back);
        for (std::uint64_t i = 0; i < s.dim(); ++i) CHECK(std::abs(back.amplitude(i) - s.amplitude(i)) < 1e-12);
    }
}

TEST_CASE("predicate outside the preparation is rejected") {
    auto prep = one_qubit(kH);
    prep.good_register = "elsewhere";
    CHECK_THROWS_AS(build_grover(prep), LayoutError);
    auto c = std::make_shared<sim::Circuit>("A");
    c->add(sim::hadamard("z"));
    StatePreparation bad{RegisterLayout{{"w", 1}}, c, "w", is_one, "bad"};
    CHECK_THROWS_AS(bad.validate(), LayoutError);
}

TEST_CASE("estimate_amplitude on exact cases") {
    for (auto mode : {AEMode::ideal, AEMode::circuit}) {
        AEConfig cfg{4, mode, 11};
        auto zero = estimate_amplitude(one_qubit(sim::Mat2{}), cfg);
        CHECK(zero.theta == 0.0);
        CHECK(zero.a == 0.0);

        auto half = estimate_amplitude(one_qubit(kH), cfg);
        CHECK(half.theta == doctest::Approx(4 * kPi / 16).epsilon(1e-15));
        CHECK(half.a == 0.5);
        CHECK(half.grid_step == doctest::Approx(kPi / 16));
        CHECK(half.grover_applications == 15);
    }
    auto dist = phase_distribution(one_qubit(kH), 4);
    CHECK(dist[4] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dist[12] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("circuit mode meets the error bound at the textbook rate") {
    const double a = 0.3;
    const int t = 8;
    const double bound = 2 * kPi * std::sqrt(a * (1 - a)) / 256.0 + kPi * kPi / 65536.0;
    auto prep = with_amplitude(a);
    CHECK(prep.exact_amplitude() == doctest::Approx(a).epsilon(1e-12));
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto r = estimate_amplitude(prep, AEConfig{t, AEMode::circuit, seed});
        if (std::abs(r.a - a) <= bound) ++ok;
    }
    CHECK(ok >= 81);
    // the distribution itself, without sampling noise
    auto dist = phase_distribution(prep, t);
    double mass = 0.0;
    for (std::uint64_t y = 0; y < dist.size(); ++y) {
        const double s = std::sin(fold_phase(y, t));
        if (std::abs(s * s - a) <= bound) mass += dist[y];
    }
    CHECK(mass >= 8.0 / (kPi * kPi));
}

TEST_CASE("gate-level and sequential QPE agree") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto prep = two_register(seed);
        for (int t = 1; t <= 4; ++t) {
            auto a = phase_distribution(prep, t, QpeStrategy::sequential_powers);
            auto b = phase_distribution(prep, t, QpeStrategy::gate_level);
            REQUIRE(a.size() == b.size());
            for (std::size_t y = 0; y < a.size(); ++y) CHECK(std::abs(a[y] - b[y]) < 1e-12);
        }
    }
}

TEST_CASE("ledger accounting is identical in both modes") {
    const sim::QueryCost cost{1, 1, 2};
    auto prep = one_qubit(kH, cost);
    for (int t = 1; t <= 6; ++t) {
        data::QueryLedger li, lc, lg;
        estimate_amplitude(prep, AEConfig{t, AEMode::ideal}, &li);
        estimate_amplitude(prep, AEConfig{t, AEMode::circuit, 3}, &lc);
        estimate_amplitude(prep, AEConfig{t, AEMode::circuit, 3, QpeStrategy::gate_level}, &lg);
        const std::uint64_t g = (std::uint64_t{1} << t) - 1;
        CHECK(li.snapshot().grover == g);
        CHECK(li.snapshot() == lc.snapshot());
        CHECK(li.snapshot() == lg.snapshot());
        CHECK(li.snapshot().data_oracle == 2 * g + 1);
        CHECK(li.snapshot().arithmetic == 2 * (2 * g + 1));
    }
    // one more bit doubles the count, plus one
    data::QueryLedger a, b;
    estimate_amplitude(prep, AEConfig{10, AEMode::ideal}, &a);
    estimate_amplitude(prep, AEConfig{11, AEMode::ideal}, &b);
    CHECK(b.snapshot().grover == 2 * a.snapshot().grover + 1);
}

TEST_CASE("ideal mode stays within half a grid step") {
    std::mt19937_64 rng(5);
    for (int n = 0; n < 200; ++n) {
        const double a = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const int t = 1 + static_cast<int>(rng() % 20);
        auto r = estimate_amplitude(with_amplitude(a), AEConfig{t, AEMode::ideal});
        const double theta = std::asin(std::sqrt(a));
        CHECK(std::abs(r.theta - theta) <= kPi / std::pow(2.0, t + 1) + 1e-12);
        CHECK(r.a >= 0.0);
        CHECK(r.a <= 1.0);
        CHECK(std::abs(r.a - a) <= ae_error_bound(a, t) + 1e-12);
    }
}

TEST_CASE("circuit and ideal agree on representable angles") {
    for (int t = 2; t <= 6; ++t) {
        for (std::uint64_t y = 0; y <= (std::uint64_t{1} << (t - 1)); ++y) {
            const double theta = kPi * static_cast<double>(y) / std::pow(2.0, t);
            const double a = std::pow(std::sin(theta), 2);
            auto prep = with_amplitude(a);
            auto i = estimate_amplitude(prep, AEConfig{t, AEMode::ideal});
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                auto c = estimate_amplitude(prep, AEConfig{t, AEMode::circuit, seed});
                CHECK(c.theta == i.theta);
            }
        }
    }
}

TEST_CASE("Grover eigenphases are plus and minus two theta") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto prep = two_register(seed);
        const double a = prep.exact_amplitude();
        if (a < 1e-6 || a > 1 - 1e-6) continue;
        const double theta = std::asin(std::sqrt(a));
        auto ph = grover_eigenphases(prep);
        CHECK(ph[0] == doctest::Approx(-2 * theta).epsilon(1e-9));
        CHECK(ph[1] == doctest::Approx(2 * theta).epsilon(1e-9));
    }
    CHECK_THROWS_AS(grover_eigenphases(one_qubit(sim::Mat2{})), DomainError);
}

TEST_CASE("bits_for_epsilon") {
    CHECK(bits_for_epsilon(0.5).t == 4);
    CHECK(bits_for_epsilon(0.01).t == 9);
    CHECK(bits_for_epsilon(kPi / 2 + kPi * kPi / 4).t == 1);
    CHECK(bits_for_epsilon(3.0).t == 2);
    CHECK(bits_for_epsilon(5.0).t == 1);
    CHECK_FALSE(bits_for_epsilon(0.01).needs_ideal);
    auto fine = bits_for_epsilon(1e-6);
    CHECK(fine.needs_ideal);
    CHECK(worst_case_error(fine.t) <= 1e-6);
    CHECK(worst_case_error(fine.t - 1) > 1e-6);
    CHECK_THROWS_AS(bits_for_epsilon(0.0), ConfigError);
    CHECK_THROWS_AS(bits_for_epsilon(-1.0), ConfigError);
    CHECK_THROWS_AS(bits_for_epsilon(1e-30), ConfigError);
    for (double eps = 0.9; eps > 1e-5; eps *= 0.7) {
        auto p = bits_for_epsilon(eps);
        CHECK(worst_case_error(p.t) <= eps);
        if (p.t > 1) CHECK(worst_case_error(p.t - 1) > eps);
    }
}

TEST_CASE("overlap_from_result") {
    AEResult r;
    r.a = 1.0;
    CHECK(overlap_from_result(r, 3.0) == 3.0);
    r.a = 0.5;
    CHECK(overlap_from_result(r, 3.0) == 0.0);
    r.a = 0.75;
    CHECK(overlap_from_result(r, 2.0) == 1.0);
}

TEST_CASE("configuration checks") {
    CHECK_THROWS_AS((AEConfig{4, AEMode::circuit, std::nullopt}.validate()), ConfigError);
    CHECK_THROWS_AS((AEConfig{15, AEMode::circuit, 1}.validate()), ConfigError);
    CHECK_THROWS_AS((AEConfig{0, AEMode::ideal}.validate()), ConfigError);
    CHECK_THROWS_AS((AEConfig{41, AEMode::ideal}.validate()), ConfigError);
    CHECK_NOTHROW((AEConfig{40, AEMode::ideal}.validate()));
    CHECK(parse_mode("circuit") == AEMode::circuit);
    CHECK_THROWS_AS(parse_mode("exact"), ConfigError);

    auto c = std::make_shared<sim::Circuit>("A");
    c->add(sim::hadamard("w"));
    StatePreparation wide{RegisterLayout{{"w", 1}, {"pad", qubit_cap() - 4}}, c, "w", is_one, "wide"};
    CHECK_THROWS_AS(estimate_amplitude(wide, AEConfig{8, AEMode::circuit, 1}), LayoutError);
    CHECK_NOTHROW(estimate_amplitude(wide, AEConfig{8, AEMode::ideal}));
}
