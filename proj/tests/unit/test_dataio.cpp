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

#include "doctest.h"
#include "qadsim/dataio/constants.hpp"
#include "qadsim/dataio/oracles.hpp"
#include "qadsim/error.hpp"
#include "test_util.hpp"

using namespace qadsim;
using namespace qadsim::data;
using sim::RegisterLayout;

namespace {

DataMatrix parse(const std::string& text, bool header = false) {
    std::istringstream in(text);
    return parse_csv(in, header);
}

const arith::Format kFmt{4, 8, true};

double joint(const sim::StateVector& s, const std::string& a, std::uint64_t va, const std::string& b, std::uint64_t vb) {
    double p = 0.0;
    for (std::uint64_t i = 0; i < s.dim(); ++i)
        if (s.layout().label(i, a) == va && s.layout().label(i, b) == vb) p += std::norm(s.amplitude(i));
    return p;
}

}  // namespace

TEST_CASE("csv parsing and padding") {
    auto m = parse("1,2\n3,4");
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 2);
    CHECK(m.at(1, 0) == 3.0);
    CHECK(m.at(0, 1) == 2.0);

    auto p = parse("1,2\n3,4\n5,6\n");
    CHECK(p.rows() == 3);
    CHECK(p.padded_rows() == 4);
    CHECK(p.padded_cols() == 2);
    CHECK(p.row_valid(2));
    CHECK_FALSE(p.row_valid(3));
    CHECK(p.at(3, 0) == 0.0);

    auto h = parse("a,b\n1.5, -2e-1\n", true);
    CHECK(h.rows() == 1);
    CHECK(h.at(0, 1) == -0.2);
    CHECK(h.padded_rows() == 2);

    try {
        parse("1,x");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        std::string w = e.what();
        CHECK(w.find("row 1") != std::string::npos);
        CHECK(w.find("column 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("1,2\n3"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("a,b\n", true), ParseError);
    CHECK_THROWS_AS(parse("1,\n"), ParseError);
}

TEST_CASE("O_X lookup, involution and ledger") {
    auto x = DataMatrix::from_rows({{1, 2}, {3, 4}});
    RegisterLayout l{{"i", 1}, {"j", 1}, {"v", kFmt.width()}};
    auto ox = oracle_OX(x, "i", "j", "v", kFmt);
    QueryLedger ledger;

    auto s = testing::uniform_over(l, {l.with_label(0, "i", 1)});
    apply_oracle(s, *ox, &ledger);
    CHECK(joint(s, "i", 1, "v", arith::encode_word(3.0, kFmt)) == doctest::Approx(1.0));
    apply_oracle(s, *ox, &ledger);
    CHECK(joint(s, "i", 1, "v", 0) == doctest::Approx(1.0));
    CHECK(ledger.snapshot().data_oracle == 2);
    CHECK(ledger.snapshot().query_oracle == 0);

    // uniform over i with j = 0: each (i, x_0^i) pair has probability 1/M
    auto u = new_state(l);
    apply_hadamard_block(u, "i");
    ox->apply(u);
    CHECK(joint(u, "i", 0, "v", arith::encode_word(1.0, kFmt)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(joint(u, "i", 1, "v", arith::encode_word(3.0, kFmt)) == doctest::Approx(0.5).epsilon(1e-12));

    RegisterLayout wide{{"i", 2}, {"j", 1}, {"v", kFmt.width()}};
    auto w = new_state(wide);
    CHECK_THROWS_AS(ox->apply(w), LayoutError);

    CHECK_THROWS_AS(oracle_OX(DataMatrix::from_rows({{100.0}}), "i", "j", "v", kFmt), RangeError);
}

TEST_CASE("O_x lookup") {
    auto q = QueryPoint::from_values({5, 7});
    RegisterLayout l{{"j", 1}, {"v", kFmt.width()}};
    auto ox = oracle_Ox(q, "j", "v", kFmt);
    QueryLedger ledger;
    auto s = testing::uniform_over(l, {l.with_label(0, "j", 1)});
    apply_oracle(s, *ox, &ledger);
    CHECK(joint(s, "j", 1, "v", arith::encode_word(7.0, kFmt)) == doctest::Approx(1.0));
    auto before = testing::random_state(l, 3);
    auto r = before;
    ox->apply(r);
    ox->apply(r);
    CHECK(testing::max_abs_diff(r, before) == 0.0);
    CHECK(ledger.snapshot().query_oracle == 1);

    auto u = new_state(l);
    apply_hadamard_block(u, "j");
    ox->apply(u);
    CHECK(joint(u, "j", 0, "v", arith::encode_word(5.0, kFmt)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(joint(u, "j", 1, "v", arith::encode_word(7.0, kFmt)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("constants on the 2x2 example") {
    auto x = DataMatrix::from_rows({{1, 2}, {3, 4}});
    auto q = QueryPoint::from_values({2.5, 5.0});
    std::vector<double> mu{2, 3}, s2{1, 1};
    auto k = compute_constants(x, q, mu, s2, DegeneratePolicy::error);
    CHECK(k.C == 4.0);
    CHECK(k.D == 1.0);
    CHECK(k.C_prime == 2.0);
    CHECK(k.C_dprime == 2.0);
    CHECK(k.T == 2.0);
    CHECK(k.E == 1.0);
    CHECK(k.floored.empty());
}

TEST_CASE("degenerate-data policy") {
    auto x = DataMatrix::from_rows({{1, 5}, {3, 5}});
    auto q = QueryPoint::from_values({0, 0});
    std::vector<double> mu{2, 5}, s2{1, 0};
    try {
        compute_constants(x, q, mu, s2, DegeneratePolicy::error);
        FAIL("expected DegenerateDataError");
    } catch (const DegenerateDataError& e) {
        CHECK(std::string(e.what()).find("feature 1") != std::string::npos);
    }
    auto k = compute_constants(x, q, mu, s2, DegeneratePolicy::epsilon_floor);
    CHECK(k.floored.size() == 1);

    auto y = DataMatrix::from_rows({{1, 2}, {3, 4}});
    auto at_mean = QueryPoint::from_values({2, 3});
    std::vector<double> m2{2, 3}, v2{1, 1};
    CHECK_THROWS_AS(compute_constants(y, at_mean, m2, v2, DegeneratePolicy::error), DegenerateDataError);
    auto f = compute_constants(y, at_mean, m2, v2, DegeneratePolicy::epsilon_floor);
    CHECK(f.C_prime == Tolerances::sigma_min);
    CHECK(parse_policy("epsilon-floor") == DegeneratePolicy::epsilon_floor);
    CHECK_THROWS_AS(parse_policy("nope"), ConfigError);
}

TEST_CASE("constants satisfy their max identities on random data") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto inst = random_instance(seed);
        const auto& x = inst.data;
        const auto& q = inst.query;
        const std::size_t m = x.rows(), d = x.cols();
        std::vector<double> mu(d, 0.0), s2(d, 0.0);
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t i = 0; i < m; ++i) mu[j] += x.at(i, j) / double(m);
            for (std::size_t i = 0; i < m; ++i) s2[j] += (x.at(i, j) - mu[j]) * (x.at(i, j) - mu[j]) / double(m);
        }
        auto k = compute_constants(x, q, mu, s2, DegeneratePolicy::error);
        bool hitC = false, hitD = false, hitCp = false, hitCpp = false;
        for (std::size_t j = 0; j < d; ++j) {
            const double dz = q.at(j) - mu[j];
            CHECK(std::abs(dz) <= k.C_prime);
            hitCp |= std::abs(dz) == k.C_prime;
            CHECK(std::abs(dz) / std::sqrt(s2[j]) <= k.T);
            CHECK(std::abs(std::log(s2[j])) <= k.E);
            for (std::size_t i = 0; i < m; ++i) {
                CHECK(std::abs(x.at(i, j)) <= k.C);
                hitC |= std::abs(x.at(i, j)) == k.C;
                CHECK(std::abs(x.at(i, j) - mu[j]) <= k.D);
                hitD |= std::abs(x.at(i, j) - mu[j]) == k.D;
                CHECK(std::abs((x.at(i, j) - mu[j]) * dz) <= k.C_dprime);
                hitCpp |= std::abs((x.at(i, j) - mu[j]) * dz) == k.C_dprime;
            }
        }
        CHECK((hitC && hitD && hitCp && hitCpp));
        CHECK((k.T == 1.0 || k.T / 2.0 < k.T));
    }
}

TEST_CASE("random instances are deterministic") {
    auto a = random_instance(42);
    auto b = random_instance(42);
    CHECK(a.data.to_rows() == b.data.to_rows());
    CHECK(a.query.values() == b.query.values());
    CHECK(a.data.rows() >= 2);
    CHECK(a.data.rows() <= 8);
    CHECK(a.data.cols() <= 4);
}
