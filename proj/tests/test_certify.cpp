// SPDX-License-Identifier: Apache-2.0
//
// etfforge: equiangular tight frame construction and certification toolkit
// Copyright (C) 2026 The etfforge authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <random>

#include "catch_amalgamated.hpp"
#include "etfforge/certify.hpp"
#include "rational_oracle.hpp"

using namespace etfforge;
using oracle::Rational;

namespace {
// exact scalar for residual_z; sqr found by argument-dependent lookup
struct Q {
    Rational v;
    Q() = default;
    Q(double x) : v(x) {}  // NOLINT
    explicit Q(Rational r) : v(std::move(r)) {}
};
Q operator+(const Q& a, const Q& b) { return Q(a.v + b.v); }
Q operator-(const Q& a, const Q& b) { return Q(a.v - b.v); }
Q operator*(const Q& a, const Q& b) { return Q(a.v * b.v); }
Q sqr(const Q& a) { return Q(a.v * a.v); }

bool encloses(const Interval& i, const Rational& r) { return Rational(i.lo) <= r && r <= Rational(i.hi); }
}  // namespace

TEST_CASE("interval residual encloses exact rational residual") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (int d : {2, 3, 5, 8}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Interval> box;
            std::vector<Q> pt;
            for (int k = 0; k < 4 * d + 1; ++k) {
                const double a = ud(rng), w = 1e-3 * std::abs(ud(rng));
                box.emplace_back(a, a + w);
                pt.emplace_back(Q(Rational(a) + Rational(w) * Rational(trial % 3) / 2));
            }
            const auto fi = f_eval_interval(box, d);
            const auto fq = residual_z(pt, d);
            for (size_t i = 0; i < fi.size(); ++i) CHECK(encloses(fi[i], fq[i].v));
        }
    }
}

TEST_CASE("interval residual at exact and trivial points") {
    const auto r = solve(6, 1);
    REQUIRE(r.converged);
    const auto x0 = pack(r.pair, 0.5);
    const auto fi = f_eval_interval(lift(x0), 6);
    const RVec ff = residual(r.pair, 0.5);
    for (size_t i = 0; i < fi.size(); ++i) {
        CHECK(fi[i].mag() <= 1e-10);
        CHECK(fi[i].contains(ff(static_cast<Eigen::Index>(i))));
    }
    const auto f0 = f_eval_interval(lift(std::vector<double>(4 * 3 + 1, 0.0)), 3);
    CHECK(f0[0].lo == -1.0);
    CHECK(f0[0].hi == -1.0);
    CHECK(f0[1].lo == -1.0);
    CHECK(f0[1].hi == -1.0);
}

TEST_CASE("interval residual widths shrink with input widths") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ud(-0.5, 0.5);
    const int d = 5;
    std::vector<double> c(4 * d + 1);
    for (auto& v : c) v = ud(rng);
    double prev = INFINITY;
    for (double h = 1e-2; h > 1e-6; h /= 2) {
        std::vector<Interval> box;
        for (double v : c) box.emplace_back(v - h, v + h);
        double w = 0.0;
        for (const auto& f : f_eval_interval(box, d)) w = std::max(w, f.width());
        CHECK(w <= 0.55 * prev);
        prev = w;
    }
}

TEST_CASE("secant of t^2 at 1 encloses 2 + delta") {
    for (double delta : {1e-10, 1e-6, 0.25}) {
        const auto s = secant_enclosure(
            [](const std::vector<Interval>& z) { return std::vector<Interval>{sqr(z[0])}; }, {1.0}, delta);
        CHECK(encloses(s(0, 0), Rational(2) + Rational(delta)));
    }
    CHECK_THROWS_AS(secant_jacobian(std::vector<double>(9, 0.1), 0.0, 2), InvalidArgument);
}

TEST_CASE("secant midpoint agrees with the analytic Jacobian") {
    for (int d : {3, 7, 12, 20}) {
        CAPTURE(d);
        const auto r = solve(d, 1);
        REQUIRE(r.converged);
        const auto x0 = pack(r.pair, 0.5);
        const IntervalMatrix s = secant_jacobian(x0, 1e-10, d);
        CHECK(max_abs(s.midpoint() - analytic_jacobian_z(x0, d)) <= 1e-5);
        CHECK(s.max_width() <= 1e-4);
    }
}

TEST_CASE("coefficient norm audit") {
    for (int d = 2; d <= 10; ++d) {
        CAPTURE(d);
        CHECK(symbolic_f_abs(d) <= f_abs_bound(d));
    }
    const ResidualSystem sys(4);
    std::vector<Poly> z;
    for (int i = 0; i < sys.variables(); ++i) z.push_back(Poly::var(i));
    int deg = 0;
    for (const auto& p : residual_z(z, 4)) deg = std::max(deg, p.degree());
    CHECK(deg == 4);
}

TEST_CASE("certify small dimensions") {
    for (int d : {2, 3, 5, 6}) {
        CAPTURE(d);
        const auto r = solve(d, 1);
        REQUIRE(r.converged);
        const auto c = certify(r.pair);
        CHECK(c.verified);
        CHECK(c.kernel_dim == (3 * d + 1) / 2);
        CHECK(c.lhs_upper < c.rhs_lower);
        CHECK(c.epsilon > 0.0);
        CHECK(c.epsilon < 1e-6);
    }
    CHECK(certify(solve(2, 1).pair).kernel_dim == 3);
    CHECK(certify(solve(5, 1).pair).kernel_dim == 8);
}

TEST_CASE("certificate bounds are reproducible and monotone in the residual") {
    const auto r = solve(7, 2);
    REQUIRE(r.converged);
    const auto c = certify(r.pair);
    REQUIRE(c.verified);
    double nx = 0.0;
    for (double v : c.x0) nx = std::max(nx, std::abs(v));
    const auto s = contraction_sides(c.bound_ST_minus_I, c.bound_T_norm, c.bound_f_x0, nx, c.delta, c.epsilon, c.d);
    CHECK(s.lhs.hi == c.lhs_upper);
    CHECK(s.rhs.lo == c.rhs_lower);
    CHECK(std::nextafter(s.lhs.hi, INFINITY) < std::nextafter(s.rhs.lo, -INFINITY));
    for (double shrink : {0.5, 0.1, 0.0}) {
        const auto t = contraction_sides(c.bound_ST_minus_I, c.bound_T_norm, shrink * c.bound_f_x0, nx, c.delta,
                                     c.epsilon, c.d);
        CHECK(t.lhs.hi < t.rhs.lo);
    }
}

TEST_CASE("general tilde reduction beyond the unit ball") {
    const double a = 0.1, bt = 2.0, c0 = 1e-14;
    const auto inside = contraction_sides(a, bt, c0, 0.5, 1e-10, 0.25, 3);
    const auto outside = contraction_sides(a, bt, c0, 0.9, 1e-10, 0.25, 3);
    const double k = 16.0 * 9 * 12 * bt;
    CHECK(inside.lhs.hi >= a + 0.25 * k);
    CHECK(outside.lhs.lo >= a + 0.25 * 1.15 * 1.15 * k * (1 - 1e-12));
    CHECK(outside.lhs.hi > inside.lhs.hi);
}

TEST_CASE("certify rejects bad inputs") {
    const auto r = solve(5, 1);
    REQUIRE(r.converged);
    CirculantPair bad = r.pair;
    bad.x(0) += 1e-2;
    try {
        certify(bad);
        FAIL("corrupted point certified");
    } catch (const CertificationFailed& e) {
        CHECK(e.reason == CertificationFailed::Reason::infeasible);
        CHECK(e.gap < 0.0);
    }
    const auto rec = certify_or_record(bad, 1e-10);
    CHECK_FALSE(rec.verified);
    CHECK(rec.failure == "infeasible");
    CirculantPair big{2, CVec::Zero(2), CVec::Zero(2)};
    big.x(0) = 1.0;
    big.y(0) = 1.0;
    CHECK_THROWS_AS(certify(big), InvalidArgument);
}

TEST_CASE("certify_range keeps d order and records failures") {
    const auto cs = certify_range(2, 7, SeedPolicy{1, 2}, 2);
    REQUIRE(cs.size() == 6);
    for (size_t i = 0; i < cs.size(); ++i) {
        CHECK(cs[i].d == static_cast<int>(i) + 2);
        CHECK(cs[i].kernel_dim == (3 * cs[i].d + 1) / 2);
        if (cs[i].d != 4) CHECK(cs[i].verified);
    }
    // the 4 x 8 solution set is too small for the full-rank test
    CHECK_FALSE(cs[2].verified);
    CHECK(cs[2].failure == "infeasible");
    CHECK(certify_range(9, 8, SeedPolicy{}, 1).empty());
    CHECK_THROWS_AS(certify_range(1, 3, SeedPolicy{}, 1), InvalidArgument);
}
