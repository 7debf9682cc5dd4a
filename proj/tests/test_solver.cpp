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

#include <chrono>
#include <random>

#include "catch_amalgamated.hpp"
#include "etfforge/constructions.hpp"
#include "etfforge/harmonic.hpp"
#include "etfforge/solver.hpp"

using namespace etfforge;

namespace {
RMat central_differences(const std::vector<double>& z, int d, double h) {
    const ResidualSystem sys(d);
    RMat j(sys.rows(), sys.variables());
    for (int k = 0; k < sys.variables(); ++k) {
        auto zp = z, zm = z;
        zp[k] += h;
        zm[k] -= h;
        const auto fp = residual_z(zp, d), fm = residual_z(zm, d);
        for (int i = 0; i < sys.rows(); ++i) j(i, k) = (fp[i] - fm[i]) / (2 * h);
    }
    return j;
}

// x^_k = sum_j x_j e^{-2 pi i jk/d}
CVec dft(const CVec& x) {
    const int d = static_cast<int>(x.size());
    CVec out = CVec::Zero(d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) out(k) += x(j) * std::polar(1.0, -2 * std::numbers::pi * j * k / d);
    return out;
}
}  // namespace

TEST_CASE("constraint count is 2d + floor(d/2) + 1") {
    for (int d = 2; d <= 200; ++d) {
        const ResidualSystem sys(d);
        CHECK(sys.rows() == 2 * d + d / 2 + 1);
        CHECK(sys.kernel_dim() == (3 * d + 1) / 2);
    }
    for (int d : {2, 3, 7, 10}) CHECK(static_cast<int>(residual(random_pair(d, 1), 0.5).size()) == 2 * d + d / 2 + 1);
}

TEST_CASE("residual hand evaluations") {
    CirculantPair p{2, CVec(2), CVec(2)};
    p.x << 1.0, 0.0;
    p.y << 1.0 / std::sqrt(2.0), I_unit / std::sqrt(2.0);
    const RVec r = residual(p, 0.5);
    CHECK(std::abs(r(0)) < 1e-15);
    CHECK(std::abs(r(1)) < 1e-15);
    CHECK(std::abs(r(2)) < 1e-15);

    CirculantPair e{2, CVec::Zero(2), CVec::Zero(2)};
    e.x(0) = 1.0;
    e.y(0) = 1.0;
    const RVec re = residual(e, 0.5);
    const ResidualSystem sys(2);
    CHECK(re(sys.auto_begin()) == Catch::Approx(-1.0));  // |<x,Tx>|^2 - |<x,y>|^2 = 0 - 1
    CHECK(re(sys.cross_begin()) == Catch::Approx(-1.0));
}

TEST_CASE("closed-form v = 5 generators are an exact zero") {
    const auto df = synthesize_doubled_frame(paley_graph(5), 1);
    REQUIRE(df.pair.has_value());
    CHECK(inf_norm(residual(*df.pair, 0.5)) <= 1e-10);
    const auto df13 = synthesize_doubled_frame(paley_graph(13), -1);
    REQUIRE(df13.pair.has_value());
    CHECK(inf_norm(residual(*df13.pair, 0.5)) <= 1e-10);
}

TEST_CASE("residual vanishes on circulantized family frames") {
    for (std::uint64_t q : {3, 5, 9}) {
        const int d = family_dimension(Family::double_paley_plus, q);
        const CMat g = gram_of_signature(family_signature(Family::double_paley_plus, q), d);
        const auto cz = circulantize(g, family_automorphism(Family::double_paley_plus, q));
        const auto gens = circulant_generators(cz.gram);
        CirculantPair p{d, gens[0], gens[1]};
        REQUIRE(check_etf(assemble_2circulant(p), 1e-12).pass);
        CHECK(inf_norm(residual(p, 0.5)) <= 1e-11);
    }
}

TEST_CASE("analytic Jacobian matches central differences") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    double worst = 0.0;
    for (int d = 2; d <= 10; ++d)
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> z(4 * d + 1);
            for (auto& v : z) v = ud(rng);
            const RMat ja = analytic_jacobian_z(z, d);
            const RMat jf = central_differences(z, d, 1e-6);
            worst = std::max(worst, max_abs(ja - jf) / std::max(1.0, max_abs(ja)));
        }
    CHECK(worst <= 1e-5);
}

TEST_CASE("simple Jacobian entries") {
    const int d = 3;
    std::vector<double> z(4 * d + 1);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (auto& v : z) v = ud(rng);
    const RMat j = analytic_jacobian_z(z, d);
    for (int k = 0; k < d; ++k) CHECK(j(0, k) == Catch::Approx(2 * z[k]));
    CHECK(j(2, 4 * d) == -4.0);
    CHECK(j(0, 4 * d) == 0.0);
}

TEST_CASE("solve converges and yields ETFs") {
    for (int d : {2, 3, 4, 5, 6, 7, 11, 16}) {
        CAPTURE(d);
        const auto r = solve(d, 1);
        REQUIRE(r.converged);
        CHECK(r.residual_inf <= 1e-12);
        const CMat phi = assemble_2circulant(r.pair);
        CHECK(check_etf(phi, 1e-11).pass);
        double re, im;
        const auto z = pack(r.pair, 0.5);
        detail::shifted_inner(z, d, 0, d, 2 * d, 3 * d, 0, re, im);
        CHECK(std::abs(re * re + im * im - 1.0 / (2 * d - 1)) < 1e-10);
        const CVec xh = dft(r.pair.x), yh = dft(r.pair.y);
        for (int k = 0; k < d; ++k) CHECK(std::abs(std::norm(xh(k)) + std::norm(yh(k)) - 2.0) < 1e-8);
    }
}

TEST_CASE("solved frames are 2-circulant harmonic") {
    const auto r = solve(5, 3);
    REQUIRE(r.converged);
    const BlockGram bg(2, 5, gram(assemble_2circulant(r.pair)));
    CHECK(detect_harmonic_gram(bg).stable);
    CHECK(check_regular_representation(bg));
}

TEST_CASE("solve is deterministic and reports non-convergence") {
    const auto a = solve(6, 42), b = solve(6, 42);
    CHECK(a.iterations == b.iterations);
    CHECK(a.residual_inf == b.residual_inf);
    CHECK(max_abs(a.pair.x - b.pair.x) == 0.0);
    const auto c = solve(6, 42, 1e-12, 1);
    CHECK_FALSE(c.converged);
    CHECK(c.iterations == 1);
    CHECK(c.residual_inf > 1e-12);
    CHECK_THROWS_AS(solve(1, 1), InvalidArgument);
}

TEST_CASE("solve d = 33 within a minute") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = solve(33, 1);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(r.converged);
    CHECK(secs < 60.0);
    CHECK(check_etf(assemble_2circulant(r.pair), 1e-10).pass);
}

TEST_CASE("solve_batch keeps input order") {
    const auto rs = solve_batch({5, 3, 4}, 1, 1e-12, 2000, 2, 2);
    REQUIRE(rs.size() == 3);
    CHECK(rs[0].pair.d == 5);
    CHECK(rs[1].pair.d == 3);
    CHECK(rs[2].pair.d == 4);
    for (const auto& r : rs) CHECK(r.converged);
}

TEST_CASE("alternating projections reach small ETFs") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const CMat g = alternating_projections_gram(2, 4, seed, 2000);
        CHECK(check_etf(frame_from_gram(g, 2), 1e-6).pass);
    }
    const CMat g3 = alternating_projections_gram(3, 6, 5, 10000);
    CHECK(check_etf(frame_from_gram(g3, 3), 1e-6).pass);
    CHECK_THROWS_AS(alternating_projections_gram(3, 3, 1, 10), InvalidArgument);
}

TEST_CASE("imaginary rounding on exact signatures") {
    const CMat g = gram_of_signature(family_signature(Family::paley_plus, 7), 4);
    const CMat ns = normalized_phase_signature(g);
    for (int j = 1; j < 8; ++j) CHECK(std::abs(ns(0, j) - 1.0) < 1e-12);
    for (int i = 1; i < 8; ++i)
        for (int j = 1; j < 8; ++j)
            if (i != j) CHECK(std::abs(ns(i, j).real()) < 1e-9);
    CHECK(imaginary_rounding_ok(ns));
    CMat bad = ns;
    bad(1, 2) = -bad(1, 2);
    bad(2, 1) = -bad(2, 1);
    CHECK_FALSE(imaginary_rounding_ok(bad));
}

TEST_CASE("d4 experiment statistics") {
    const auto st = d4_uniqueness_experiment(5, 10000, 9);
    REQUIRE(st.trials.size() == 5);
    CHECK(st.max_abs_re < 0.1);
    CHECK(st.rounding_successes == 5);
    const auto z = d4_uniqueness_experiment(1, 0, 9);
    REQUIRE(z.trials.size() == 1);
    CHECK(z.max_abs_re >= 0.0);
}
