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

#include <algorithm>
#include <set>

#include "catch_amalgamated.hpp"
#include "etfforge/constructions.hpp"

using namespace etfforge;

namespace {
double square_residual(const CMat& s) {
    const Eigen::Index n = s.rows();
    return max_abs(s * s - static_cast<double>(n - 1) * CMat::Identity(n, n));
}

// squares mod a prime by enumeration
std::set<long long> squares_mod(long long p) {
    std::set<long long> s;
    for (long long a = 1; a < p; ++a) s.insert(a * a % p);
    return s;
}

// sorted multiset of triple products G_ij G_jk G_ki over i<j<k
std::vector<cplx> triple_products(const CMat& g) {
    std::vector<cplx> out;
    const Eigen::Index n = g.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            for (Eigen::Index k = j + 1; k < n; ++k) out.push_back(g(i, j) * g(j, k) * g(k, i));
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}
}  // namespace

TEST_CASE("paley_graph small cases") {
    const auto g5 = paley_graph(5);
    std::vector<int> nbrs;
    for (int j = 0; j < 5; ++j)
        if (g5.A(0, j)) nbrs.push_back(j);
    CHECK(nbrs == std::vector<int>{1, 4});
    for (std::uint64_t q : {9, 13}) {
        const auto g = paley_graph(q);
        const long long v = g.v, k = (v - 1) / 2;
        CHECK(g.A.row(0).sum() == k);
        CHECK(structure_constants_hold(g));
    }
    // SRG(9,4,1,2) and SRG(13,6,2,3) by counting common neighbours
    for (auto [q, lam, mu] : std::vector<std::tuple<int, int, int>>{{9, 1, 2}, {13, 2, 3}}) {
        const auto g = paley_graph(static_cast<std::uint64_t>(q));
        const IntMat a2 = g.A * g.A;
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j)
                if (i != j) CHECK(a2(i, j) == (g.A(i, j) ? lam : mu));
    }
    CHECK_THROWS_AS(paley_graph(7), InvalidArgument);
    CHECK_THROWS_AS(paley_graph(15), InvalidArgument);
}

TEST_CASE("paley_conference orientation and identity") {
    for (std::uint64_t q : {5, 7, 9, 11, 13, 27}) {
        const auto c = paley_conference(q);
        CHECK(c.valid());
        CHECK(c.n == static_cast<int>(q + 1));
        CHECK((c.symmetry == ConferenceMatrix::Symmetry::symmetric) == (q % 4 == 1));
    }
    const auto c7 = paley_conference(7);
    const auto sq = squares_mod(7);
    for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b)
            if (a != b) CHECK(c7.C(a + 1, b + 1) == (sq.count(((b - a) % 7 + 7) % 7) ? 1 : -1));
    CHECK(c7.C(1, 0) == -1);
    CHECK(c7.C(0, 1) == 1);
    CHECK_THROWS_AS(paley_conference(8), InvalidArgument);
}

TEST_CASE("symplectic_conference reproduces the Paley matrix") {
    for (std::uint64_t q : {3, 5, 7, 9, 13}) {
        const auto s = symplectic_conference(q, standard_line_representatives(q));
        CHECK(s.valid());
        CHECK((s.symmetry == ConferenceMatrix::Symmetry::symmetric) == (q % 4 == 1));
        CHECK(symplectic_to_paley_reindex(s.C, q) == paley_conference(q).C);
    }
}

TEST_CASE("symplectic_conference with scaled representatives is switching equivalent") {
    for (std::uint64_t q : {5, 7, 9}) {
        auto f = make_field_q(q);
        auto reps = standard_line_representatives(q);
        const auto c = symplectic_conference(q, reps);
        std::vector<long long> chis;
        for (size_t i = 0; i < reps.size(); ++i) {
            const FieldElement s = 1 + (i * 5) % (q - 1);
            reps[i] = {f->mul(s, reps[i].first), f->mul(s, reps[i].second)};
            chis.push_back(f->chi(s));
        }
        const auto c2 = symplectic_conference(q, reps);
        for (int i = 0; i < c.n; ++i)
            for (int j = 0; j < c.n; ++j)
                CHECK(c2.C(i, j) == chis[static_cast<size_t>(i)] * chis[static_cast<size_t>(j)] * c.C(i, j));
    }
}

TEST_CASE("symplectic_conference rejects repeated lines") {
    auto f = make_field_q(5);
    auto reps = standard_line_representatives(5);
    reps[2] = {f->mul(2, reps[1].first), f->mul(2, reps[1].second)};
    CHECK_THROWS_AS(symplectic_conference(5, reps), InvalidArgument);
}

TEST_CASE("double_signature") {
    // n = 2d recovers the basic skew doubling
    const auto c = paley_conference(7);
    const CMat s = c.signature();
    const CMat dbl = double_signature(s, 4, 8, 1);
    CHECK(max_abs(CMat(dbl.topRightCorner(8, 8) - (s + I_unit * CMat::Identity(8, 8)))) < 1e-15);
    CHECK(max_abs(CMat(dbl.bottomLeftCorner(8, 8) - (s - I_unit * CMat::Identity(8, 8)))) < 1e-15);

    const auto rs = renes_strohmer_gram(7);
    const CMat d7 = double_signature(rs.naimark_signature, 3, 7, 1);
    CHECK(d7.rows() == 14);
    CHECK(max_abs(d7 * d7 - 13.0 * CMat::Identity(14, 14)) < 1e-9);

    const CMat d6 = double_signature(paley_conference(5).signature(), 3, 6, -1);
    CHECK(max_abs(d6 * d6 - 11.0 * CMat::Identity(12, 12)) < 1e-9);
    CHECK_THROWS_AS(double_signature(s, 2, 8, 1), InvalidArgument);
    CHECK_THROWS_AS(double_signature(s, 4, 8, 0), InvalidArgument);
}

TEST_CASE("double_conference_graph") {
    const cplx beta = conference_doubling_beta(5, 1);
    CHECK(std::abs(beta - cplx(0.5, std::sqrt(3.0) / 2.0)) < 1e-15);
    for (std::uint64_t q : {5, 9, 13, 17, 25}) {
        for (int eps : {1, -1}) {
            const CMat s = double_conference_graph(paley_graph(q), eps);
            CHECK(square_residual(s) <= 1e-9);
            for (Eigen::Index i = 0; i < s.rows(); ++i) CHECK(s(i, i) == cplx(0.0));
        }
    }
    ConferenceGraph bad;
    bad.v = 5;
    bad.A = IntMat::Zero(5, 5);
    CHECK_THROWS_AS(double_conference_graph(bad, 1), InvalidArgument);
}

TEST_CASE("closed-form coefficients for the 5-cycle") {
    const auto c = doubled_frame_coefficients(5, 1);
    const double r = std::sqrt(2.0 / 15.0);
    CHECK(std::abs(c[0] - (0.2 + 2.0 * r)) < 1e-12);
    CHECK(std::abs(c[1] - 0.2) < 1e-12);
    CHECK(std::abs(c[2] - (0.2 - r)) < 1e-12);
    CHECK(std::abs(c[3] - (0.2 - std::exp(cplx(0.0, 2.0 * std::numbers::pi / 3.0)) * r)) < 1e-12);
    CHECK(std::abs(c[4] - (6.0 - std::sqrt(-15.0 * cplx(13.0, 3.0 * std::sqrt(3.0)))) / 30.0) < 1e-12);
    CHECK(std::abs(c[5] - (0.2 - I_unit / std::sqrt(10.0))) < 1e-12);
    // eigenvalue data k, r, s of the 5-cycle adjacency
    const auto ev = hermitian_eigen(to_complex(paley_graph(5).A));
    CHECK(std::abs(ev.eigenvalues(4) - 2.0) < 1e-12);
    CHECK(std::abs(ev.eigenvalues(3) - (-1.0 + std::sqrt(5.0)) / 2.0) < 1e-12);
    CHECK(std::abs(ev.eigenvalues(0) - (-1.0 - std::sqrt(5.0)) / 2.0) < 1e-12);
}

TEST_CASE("synthesize_doubled_frame matches the doubled signature") {
    for (std::uint64_t q : {5, 9, 13, 17, 25}) {
        for (int eps : {1, -1}) {
            const auto g = paley_graph(q);
            const auto df = synthesize_doubled_frame(g, eps);
            CHECK(check_etf(df.frame, 1e-10).pass);
            const CMat expect = gram_of_signature(double_conference_graph(g, eps), static_cast<Eigen::Index>(q));
            CHECK(max_abs(gram(df.frame) - expect) <= 1e-9);
            CHECK(df.pair.has_value() == is_prime(q));
            if (df.pair) CHECK(max_abs(assemble_2circulant(*df.pair) - df.frame) < 1e-14);
        }
    }
}

TEST_CASE("renes_strohmer_gram") {
    const auto rs = renes_strohmer_gram(7);
    CHECK(rs.d == 4);
    const auto [gamma, s] = signature_of_gram(rs.gram);
    CHECK(std::abs(gamma - 1.0 / (2.0 * std::sqrt(2.0))) < 1e-12);
    CHECK(check_etf(frame_from_gram(rs.gram, 4), 1e-9).pass);
    CHECK(check_etf(frame_from_gram(rs.naimark_gram, 3), 1e-9).pass);

    const auto r3 = renes_strohmer_gram(3);
    const CMat mb = frame_from_gram(r3.gram, 2);
    CHECK(check_etf(mb, 1e-10).pass);
    CHECK(std::abs(check_etf(mb, 1e-10).gamma - 0.5) < 1e-14);
    CHECK_THROWS_AS(renes_strohmer_gram(5), InvalidArgument);
}

TEST_CASE("2 G_q for both residues of q mod 4") {
    for (std::uint64_t q : {3, 5, 7, 9, 11, 13, 17, 19, 23, 27}) {
        const CMat s = double_paley_signature(q, 1);
        CHECK(s.rows() == static_cast<Eigen::Index>(2 * q));
        CHECK(square_residual(s) <= 1e-9 * s.rows());
        CHECK(check_etf(frame_from_gram(gram_of_signature(s, static_cast<Eigen::Index>(q)), static_cast<Eigen::Index>(q)), 1e-9).pass);
    }
}

TEST_CASE("2 (G_q + 1) signatures") {
    for (std::uint64_t q : {3, 5, 7, 9, 11, 13}) {
        const CMat s = double_paley_plus_signature(q, -1);
        CHECK(s.rows() == static_cast<Eigen::Index>(2 * (q + 1)));
        CHECK(square_residual(s) <= 1e-9 * s.rows());
    }
}

TEST_CASE("steiner_circulant") {
    const CMat h3 = std::sqrt(3.0) * dft_matrix(3);
    const CMat s1 = steiner_circulant(1, h3, {0, 1});
    CHECK(s1.rows() == 3);
    CHECK(s1.cols() == 9);
    const auto rep = check_etf(s1, 1e-12);
    CHECK(rep.pass);
    CHECK(std::abs(rep.gamma - 0.5) < 1e-15);

    const CMat s2 = steiner_circulant(2, sylvester_hadamard(4), {1, 2, 4});
    CHECK(s2.rows() == 7);
    CHECK(s2.cols() == 28);
    CHECK(check_etf(s2, 1e-12).pass);
    CHECK(max_abs(CMat(s2.imag().cast<cplx>())) == 0.0);

    // supports: size k; translates of distinct generators meet in at most one point
    for (int c = 0; c < 28; ++c) {
        int sz = 0;
        for (int i = 0; i < 7; ++i) sz += std::abs(s2(i, c)) > 0 ? 1 : 0;
        CHECK(sz == 3);
    }
    for (int c1 = 0; c1 < 28; ++c1)
        for (int c2 = 0; c2 < 28; ++c2) {
            if (c1 / 7 == c2 / 7 || c1 % 7 == c2 % 7) continue;
            int meet = 0;
            for (int i = 0; i < 7; ++i) meet += (std::abs(s2(i, c1)) > 0 && std::abs(s2(i, c2)) > 0) ? 1 : 0;
            CHECK(meet <= 1);
        }

    CHECK_THROWS_AS(steiner_circulant(2, sylvester_hadamard(4), {0, 1, 2}), InvalidArgument);
    CHECK_THROWS_AS(steiner_circulant(1, CMat::Identity(3, 3), {0, 1}), InvalidArgument);
}

TEST_CASE("planar difference set search") {
    for (int m : {1, 2, 3, 4, 5}) {
        const auto d = find_planar_difference_set(m);
        REQUIRE(d.has_value());
        CHECK_NOTHROW(verify_planar_difference_set(m, *d));
        const int k = m + 1;
        const CMat h = std::sqrt(static_cast<double>(k + 1)) * dft_matrix(k + 1);
        CHECK(check_etf(steiner_circulant(m, h, *d), 1e-10).pass);
    }
    CHECK_FALSE(find_planar_difference_set(6).has_value());
}

TEST_CASE("family_3x6") {
    for (cplx alpha : {cplx(1.0), std::exp(cplx(0.0, 2.0 * std::numbers::pi / 7.0)), I_unit, std::exp(cplx(0.0, 0.3))}) {
        const CMat s = family_3x6(alpha);
        CHECK(max_abs(s - s.adjoint()) == 0.0);
        CHECK(square_residual(s) <= 1e-10);
        const CMat g = gram_of_signature(s, 3);
        CHECK(check_etf(frame_from_gram(g, 3), 1e-10).pass);
    }
    CHECK_THROWS_AS(family_3x6(cplx(1.1)), InvalidArgument);
}

TEST_CASE("family_3x6 triple products separate generic members") {
    const double g = welch_gamma(3, 6);
    const cplx a1(1.0), a7 = std::exp(cplx(0.0, 2.0 * std::numbers::pi / 7.0));
    const CMat g1 = CMat::Identity(6, 6) + g * family_3x6(a1);
    const CMat g7 = CMat::Identity(6, 6) + g * family_3x6(a7);
    // the (0,1,2) triple carries alpha^3
    const cplx t1 = g1(0, 1) * g1(1, 2) * g1(2, 0), t7 = g7(0, 1) * g7(1, 2) * g7(2, 0);
    CHECK(std::abs(t1 - g * g * g) < 1e-14);
    CHECK(std::abs(t7 - g * g * g * a7 * a7 * a7) < 1e-14);
    CHECK(std::abs(t1 - t7) > 1e-2);
    // the (1,2,4) triple is the same for every alpha
    const cplx u1 = g1(1, 2) * g1(2, 4) * g1(4, 1), u7 = g7(1, 2) * g7(2, 4) * g7(4, 1);
    CHECK(std::abs(u1 - u7) < 1e-14);
    // as multisets the triple products differ
    const auto m1 = triple_products(g1), m7 = triple_products(g7);
    double diff = 0.0;
    for (size_t i = 0; i < m1.size(); ++i) diff = std::max(diff, std::abs(m1[i] - m7[i]));
    CHECK(diff > 1e-2);
}

TEST_CASE("zauner_2x4_signature") {
    const CMat s = zauner_2x4_signature();
    CHECK(s(0, 3) == -I_unit);
    // exact Gaussian-integer square
    using GI = std::pair<long long, long long>;
    std::vector<std::vector<GI>> z(4, std::vector<GI>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) z[i][j] = {std::llround(s(i, j).real()), std::llround(s(i, j).imag())};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            long long re = 0, im = 0;
            for (int k = 0; k < 4; ++k) {
                re += z[i][k].first * z[k][j].first - z[i][k].second * z[k][j].second;
                im += z[i][k].first * z[k][j].second + z[i][k].second * z[k][j].first;
            }
            CHECK(re == (i == j ? 3 : 0));
            CHECK(im == 0);
        }
    CHECK(check_etf(frame_from_gram(gram_of_signature(s, 2), 2), 1e-12).pass);
}

TEST_CASE("table_dispatch") {
    CHECK(table_dispatch(17) == std::vector<std::string>{"2·G_17"});
    CHECK(table_dispatch(8) == std::vector<std::string>{"2·(G_7+1)"});
    CHECK(table_dispatch(77).empty());
    CHECK(table_dispatch(3) == std::vector<std::string>{"G_5+1", "2·G_3"});
    CHECK_THROWS_AS(table_dispatch(0), InvalidArgument);
}

TEST_CASE("every builder signature squares to (n-1)I") {
    std::vector<CMat> all;
    for (std::uint64_t q : {3, 5, 7, 9, 11, 13}) {
        all.push_back(paley_conference(q).signature());
        all.push_back(double_paley_signature(q, 1));
        all.push_back(double_paley_plus_signature(q, 1));
    }
    all.push_back(family_3x6(I_unit));
    all.push_back(zauner_2x4_signature());
    for (const auto& s : all) CHECK(square_residual(s) <= 1e-9 * static_cast<double>(s.rows()));
}
