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

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "etfforge/errors.hpp"
#include "etfforge/frames.hpp"
#include "etfforge/galois.hpp"
#include "etfforge/linalg.hpp"

namespace etfforge {

using IntMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

inline CMat to_complex(const IntMat& a) { return a.cast<double>().cast<cplx>(); }

/// Strongly regular graph with conference parameters.
struct ConferenceGraph {
    int v = 0;
    IntMat A;

    IntMat complement() const {
        return IntMat::Ones(v, v) - IntMat::Identity(v, v) - A;
    }
};

/// 4A^2, 4AB and 4B^2 expanded in the basis {I, A, B}.
inline bool structure_constants_hold(const ConferenceGraph& g) {
    const long long v = g.v;
    const IntMat I = IntMat::Identity(v, v);
    const IntMat& A = g.A;
    const IntMat B = g.complement();
    const bool a2 = IntMat(4 * A * A) == IntMat((2 * v - 2) * I + (v - 5) * A + (v - 1) * B);
    const bool ab = IntMat(4 * A * B) == IntMat((v - 1) * (A + B));
    const bool ba = IntMat(4 * B * A) == IntMat((v - 1) * (A + B));
    const bool b2 = IntMat(4 * B * B) == IntMat((2 * v - 2) * I + (v - 1) * A + (v - 5) * B);
    return a2 && ab && ba && b2;
}

inline void verify_conference_graph(const ConferenceGraph& g) {
    const long long v = g.v;
    if (v < 5 || v % 4 != 1) throw InvalidArgument("conference graph needs v = 1 mod 4, v >= 5");
    if (g.A.rows() != v || g.A.cols() != v) throw InvalidArgument("conference graph adjacency has wrong shape");
    for (long long i = 0; i < v; ++i)
        for (long long j = 0; j < v; ++j) {
            const long long a = g.A(i, j);
            if ((a != 0 && a != 1) || a != g.A(j, i) || (i == j && a != 0))
                throw InvalidArgument("adjacency must be symmetric 0/1 with zero diagonal");
        }
    const long long k = (v - 1) / 2, lambda = (v - 5) / 4, mu = (v - 1) / 4;
    const IntMat I = IntMat::Identity(v, v);
    const IntMat J = IntMat::Ones(v, v);
    if (IntMat(g.A * g.A) != IntMat(k * I + lambda * g.A + mu * (J - I - g.A)))
        throw InvalidArgument("adjacency is not strongly regular with conference parameters");
}

struct ConferenceMatrix {
    enum class Symmetry { symmetric, skew };
    int n = 0;
    IntMat C;
    Symmetry symmetry = Symmetry::symmetric;

    bool valid() const {
        if (C.rows() != n || C.cols() != n) return false;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const long long c = C(i, j);
                if (i == j ? c != 0 : (c != 1 && c != -1)) return false;
                const long long t = C(j, i);
                if (symmetry == Symmetry::symmetric ? t != c : t != -c) return false;
            }
        return IntMat(C.transpose() * C) == IntMat(static_cast<long long>(n - 1) * IntMat::Identity(n, n));
    }

    /// C itself when symmetric, iC when skew.
    CMat signature() const {
        CMat s = to_complex(C);
        return symmetry == Symmetry::symmetric ? s : CMat(I_unit * s);
    }
};

inline std::shared_ptr<const GaloisField> odd_field(std::uint64_t q, const char* who) {
    if (q % 2 == 0 || !prime_power(q)) throw InvalidArgument(std::string(who) + ": q must be an odd prime power");
    if (q > 10000) throw InvalidArgument(std::string(who) + ": q above 10^4");
    return make_field_q(q);
}

inline ConferenceGraph paley_graph(std::uint64_t q) {
    auto f = odd_field(q, "paley_graph");
    if (q % 4 != 1) throw InvalidArgument("paley_graph: q must be 1 mod 4");
    ConferenceGraph g;
    g.v = static_cast<int>(q);
    g.A = IntMat::Zero(g.v, g.v);
    for (FieldElement a = 0; a < q; ++a)
        for (FieldElement b = 0; b < q; ++b)
            if (f->chi(f->sub(a, b)) == 1) g.A(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 1;
    verify_conference_graph(g);
    return g;
}

/// Bordered Paley conference matrix; core entry (a, b) is chi(b - a).
inline ConferenceMatrix paley_conference(std::uint64_t q) {
    auto f = odd_field(q, "paley_conference");
    ConferenceMatrix c;
    c.n = static_cast<int>(q + 1);
    c.symmetry = q % 4 == 1 ? ConferenceMatrix::Symmetry::symmetric : ConferenceMatrix::Symmetry::skew;
    c.C = IntMat::Zero(c.n, c.n);
    for (int j = 1; j < c.n; ++j) {
        c.C(0, j) = 1;
        c.C(j, 0) = c.symmetry == ConferenceMatrix::Symmetry::symmetric ? 1 : -1;
    }
    for (FieldElement a = 0; a < q; ++a)
        for (FieldElement b = 0; b < q; ++b)
            c.C(static_cast<Eigen::Index>(a) + 1, static_cast<Eigen::Index>(b) + 1) = f->chi(f->sub(b, a));
    if (!c.valid()) throw NumericFailure("paley_conference: conference identity failed");
    return c;
}

using FieldPair = std::pair<FieldElement, FieldElement>;

/// C_ij = chi(det[t_i t_j]) over GF(q)^2.
inline ConferenceMatrix symplectic_conference(std::uint64_t q, const std::vector<FieldPair>& reps) {
    auto f = odd_field(q, "symplectic_conference");
    if (reps.size() != q + 1) throw InvalidArgument("symplectic_conference: need q+1 representatives");
    ConferenceMatrix c;
    c.n = static_cast<int>(q + 1);
    c.symmetry = q % 4 == 1 ? ConferenceMatrix::Symmetry::symmetric : ConferenceMatrix::Symmetry::skew;
    c.C = IntMat::Zero(c.n, c.n);
    for (int i = 0; i < c.n; ++i) {
        const auto& [a, b] = reps[static_cast<size_t>(i)];
        if (a == 0 && b == 0) throw InvalidArgument("symplectic_conference: zero representative");
        for (int j = 0; j < c.n; ++j) {
            const auto& [cc, dd] = reps[static_cast<size_t>(j)];
            const FieldElement det = f->sub(f->mul(a, dd), f->mul(cc, b));
            if (i != j && det == 0)
                throw InvalidArgument("symplectic_conference: representatives " + std::to_string(i) + " and " +
                                      std::to_string(j) + " span the same line");
            c.C(i, j) = f->chi(det);
        }
    }
    if (!c.valid()) throw NumericFailure("symplectic_conference: conference identity failed");
    return c;
}

/// t_inf = (1,0) followed by t_a = (a,1) for a in code order.
inline std::vector<FieldPair> standard_line_representatives(std::uint64_t q) {
    std::vector<FieldPair> reps;
    reps.emplace_back(1, 0);
    for (FieldElement a = 0; a < q; ++a) reps.emplace_back(a, 1);
    return reps;
}

/// Maps the symplectic matrix built on standard_line_representatives onto the
/// bordered Paley form: identity for q = 1 mod 4, C -> -DCD with
/// D = diag(-1, 1, ..., 1) for q = 3 mod 4.
inline IntMat symplectic_to_paley_reindex(const IntMat& c, std::uint64_t q) {
    if (q % 4 == 1) return c;
    IntMat out = -c;
    out.row(0) *= -1;
    out.col(0) *= -1;
    return out;
}

/// Doubling of a d x n ETF signature with n = 2d + k, k in {-1, 0, 1}.
inline CMat double_signature(const CMat& s, Eigen::Index d, Eigen::Index n, int epsilon) {
    if (epsilon != 1 && epsilon != -1) throw InvalidArgument("double_signature: epsilon must be +1 or -1");
    if (s.rows() != n || s.cols() != n) throw InvalidArgument("double_signature: signature must be n x n");
    const Eigen::Index k = n - 2 * d;
    if (k < -1 || k > 1) throw InvalidArgument("double_signature: n - 2d must lie in {-1, 0, 1}");
    gram_of_signature(s, d);
    const double nn = static_cast<double>(n), dd = static_cast<double>(d);
    const double c = static_cast<double>(k) * std::sqrt((nn - 1.0) / (dd * (nn - dd)));
    const cplx beta(-c, epsilon * std::sqrt(std::max(0.0, 1.0 - c * c)));
    const CMat I = CMat::Identity(n, n);
    CMat out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = s;
    out.topRightCorner(n, n) = s + beta * I;
    out.bottomLeftCorner(n, n) = s + std::conj(beta) * I;
    out.bottomRightCorner(n, n) = -s;
    const double res = max_abs(out * out - (2.0 * nn - 1.0) * CMat::Identity(2 * n, 2 * n));
    if (res > 1e-9) throw NotValidSignature("double_signature: doubled matrix fails S^2 = (2n-1)I", res);
    return out;
}

/// beta = eps x + i y from the conference-graph doubling.
inline cplx conference_doubling_beta(int v, int epsilon) {
    const double vv = v;
    const double x = (-1.0 + std::sqrt(2.0 * vv - 1.0)) / (vv - 1.0);
    const double y = std::sqrt(1.0 - x * x);
    return {epsilon * x, y};
}

inline CMat double_conference_graph(const ConferenceGraph& g, int epsilon) {
    if (epsilon != 1 && epsilon != -1) throw InvalidArgument("double_conference_graph: epsilon must be +1 or -1");
    verify_conference_graph(g);
    const int v = g.v;
    const cplx beta = conference_doubling_beta(v, epsilon);
    const CMat I = CMat::Identity(v, v);
    const CMat A = to_complex(g.A);
    const CMat B = to_complex(g.complement());
    const double e = epsilon;
    CMat s(2 * v, 2 * v);
    s.topLeftCorner(v, v) = A - B;
    s.topRightCorner(v, v) = e * I + beta * A + std::conj(beta) * B;
    s.bottomLeftCorner(v, v) = e * I + std::conj(beta) * A + beta * B;
    s.bottomRightCorner(v, v) = B - A;
    const double res = max_abs(s * s - (2.0 * v - 1.0) * CMat::Identity(2 * v, 2 * v));
    if (res > 1e-9) throw NotValidSignature("double_conference_graph: S^2 != (2v-1)I", res);
    return s;
}

/// Coefficients (a, b, c, d, e, f) of [aI+bA+cB | dI+eA+fB].
inline std::array<cplx, 6> doubled_frame_coefficients(int v, int epsilon) {
    const double vv = v;
    const double gamma = 1.0 / std::sqrt(2.0 * vv - 1.0);
    const double k = (vv - 1.0) / 2.0;
    const double r = (-1.0 + std::sqrt(vv)) / 2.0;
    const double s = (-1.0 - std::sqrt(vv)) / 2.0;
    const cplx beta = conference_doubling_beta(v, epsilon);
    const double e = epsilon;
    const double pp = std::sqrt(1.0 + gamma * (r - s));
    const double pm = std::sqrt(1.0 - gamma * (r - s));
    const cplx n1 = (e + beta * r + std::conj(beta) * s) / pp;
    const cplx n2 = (e + beta * s + std::conj(beta) * r) / pm;
    const cplx base = e + 2.0 * k * beta.real();
    return {cplx((1.0 + k * pp + k * pm) / vv), cplx((1.0 + r * pp + s * pm) / vv),
            cplx((1.0 + s * pp + r * pm) / vv),  gamma / vv * (base + k * n1 + k * n2),
            gamma / vv * (base + r * n1 + s * n2), gamma / vv * (base + s * n1 + r * n2)};
}

inline bool is_circulant(const IntMat& a) {
    const Eigen::Index m = a.rows();
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            if (a(i, j) != a((i - j + m) % m, 0)) return false;
    return true;
}

struct DoubledFrame {
    std::array<cplx, 6> coeffs{};
    std::optional<CirculantPair> pair;  // set when the graph is circulant in its vertex order
    CMat frame;                         // v x 2v, always filled
};

inline DoubledFrame synthesize_doubled_frame(const ConferenceGraph& g, int epsilon) {
    if (epsilon != 1 && epsilon != -1) throw InvalidArgument("synthesize_doubled_frame: epsilon must be +1 or -1");
    verify_conference_graph(g);
    const int v = g.v;
    DoubledFrame out;
    out.coeffs = doubled_frame_coefficients(v, epsilon);
    const auto& c = out.coeffs;
    const CMat I = CMat::Identity(v, v);
    const CMat A = to_complex(g.A);
    const CMat B = to_complex(g.complement());
    out.frame.resize(v, 2 * v);
    out.frame.leftCols(v) = c[0] * I + c[1] * A + c[2] * B;
    out.frame.rightCols(v) = c[3] * I + c[4] * A + c[5] * B;
    if (is_circulant(g.A)) {
        CirculantPair p;
        p.d = v;
        p.x = out.frame.col(0);
        p.y = out.frame.col(v);
        out.pair = p;
    }
    return out;
}

/// Renes-Strohmer d x q ETF (q = 2d - 1) and its (d-1) x q Naimark complement.
struct RenesStrohmer {
    int q = 0;
    int d = 0;
    CMat gram;                  // unit diagonal, rank d
    CMat signature;             // gram = I + welch_gamma(d, q) signature
    CMat naimark_gram;          // rank d - 1
    CMat naimark_signature;     // -signature
};

inline RenesStrohmer renes_strohmer_gram(std::uint64_t q) {
    if (q % 4 != 3) throw InvalidArgument("renes_strohmer_gram: q must be 3 mod 4");
    const ConferenceMatrix c = paley_conference(q);
    const int n = static_cast<int>(q);
    const double sq = std::sqrt(static_cast<double>(q));
    const CMat t = to_complex(c.C.bottomRightCorner(n, n));
    CMat m = I_unit * t + CMat::Constant(n, n, cplx(1.0 / sq)) + sq * CMat::Identity(n, n);
    RenesStrohmer rs;
    rs.q = n;
    rs.d = (n + 1) / 2;
    m /= (sq + 1.0 / sq);
    auto [gamma, s] = signature_of_gram(m);
    (void)gamma;
    rs.signature = s;
    rs.gram = gram_of_signature(s, rs.d);
    rs.naimark_signature = naimark_complement_signature(s);
    rs.naimark_gram = gram_of_signature(rs.naimark_signature, rs.d - 1);
    return rs;
}

/// 2 G_q signature (q x 2q ETF).
inline CMat double_paley_signature(std::uint64_t q, int epsilon) {
    if (q % 4 == 1) return double_conference_graph(paley_graph(q), epsilon);
    const RenesStrohmer rs = renes_strohmer_gram(q);
    return double_signature(rs.naimark_signature, rs.d - 1, rs.q, epsilon);
}

/// 2 (G_q + 1) signature ((q+1) x 2(q+1) ETF).
inline CMat double_paley_plus_signature(std::uint64_t q, int epsilon) {
    const ConferenceMatrix c = paley_conference(q);
    return double_signature(c.signature(), (c.n) / 2, c.n, epsilon);
}

/// Every nonzero residue mod v arises exactly once as a difference of D.
inline void verify_planar_difference_set(int m, const std::vector<int>& D) {
    const int v = m * m + m + 1;
    if (static_cast<int>(D.size()) != m + 1) throw InvalidArgument("difference set must have m+1 elements");
    std::vector<int> count(static_cast<size_t>(v), 0);
    for (int a : D)
        for (int b : D)
            if (a != b) ++count[static_cast<size_t>(((a - b) % v + v) % v)];
    for (int r = 1; r < v; ++r)
        if (count[static_cast<size_t>(r)] != 1)
            throw InvalidArgument("difference set is not planar: residue " + std::to_string(r) + " occurs " +
                                  std::to_string(count[static_cast<size_t>(r)]) + " times");
}

/// Least planar difference set mod m^2+m+1 containing 0 and 1, if any.
inline std::optional<std::vector<int>> find_planar_difference_set(int m) {
    const int v = m * m + m + 1, k = m + 1;
    std::vector<int> set{0, 1};
    std::vector<char> used(static_cast<size_t>(v), 0);
    used[1] = used[static_cast<size_t>(v - 1)] = 1;
    std::vector<int> added;
    auto rec = [&](auto&& self, int next) -> bool {
        if (static_cast<int>(set.size()) == k) return true;
        for (int c = next; c < v; ++c) {
            std::vector<int> diffs;
            bool ok = true;
            for (int a : set) {
                for (int x : {((c - a) % v + v) % v, ((a - c) % v + v) % v}) {
                    if (used[static_cast<size_t>(x)]) {
                        ok = false;
                        break;
                    }
                    used[static_cast<size_t>(x)] = 1;
                    diffs.push_back(x);
                }
                if (!ok) break;
            }
            if (!ok) {
                for (int x : diffs) used[static_cast<size_t>(x)] = 0;
                continue;
            }
            set.push_back(c);
            if (self(self, c + 1)) return true;
            set.pop_back();
            for (int x : diffs) used[static_cast<size_t>(x)] = 0;
        }
        return false;
    };
    if (k == 2) return set;
    if (rec(rec, 2)) return set;
    return std::nullopt;
}

inline CMat sylvester_hadamard(int n) {
    if (n < 1 || (n & (n - 1)) != 0) throw InvalidArgument("sylvester_hadamard: n must be a power of two");
    CMat h = CMat::Ones(1, 1);
    while (h.rows() < n) {
        const Eigen::Index r = h.rows();
        CMat nh(2 * r, 2 * r);
        nh << h, h, h, -h;
        h = nh;
    }
    return h;
}

/// v x (k+1)v Steiner circulant ETF; H rows follow D's order, then the point at infinity.
inline CMat steiner_circulant(int m, const CMat& H, const std::vector<int>& D) {
    if (m < 1) throw InvalidArgument("steiner_circulant: m must be positive");
    verify_planar_difference_set(m, D);
    const int v = m * m + m + 1, k = m + 1;
    if (H.rows() != k + 1 || H.cols() != k + 1) throw InvalidArgument("steiner_circulant: H must be (k+1) x (k+1)");
    for (Eigen::Index i = 0; i < H.rows(); ++i)
        for (Eigen::Index j = 0; j < H.cols(); ++j)
            if (std::abs(std::abs(H(i, j)) - 1.0) > 1e-10)
                throw InvalidArgument("steiner_circulant: H entries must be unimodular");
    if (max_abs(H.adjoint() * H - static_cast<double>(k + 1) * CMat::Identity(k + 1, k + 1)) > 1e-10)
        throw InvalidArgument("steiner_circulant: H^*H != (k+1)I");
    std::vector<CVec> gens;
    const double s = 1.0 / std::sqrt(static_cast<double>(k));
    for (int i = 0; i <= k; ++i) {
        CVec phi = CVec::Zero(v);
        for (int p = 0; p < k; ++p) phi(((D[static_cast<size_t>(p)] % v) + v) % v) = s * H(p, i);
        gens.push_back(phi);
    }
    return assemble_circulant(gens);
}

inline CMat family_3x6(cplx alpha) {
    if (std::abs(std::abs(alpha) - 1.0) > 1e-12) throw InvalidArgument("family_3x6: alpha must be unimodular");
    const cplx a = alpha, b = std::conj(alpha), o(1.0), z(0.0);
    CMat s(6, 6);
    s << z, a, b, o, a, -b,
         b, z, a, -b, o, a,
         a, b, z, a, -b, o,
         o, -a, b, z, -a, -b,
         b, o, -a, -b, z, -a,
         -a, b, o, -a, -b, z;
    return s;
}

inline CMat zauner_2x4_signature() {
    const cplx i = I_unit, o(1.0), z(0.0);
    CMat s(4, 4);
    s << z, o, o, -i,
         o, z, -i, o,
         o, i, z, -o,
         i, o, -o, z;
    return s;
}

/// Construction labels available for a d x 2d ETF among the implemented families.
inline std::vector<std::string> table_dispatch(int d) {
    if (d < 1 || d > 1000) throw InvalidArgument("table_dispatch: d must lie in [1, 1000]");
    std::vector<std::string> out;
    const auto q1 = static_cast<std::uint64_t>(2 * d - 1);
    if (q1 >= 3 && is_odd_prime_power(q1)) out.push_back("G_" + std::to_string(q1) + "+1");
    if (d >= 3 && is_odd_prime_power(static_cast<std::uint64_t>(d))) out.push_back("2·G_" + std::to_string(d));
    if (d >= 4 && is_odd_prime_power(static_cast<std::uint64_t>(d - 1)))
        out.push_back("2·(G_" + std::to_string(d - 1) + "+1)");
    return out;
}

}  // namespace etfforge
