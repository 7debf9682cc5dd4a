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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "etfforge/errors.hpp"
#include "etfforge/interval.hpp"
#include "etfforge/linalg.hpp"
#include "etfforge/parallel.hpp"
#include "etfforge/solver.hpp"

namespace etfforge {

struct Certificate {
    int d = 0;
    std::vector<double> x0;
    double delta = 0.0;
    double epsilon = 0.0;
    double bound_ST_minus_I = 0.0;  // upper
    double bound_T_norm = 0.0;      // upper
    double bound_f_x0 = 0.0;        // upper
    double f_abs_bound = 0.0;
    double lhs_upper = 0.0;
    double rhs_lower = 0.0;
    bool verified = false;
    int kernel_dim = 0;
    std::string failure;  // empty, "rank", "infeasible", "solve"
    double gap = 0.0;     // rhs_lower - lhs_upper at the chosen or best epsilon
    std::uint64_t seed = 0;
};

inline std::vector<Interval> f_eval_interval(const std::vector<Interval>& z, int d) { return residual_z(z, d); }

inline std::vector<Interval> lift(const std::vector<double>& x) {
    std::vector<Interval> z;
    z.reserve(x.size());
    for (double v : x) z.emplace_back(v);
    return z;
}

/// Column j encloses (f(x0 + delta e_j) - f(x0)) / delta for f mapping interval vectors to interval vectors.
template <typename F>
IntervalMatrix secant_enclosure(F&& f, const std::vector<double>& x0, double delta) {
    if (!(delta > 0.0)) throw InvalidArgument("secant_jacobian: delta must be positive");
    const auto z0 = lift(x0);
    const std::vector<Interval> f0 = f(z0);
    const Interval dl(delta);
    const auto n = static_cast<Eigen::Index>(f0.size());
    const auto m = static_cast<Eigen::Index>(x0.size());
    IntervalMatrix s(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        auto z = z0;
        z[static_cast<size_t>(j)] = z0[static_cast<size_t>(j)] + dl;
        const std::vector<Interval> f1 = f(z);
        for (Eigen::Index i = 0; i < n; ++i)
            s(i, j) = (f1[static_cast<size_t>(i)] - f0[static_cast<size_t>(i)]) / dl;
    }
    return s;
}

inline IntervalMatrix secant_jacobian(const std::vector<double>& x0, double delta, int d) {
    const ResidualSystem sys(d);
    if (static_cast<int>(x0.size()) != sys.variables()) throw InvalidArgument("secant_jacobian: length != 4d + 1");
    return secant_enclosure([d](const std::vector<Interval>& z) { return f_eval_interval(z, d); }, x0, delta);
}

/// Polynomial in real variables, for coefficient-norm audits of the residual map.
struct Poly {
    std::map<std::vector<int>, double> terms;  // sorted variable multiset -> coefficient

    Poly() = default;
    Poly(double c) {  // NOLINT: constants lift implicitly, as for Interval
        if (c != 0.0) terms[{}] = c;
    }
    static Poly var(int i) {
        Poly p;
        p.terms[{i}] = 1.0;
        return p;
    }

    double coefficient_norm() const {
        double s = 0.0;
        for (const auto& [m, c] : terms) s += std::abs(c);
        return s;
    }

    int degree() const {
        int k = 0;
        for (const auto& [m, c] : terms) k = std::max(k, static_cast<int>(m.size()));
        return k;
    }
};

inline Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [m, c] : b.terms)
        if ((r.terms[m] += c) == 0.0) r.terms.erase(m);
    return r;
}

inline Poly operator-(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [m, c] : b.terms)
        if ((r.terms[m] -= c) == 0.0) r.terms.erase(m);
    return r;
}

inline Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            std::vector<int> m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            std::sort(m.begin(), m.end());
            if ((r.terms[m] += ca * cb) == 0.0) r.terms.erase(m);
        }
    return r;
}

inline Poly sqr(const Poly& a) { return a * a; }

/// max_i of the coefficient 1-norm of component i, expanded symbolically.
inline double symbolic_f_abs(int d) {
    const ResidualSystem sys(d);
    std::vector<Poly> z;
    for (int i = 0; i < sys.variables(); ++i) z.push_back(Poly::var(i));
    double best = 0.0;
    for (const auto& p : residual_z(z, d)) best = std::max(best, p.coefficient_norm());
    return best;
}

inline double f_abs_bound(int d) { return 16.0 * d * d; }

struct ContractionSides {
    Interval lhs;
    Interval rhs;
};

/// A + (delta~/2 + eps~) |f| D(D-1) B_T  versus  1 - B_T C0 / eps, with D = 4.
inline ContractionSides contraction_sides(double a, double bt, double c0, double x0_norm, double delta, double eps, int d) {
    const Interval one(1.0);
    const auto widen = [&](double r) {
        const Interval m = iv_max(one, Interval(x0_norm) + Interval(r));
        return Interval(r) * sqr(m);
    };
    const Interval dt = widen(delta);
    const Interval et = widen(eps);
    const Interval k = Interval(f_abs_bound(d)) * Interval(12.0) * Interval(bt);
    ContractionSides s;
    s.lhs = Interval(a) + (Interval(0.5) * dt + et) * k;
    s.rhs = one - Interval(bt) * Interval(c0) / Interval(eps);
    return s;
}

namespace detail {
inline bool strictly_below(double lhs_upper, double rhs_lower) {
    // holds with one ulp of extra slack on each side
    return std::nextafter(lhs_upper, INFINITY) < std::nextafter(rhs_lower, -INFINITY);
}
}  // namespace detail

/// Newton-Kantorovich existence test at the 2-circulant point p with w = 1/2.
inline Certificate certify(const CirculantPair& p, double delta = 1e-10) {
    const int d = p.d;
    const ResidualSystem sys(d);
    Certificate cert;
    cert.d = d;
    cert.delta = delta;
    cert.x0 = pack(p, 0.5);
    cert.kernel_dim = sys.kernel_dim();
    cert.f_abs_bound = f_abs_bound(d);
    double x0_norm = 0.0;
    for (double v : cert.x0) x0_norm = std::max(x0_norm, std::abs(v));
    if (!(x0_norm < 1.0)) throw InvalidArgument("certify: need ||x0||_inf < 1");

    const IntervalMatrix s = secant_jacobian(cert.x0, delta, d);
    RMat t;
    try {
        t = pseudoinverse(s.midpoint());
    } catch (const RankDeficiency& e) {
        throw CertificationFailed(std::string("certify: secant Jacobian is rank deficient: ") + e.what(),
                                  CertificationFailed::Reason::rank, -INFINITY);
    }
    IntervalMatrix st = iv_matmul(s, t);
    for (Eigen::Index i = 0; i < st.rows; ++i) st(i, i) = st(i, i) - Interval(1.0);
    cert.bound_ST_minus_I = iv_norm_inf(st).hi;
    cert.bound_T_norm = iv_norm_inf(IntervalMatrix::lift(t)).hi;
    Interval c0(0.0);
    for (const auto& v : f_eval_interval(lift(cert.x0), d)) c0 = iv_max(c0, iv_abs(v));
    cert.bound_f_x0 = c0.hi;

    const double a = cert.bound_ST_minus_I, bt = cert.bound_T_norm;
    const double room = 1.0 - x0_norm;
    // K eps^2 + (A + delta K / 2 - 1) eps + B_T C0 with K = 192 d^2 B_T
    const double kq = 12.0 * cert.f_abs_bound * bt;
    const double bq = a + 0.5 * delta * kq - 1.0;
    const double cq = bt * cert.bound_f_x0;
    std::vector<double> cand;
    auto grid = [&](double lo, double hi, int n) {
        if (!(lo > 0.0) || !(hi > lo)) return;
        const double r = std::pow(hi / lo, 1.0 / (n - 1));
        for (int i = 0; i < n; ++i) cand.push_back(std::min(hi, lo * std::pow(r, i)));
    };
    const double disc = bq * bq - 4.0 * kq * cq;
    if (disc > 0.0 && bq < 0.0) {
        const double sq = std::sqrt(disc);
        const double r1 = 2.0 * cq / (-bq + sq);  // stable small root
        const double r2 = (-bq + sq) / (2.0 * kq);
        grid(std::max(r1, std::numeric_limits<double>::min()), std::min(r2, room), 32);
        const double vertex = -bq / (2.0 * kq);
        if (vertex > 0.0 && vertex <= room) cand.push_back(vertex);
    }
    grid(std::max(cq, 1e-300), room, 32);
    std::sort(cand.begin(), cand.end());

    double best_gap = -INFINITY;
    for (double eps : cand) {
        if (!(eps > 0.0) || eps > room) continue;
        const auto sides = contraction_sides(a, bt, cert.bound_f_x0, x0_norm, delta, eps, d);
        const double gap = sides.rhs.lo - sides.lhs.hi;
        if (detail::strictly_below(sides.lhs.hi, sides.rhs.lo)) {
            cert.epsilon = eps;
            cert.lhs_upper = sides.lhs.hi;
            cert.rhs_lower = sides.rhs.lo;
            cert.gap = gap;
            cert.verified = true;
            return cert;
        }
        if (gap > best_gap) {
            best_gap = gap;
            cert.epsilon = eps;
            cert.lhs_upper = sides.lhs.hi;
            cert.rhs_lower = sides.rhs.lo;
        }
    }
    throw CertificationFailed("certify: no feasible epsilon", CertificationFailed::Reason::infeasible, best_gap);
}

/// certify without throwing: failures are recorded in the certificate.
inline Certificate certify_or_record(const CirculantPair& p, double delta) {
    Certificate cert;
    try {
        return certify(p, delta);
    } catch (const CertificationFailed& e) {
        cert.d = p.d;
        cert.delta = delta;
        cert.x0 = pack(p, 0.5);
        cert.kernel_dim = ResidualSystem(p.d).kernel_dim();
        cert.f_abs_bound = f_abs_bound(p.d);
        cert.failure = e.reason == CertificationFailed::Reason::rank ? "rank" : "infeasible";
        cert.gap = e.gap;
    }
    return cert;
}

struct SeedPolicy {
    std::uint64_t base = 1;
    int attempts = 3;
};

/// Solve then certify every d in [d_lo, d_hi], retrying seeds; results in d order.
inline std::vector<Certificate> certify_range(int d_lo, int d_hi, SeedPolicy seeds, int jobs, double delta = 1e-10) {
    if (d_lo < 2) throw InvalidArgument("certify_range: d_lo must be at least 2");
    if (d_lo > d_hi) return {};
    const int n = d_hi - d_lo + 1;
    std::vector<Certificate> out(static_cast<size_t>(n));
    parallel_for_index(n, jobs, [&](int i) {
        const int d = d_lo + i;
        Certificate last;
        last.d = d;
        last.kernel_dim = ResidualSystem(d).kernel_dim();
        last.failure = "solve";
        for (int a = 0; a < seeds.attempts; ++a) {
            const std::uint64_t seed = seeds.base + static_cast<std::uint64_t>(a);
            const SolveResult r = solve(d, seed);
            if (!r.converged) continue;
            last = certify_or_record(r.pair, delta);
            last.seed = seed;
            if (last.verified) break;
        }
        out[static_cast<size_t>(i)] = last;
    });
    return out;
}

}  // namespace etfforge
