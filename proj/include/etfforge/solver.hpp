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
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "etfforge/errors.hpp"
#include "etfforge/frames.hpp"
#include "etfforge/interval.hpp"
#include "etfforge/linalg.hpp"
#include "etfforge/parallel.hpp"

namespace etfforge {

/// Layout of the real constraint system for 2-circulant d x 2d ETFs.
/// Variables z = (Re x, Im x, Re y, Im y, w), length 4d + 1.
/// Rows: ||x||^2 - 1, ||y||^2 - 1; tightness <x,T^j x> + <y,T^j y> - 4w [j=0]
/// (real part at j = 0 and j = d/2, real and imaginary parts for 0 < j < d/2);
/// |<x,T^j x>|^2 - |<x,y>|^2 for 1 <= j <= d/2; |<x,T^j y>|^2 - |<x,y>|^2 for 1 <= j < d.
struct ResidualSystem {
    int d = 0;

    explicit ResidualSystem(int d_) : d(d_) {
        if (d < 1) throw InvalidArgument("ResidualSystem: d must be positive");
    }

    int variables() const { return 4 * d + 1; }
    int rows() const { return 2 * d + d / 2 + 1; }
    int tight_begin() const { return 2; }
    int auto_begin() const { return 2 + d; }
    int cross_begin() const { return 2 + d + d / 2; }
    int kernel_dim() const { return variables() - rows(); }
};

struct SolveResult {
    CirculantPair pair;
    double residual_inf = INFINITY;
    int iterations = 0;
    std::uint64_t seed = 0;
    bool converged = false;
};

inline std::vector<double> pack(const CirculantPair& p, double w) {
    const int d = p.d;
    if (p.x.size() != d || p.y.size() != d) throw InvalidArgument("pack: generator length != d");
    std::vector<double> z(static_cast<size_t>(4 * d + 1));
    for (int k = 0; k < d; ++k) {
        z[static_cast<size_t>(k)] = p.x(k).real();
        z[static_cast<size_t>(d + k)] = p.x(k).imag();
        z[static_cast<size_t>(2 * d + k)] = p.y(k).real();
        z[static_cast<size_t>(3 * d + k)] = p.y(k).imag();
    }
    z[static_cast<size_t>(4 * d)] = w;
    return z;
}

inline CirculantPair unpack(const std::vector<double>& z, int d) {
    if (static_cast<int>(z.size()) != 4 * d + 1) throw InvalidArgument("unpack: length != 4d + 1");
    CirculantPair p{d, CVec(d), CVec(d)};
    for (int k = 0; k < d; ++k) {
        p.x(k) = cplx(z[static_cast<size_t>(k)], z[static_cast<size_t>(d + k)]);
        p.y(k) = cplx(z[static_cast<size_t>(2 * d + k)], z[static_cast<size_t>(3 * d + k)]);
    }
    return p;
}

namespace detail {
/// Re and Im of <u, T^j v> = sum_k conj(u_k) v_{k-j}; u at offsets (ua, ub), v at (va, vb).
template <typename S>
void shifted_inner(const std::vector<S>& z, int d, int ua, int ub, int va, int vb, int j, S& re, S& im) {
    re = S(0.0);
    im = S(0.0);
    for (int k = 0; k < d; ++k) {
        const int l = ((k - j) % d + d) % d;
        const S& a = z[static_cast<size_t>(ua + k)];
        const S& b = z[static_cast<size_t>(ub + k)];
        const S& c = z[static_cast<size_t>(va + l)];
        const S& e = z[static_cast<size_t>(vb + l)];
        re = re + (a * c + b * e);
        im = im + (a * e - b * c);
    }
}
}  // namespace detail

/// f(z) in the ResidualSystem layout; S is double or Interval.
template <typename S>
std::vector<S> residual_z(const std::vector<S>& z, int d) {
    const ResidualSystem sys(d);
    if (static_cast<int>(z.size()) != sys.variables()) throw InvalidArgument("residual: length != 4d + 1");
    const int xa = 0, xb = d, ya = 2 * d, yb = 3 * d;
    const S& w = z[static_cast<size_t>(4 * d)];
    std::vector<S> f;
    f.reserve(static_cast<size_t>(sys.rows()));
    S re, im, re2, im2;
    detail::shifted_inner(z, d, xa, xb, xa, xb, 0, re, im);
    const S nx = re;
    detail::shifted_inner(z, d, ya, yb, ya, yb, 0, re, im);
    const S ny = re;
    f.push_back(nx - S(1.0));
    f.push_back(ny - S(1.0));
    f.push_back(nx + ny - S(4.0) * w);
    for (int j = 1; 2 * j <= d; ++j) {
        detail::shifted_inner(z, d, xa, xb, xa, xb, j, re, im);
        detail::shifted_inner(z, d, ya, yb, ya, yb, j, re2, im2);
        f.push_back(re + re2);
        if (2 * j < d) f.push_back(im + im2);
    }
    detail::shifted_inner(z, d, xa, xb, ya, yb, 0, re, im);
    const S ref = sqr(re) + sqr(im);
    for (int j = 1; 2 * j <= d; ++j) {
        detail::shifted_inner(z, d, xa, xb, xa, xb, j, re, im);
        f.push_back(sqr(re) + sqr(im) - ref);
    }
    for (int j = 1; j < d; ++j) {
        detail::shifted_inner(z, d, xa, xb, ya, yb, j, re, im);
        f.push_back(sqr(re) + sqr(im) - ref);
    }
    return f;
}

inline RVec residual(const CirculantPair& p, double w) {
    const auto f = residual_z(pack(p, w), p.d);
    return Eigen::Map<const RVec>(f.data(), static_cast<Eigen::Index>(f.size()));
}

namespace detail {
/// Adds s * grad Re<u,T^j v> into re_row and s * grad Im<u,T^j v> into im_row.
inline void shifted_inner_grad(const std::vector<double>& z, int d, int ua, int ub, int va, int vb, int j, double sr,
                               double si, RMat& jac, Eigen::Index row) {
    for (int k = 0; k < d; ++k) {
        const int l = ((k - j) % d + d) % d;
        const double a = z[static_cast<size_t>(ua + k)], b = z[static_cast<size_t>(ub + k)];
        const double c = z[static_cast<size_t>(va + l)], e = z[static_cast<size_t>(vb + l)];
        jac(row, ua + k) += sr * c + si * e;
        jac(row, ub + k) += sr * e - si * c;
        jac(row, va + l) += sr * a - si * b;
        jac(row, vb + l) += sr * b + si * a;
    }
}
}  // namespace detail

/// Closed-form Jacobian of residual_z with respect to (Re x, Im x, Re y, Im y, w).
inline RMat analytic_jacobian_z(const std::vector<double>& z, int d) {
    const ResidualSystem sys(d);
    if (static_cast<int>(z.size()) != sys.variables()) throw InvalidArgument("jacobian: length != 4d + 1");
    const int xa = 0, xb = d, ya = 2 * d, yb = 3 * d;
    RMat jac = RMat::Zero(sys.rows(), sys.variables());
    Eigen::Index row = 0;
    detail::shifted_inner_grad(z, d, xa, xb, xa, xb, 0, 1.0, 0.0, jac, row++);
    detail::shifted_inner_grad(z, d, ya, yb, ya, yb, 0, 1.0, 0.0, jac, row++);
    detail::shifted_inner_grad(z, d, xa, xb, xa, xb, 0, 1.0, 0.0, jac, row);
    detail::shifted_inner_grad(z, d, ya, yb, ya, yb, 0, 1.0, 0.0, jac, row);
    jac(row++, 4 * d) = -4.0;
    for (int j = 1; 2 * j <= d; ++j) {
        detail::shifted_inner_grad(z, d, xa, xb, xa, xb, j, 1.0, 0.0, jac, row);
        detail::shifted_inner_grad(z, d, ya, yb, ya, yb, j, 1.0, 0.0, jac, row++);
        if (2 * j < d) {
            detail::shifted_inner_grad(z, d, xa, xb, xa, xb, j, 0.0, 1.0, jac, row);
            detail::shifted_inner_grad(z, d, ya, yb, ya, yb, j, 0.0, 1.0, jac, row++);
        }
    }
    double r0, i0;
    detail::shifted_inner(z, d, xa, xb, ya, yb, 0, r0, i0);
    auto modsq_row = [&](int ua, int ub, int va, int vb, int j) {
        double r, i;
        detail::shifted_inner(z, d, ua, ub, va, vb, j, r, i);
        detail::shifted_inner_grad(z, d, ua, ub, va, vb, j, 2.0 * r, 2.0 * i, jac, row);
        detail::shifted_inner_grad(z, d, xa, xb, ya, yb, 0, -2.0 * r0, -2.0 * i0, jac, row);
        ++row;
    };
    for (int j = 1; 2 * j <= d; ++j) modsq_row(xa, xb, xa, xb, j);
    for (int j = 1; j < d; ++j) modsq_row(xa, xb, ya, yb, j);
    return jac;
}

inline RMat analytic_jacobian(const CirculantPair& p, double w) { return analytic_jacobian_z(pack(p, w), p.d); }

inline double inf_norm(const RVec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// Seeded unit-normalized complex Gaussian generators.
inline CirculantPair random_pair(int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    CirculantPair p{d, CVec(d), CVec(d)};
    for (int k = 0; k < d; ++k) p.x(k) = cplx(nd(rng), nd(rng));
    for (int k = 0; k < d; ++k) p.y(k) = cplx(nd(rng), nd(rng));
    p.x /= p.x.norm();
    p.y /= p.y.norm();
    return p;
}

/// Levenberg-Marquardt on (1/2)||residual||^2 with w = 1/2.
inline SolveResult solve(int d, std::uint64_t seed, double tol = 1e-12, int max_iter = 2000) {
    if (d < 2) throw InvalidArgument("solve: d must be at least 2");
    const ResidualSystem sys(d);
    std::vector<double> z = pack(random_pair(d, seed), 0.5);
    const int nv = 4 * d;  // w stays fixed
    auto eval = [&](const std::vector<double>& v) {
        const auto f = residual_z(v, d);
        return RVec(Eigen::Map<const RVec>(f.data(), static_cast<Eigen::Index>(f.size())));
    };
    RVec r = eval(z);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    SolveResult out;
    out.seed = seed;
    int it = 0;
    for (; it < max_iter && inf_norm(r) > tol; ++it) {
        const RMat jac = analytic_jacobian_z(z, d).leftCols(nv);
        // (J^T J + lambda I)^{-1} J^T = J^T (J J^T + lambda I)^{-1}
        const RMat jjt = jac * jac.transpose();
        bool accepted = false;
        while (!accepted && lambda < 1e12) {
            const RMat a = jjt + lambda * RMat::Identity(sys.rows(), sys.rows());
            const RVec step = -jac.transpose() * a.ldlt().solve(r);
            std::vector<double> trial = z;
            for (int k = 0; k < nv; ++k) trial[static_cast<size_t>(k)] += step(k);
            const RVec rt = eval(trial);
            const double ct = rt.squaredNorm();
            if (std::isfinite(ct) && ct < cost) {
                z = std::move(trial);
                r = rt;
                cost = ct;
                lambda = std::max(lambda * 0.5, 1e-20);
                accepted = true;
            } else {
                lambda *= 2.0;
            }
        }
        if (!accepted) break;
    }
    out.iterations = it;
    out.pair = unpack(z, d);
    out.residual_inf = inf_norm(r);
    out.converged = out.residual_inf <= tol;
    return out;
}

/// Solves each d with up to attempts seeds (seed, seed+1, ...) on jobs workers.
inline std::vector<SolveResult> solve_batch(const std::vector<int>& ds, std::uint64_t seed, double tol, int max_iter,
                                            int attempts, int jobs) {
    std::vector<SolveResult> out(ds.size());
    parallel_for_index(static_cast<int>(ds.size()), jobs, [&](int i) {
        for (int a = 0; a < attempts; ++a) {
            out[static_cast<size_t>(i)] = solve(ds[static_cast<size_t>(i)], seed + static_cast<std::uint64_t>(a), tol, max_iter);
            if (out[static_cast<size_t>(i)].converged) break;
        }
    });
    return out;
}

/// Tropp-style alternating projections between the Gram structure set and rank-d tight Grams.
inline CMat alternating_projections_gram(int d, int n, std::uint64_t seed, int iterations) {
    if (d < 1 || n <= d) throw InvalidArgument("alternating_projections_gram: need n > d >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    CMat phi(d, n);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < n; ++j) phi(i, j) = cplx(nd(rng), nd(rng));
    for (int j = 0; j < n; ++j) phi.col(j) /= phi.col(j).norm();
    CMat g = gram(phi);
    const double gamma = welch_gamma(d, n);
    const double top = static_cast<double>(n) / d;
    for (int it = 0; it < iterations; ++it) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) {
                    g(i, j) = 1.0;
                    continue;
                }
                const double a = std::abs(g(i, j));
                g(i, j) = a > 0.0 ? g(i, j) * (gamma / a) : cplx(gamma);
            }
        const auto e = hermitian_eigen(g);
        const CMat v = e.eigenvectors.rightCols(d);
        g = top * v * v.adjoint();
    }
    return g;
}

struct D4Trial {
    int trial = 0;
    double max_abs_re = 0.0;
    bool rounding_ok = false;
};

struct D4Stats {
    std::vector<D4Trial> trials;
    double max_abs_re = 0.0;
    int rounding_successes = 0;
};

/// Phase signature of G normalized to 1 on the first row and column.
inline CMat normalized_phase_signature(const CMat& g) {
    const Eigen::Index n = g.rows();
    CMat s = CMat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) {
                const double a = std::abs(g(i, j));
                s(i, j) = a > 0.0 ? g(i, j) / a : cplx(1.0);
            }
    std::vector<cplx> c(static_cast<size_t>(n), cplx(1.0));
    for (Eigen::Index j = 1; j < n; ++j) c[static_cast<size_t>(j)] = std::conj(s(0, j));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            s(i, j) = std::conj(c[static_cast<size_t>(i)]) * c[static_cast<size_t>(j)] * s(i, j);
    return s;
}

/// Rounds the core to +-i and tests S^2 = (n-1) I over the Gaussian integers.
inline bool imaginary_rounding_ok(const CMat& s) {
    const Eigen::Index n = s.rows();
    using gi = std::complex<long long>;
    std::vector<gi> r(static_cast<size_t>(n * n), gi(0, 0));
    auto at = [&](Eigen::Index i, Eigen::Index j) -> gi& { return r[static_cast<size_t>(i * n + j)]; };
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            if (i == 0 || j == 0) at(i, j) = gi(1, 0);
            else at(i, j) = gi(0, s(i, j).imag() >= 0.0 ? 1 : -1);
        }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            gi acc(0, 0);
            for (Eigen::Index k = 0; k < n; ++k) acc += at(i, k) * at(k, j);
            if (acc != (i == j ? gi(n - 1, 0) : gi(0, 0))) return false;
        }
    return true;
}

/// Repeated 4 x 8 alternating projections, scoring closeness to an imaginary-core signature.
inline D4Stats d4_uniqueness_experiment(int trials, int iterations, std::uint64_t seed) {
    D4Stats st;
    std::mt19937_64 seeder(seed);
    for (int t = 0; t < trials; ++t) {
        const CMat g = alternating_projections_gram(4, 8, seeder(), iterations);
        const CMat s = normalized_phase_signature(g);
        D4Trial tr;
        tr.trial = t;
        for (int i = 1; i < 8; ++i)
            for (int j = 1; j < 8; ++j)
                if (i != j) tr.max_abs_re = std::max(tr.max_abs_re, std::abs(s(i, j).real()));
        tr.rounding_ok = imaginary_rounding_ok(s);
        st.max_abs_re = std::max(st.max_abs_re, tr.max_abs_re);
        st.rounding_successes += tr.rounding_ok ? 1 : 0;
        st.trials.push_back(tr);
    }
    return st;
}

}  // namespace etfforge
