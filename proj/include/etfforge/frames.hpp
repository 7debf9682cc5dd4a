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
#include <string>
#include <utility>
#include <vector>

#include "etfforge/errors.hpp"
#include "etfforge/linalg.hpp"

namespace etfforge {

struct EtfReport {
    Eigen::Index d = 0;
    Eigen::Index n = 0;
    double max_norm_dev = 0.0;
    double max_tight_dev = 0.0;
    double max_equi_dev = 0.0;
    double gamma = 0.0;
    double tol = 0.0;
    bool pass = false;
};

/// Generators of a 2-circulant d x 2d frame [C_x | C_y].
struct CirculantPair {
    int d = 0;
    CVec x;
    CVec y;
};

inline double welch_gamma(Eigen::Index d, Eigen::Index n) {
    if (d < 1 || n <= d) throw InvalidArgument("welch_gamma: need n > d >= 1");
    const double dd = static_cast<double>(d), nn = static_cast<double>(n);
    return std::sqrt((nn - dd) / (dd * (nn - 1.0)));
}

inline CMat gram(const CMat& phi) { return phi.adjoint() * phi; }

inline EtfReport check_etf(const CMat& phi, double tol) {
    EtfReport r;
    r.d = phi.rows();
    r.n = phi.cols();
    r.tol = tol;
    if (r.d < 1 || r.n < r.d) throw InvalidArgument("check_etf: need n >= d >= 1");
    r.gamma = r.n > r.d ? welch_gamma(r.d, r.n) : 0.0;
    const CMat g = gram(phi);
    for (Eigen::Index i = 0; i < r.n; ++i) {
        r.max_norm_dev = std::max(r.max_norm_dev, std::abs(g(i, i).real() - 1.0));
        for (Eigen::Index j = 0; j < r.n; ++j)
            if (i != j) r.max_equi_dev = std::max(r.max_equi_dev, std::abs(std::abs(g(i, j)) - r.gamma));
    }
    const CMat frame_op = phi * phi.adjoint();
    const double a = static_cast<double>(r.n) / static_cast<double>(r.d);
    r.max_tight_dev = max_abs(frame_op - a * CMat::Identity(r.d, r.d));
    r.pass = r.max_norm_dev <= tol && r.max_tight_dev <= tol && r.max_equi_dev <= tol;
    return r;
}

/// Splits G = I + gamma S.
inline std::pair<double, CMat> signature_of_gram(const CMat& g) {
    const Eigen::Index n = g.rows();
    if (n != g.cols()) throw InvalidArgument("signature_of_gram: Gram must be square");
    if (n < 2) throw InvalidArgument("signature_of_gram: need at least two vectors");
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(g(i, i) - 1.0) > 1e-8) throw InvalidArgument("signature_of_gram: diagonal is not unit");
    double sum = 0.0, lo = INFINITY, hi = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) {
                const double v = std::abs(g(i, j));
                sum += v;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
    const double gamma = sum / static_cast<double>(n * (n - 1));
    if (hi - gamma > 1e-6 || gamma - lo > 1e-6 || gamma <= 1e-12)
        throw NotEquiangular("signature_of_gram: off-diagonal moduli are not constant");
    CMat s = (g - CMat::Identity(n, n)) / gamma;
    for (Eigen::Index i = 0; i < n; ++i) s(i, i) = 0.0;
    return {gamma, s};
}

/// G = I + welch_gamma(d, n) S, after checking that G is a rank-d projection times n/d.
inline CMat gram_of_signature(const CMat& s, Eigen::Index d) {
    const Eigen::Index n = s.rows();
    if (n != s.cols()) throw InvalidArgument("gram_of_signature: signature must be square");
    if (max_abs(s - s.adjoint()) > 1e-8) throw InvalidArgument("gram_of_signature: signature is not self-adjoint");
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(s(i, i)) > 1e-8) throw InvalidArgument("gram_of_signature: nonzero diagonal");
    const double gamma = welch_gamma(d, n);
    if (2 * d == n) {
        const double res = max_abs(s * s - static_cast<double>(n - 1) * CMat::Identity(n, n));
        if (res > 1e-6) throw NotValidSignature("gram_of_signature: S^2 != (n-1)I", res);
    }
    CMat g = CMat::Identity(n, n) + gamma * s;
    const auto eig = hermitian_eigen(g);
    const double top = static_cast<double>(n) / static_cast<double>(d);
    double res = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double target = i >= n - d ? top : 0.0;
        res = std::max(res, std::abs(eig.eigenvalues(i) - target));
    }
    if (res > 1e-6) throw NotValidSignature("gram_of_signature: spectrum is not {0, n/d}", res);
    return g;
}

/// Rows sqrt(lambda_i) v_i^* over the top-d eigenpairs, largest first.
inline CMat frame_from_gram(const CMat& g, Eigen::Index d) {
    const Eigen::Index n = g.rows();
    if (d < 1 || d > n) throw InvalidArgument("frame_from_gram: d out of range");
    const auto eig = hermitian_eigen(g);
    const double scale = std::max(1.0, std::abs(eig.eigenvalues(n - 1)));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lam = eig.eigenvalues(i);
        if (i < n - d ? std::abs(lam) > 1e-6 * scale : lam <= 1e-6 * scale)
            throw InvalidArgument("frame_from_gram: Gram does not have rank " + std::to_string(d));
    }
    CMat phi(d, n);
    for (Eigen::Index r = 0; r < d; ++r) {
        const Eigen::Index i = n - 1 - r;
        phi.row(r) = std::sqrt(eig.eigenvalues(i)) * eig.eigenvectors.col(i).adjoint();
    }
    if (max_abs(gram(phi) - g) > 1e-8 * scale) throw NumericFailure("frame_from_gram: factorization residual too large");
    return phi;
}

inline CMat naimark_complement_signature(const CMat& s) { return -s; }

/// [C_1 | ... | C_t] with column g of C_i equal to T^g of the i-th generator.
inline CMat assemble_circulant(const std::vector<CVec>& gens) {
    if (gens.empty()) throw InvalidArgument("assemble_circulant: no generators");
    const Eigen::Index m = gens.front().size();
    CMat phi(m, m * static_cast<Eigen::Index>(gens.size()));
    for (size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].size() != m) throw InvalidArgument("assemble_circulant: generator lengths differ");
        phi.middleCols(static_cast<Eigen::Index>(i) * m, m) = circulant(gens[i]);
    }
    return phi;
}

inline CMat assemble_2circulant(const CirculantPair& p) {
    if (p.x.size() != p.d || p.y.size() != p.d) throw InvalidArgument("assemble_2circulant: generator length != d");
    return assemble_circulant({p.x, p.y});
}

}  // namespace etfforge
