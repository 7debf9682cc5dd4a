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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "etfforge/errors.hpp"

namespace etfforge {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr cplx I_unit{0.0, 1.0};

enum class Role { frame, gram, signature, generic };

inline std::string role_name(Role r) {
    switch (r) {
        case Role::frame: return "frame";
        case Role::gram: return "gram";
        case Role::signature: return "signature";
        case Role::generic: break;
    }
    return "generic";
}

inline Role parse_role(const std::string& s) {
    if (s == "frame") return Role::frame;
    if (s == "gram") return Role::gram;
    if (s == "signature") return Role::signature;
    if (s == "generic") return Role::generic;
    throw InvalidArgument("unknown matrix kind '" + s + "'");
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
    return a.size() == 0 ? 0.0 : static_cast<double>(a.cwiseAbs().maxCoeff());
}

/// Dense complex matrix tagged with what it represents.
struct ComplexMatrix {
    Role role = Role::generic;
    CMat m;

    Eigen::Index rows() const { return m.rows(); }
    Eigen::Index cols() const { return m.cols(); }
};

/// Throws InvalidArgument when the role invariants fail at tolerance tol.
inline void validate(const ComplexMatrix& a, double tol = 1e-10) {
    if (a.role == Role::gram || a.role == Role::signature) {
        if (a.rows() != a.cols()) throw InvalidArgument(role_name(a.role) + " matrix must be square");
        if (max_abs(a.m - a.m.adjoint()) > tol)
            throw InvalidArgument(role_name(a.role) + " matrix is not Hermitian");
    }
    if (a.role == Role::signature) {
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                double v = std::abs(a.m(i, j));
                if (i == j ? v > tol : std::abs(v - 1.0) > tol)
                    throw InvalidArgument("signature matrix needs zero diagonal and unimodular off-diagonal");
            }
    }
}

struct HermitianEigen {
    RVec eigenvalues;  // ascending
    CMat eigenvectors;  // columns
};

inline HermitianEigen hermitian_eigen(const CMat& a) {
    if (a.rows() != a.cols()) throw InvalidArgument("hermitian_eigen: matrix is not square");
    if (a.size() > 0 && max_abs(a - a.adjoint()) > 1e-8)
        throw InvalidArgument("hermitian_eigen: matrix is not Hermitian");
    CMat h = (a + a.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    if (es.info() != Eigen::Success) throw NumericFailure("hermitian_eigen: no convergence");
    return {es.eigenvalues(), es.eigenvectors()};
}

/// Unitary DFT of C_m: F[a,g] = exp(-2 pi i a g / m) / sqrt(m).
inline CMat dft_matrix(int m) {
    if (m < 1) throw InvalidArgument("dft_matrix: m must be positive");
    CMat f(m, m);
    const double s = 1.0 / std::sqrt(static_cast<double>(m));
    for (int a = 0; a < m; ++a)
        for (int g = 0; g < m; ++g) {
            long long r = (static_cast<long long>(a) * g) % m;
            f(a, g) = std::polar(s, -2.0 * std::numbers::pi * static_cast<double>(r) / m);
        }
    return f;
}

/// Circulant matrix whose column g is the cyclic shift of v by g.
inline CMat circulant(const CVec& v) {
    const Eigen::Index m = v.size();
    CMat c(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index g = 0; g < m; ++g) c(i, g) = v(((i - g) % m + m) % m);
    return c;
}

/// Right inverse of a real matrix with full row rank.
inline RMat pseudoinverse(const RMat& a) {
    if (a.rows() == 0 || a.cols() == 0) throw InvalidArgument("pseudoinverse: empty matrix");
    Eigen::BDCSVD<RMat> svd(a);
    const RVec& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (sv.size() < a.rows() || !(smax > 0.0) || smin <= 1e-8 * smax)
        throw RankDeficiency("pseudoinverse: matrix lacks full row rank",
                             sv.size() < a.rows() ? 0.0 : smin);
    Eigen::CompleteOrthogonalDecomposition<RMat> cod;
    cod.setThreshold(1e-10);
    cod.compute(a);
    if (cod.rank() != a.rows()) throw RankDeficiency("pseudoinverse: rank below row count", smin);
    RMat t = cod.pseudoInverse();
    RMat err = a * t - RMat::Identity(a.rows(), a.rows());
    if (max_abs(err) > 1e-8) throw NumericFailure("pseudoinverse: right-inverse residual too large");
    return t;
}

/// Induced infinity norm: largest absolute row sum.
inline double op_norm_inf(const RMat& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

inline double op_norm_inf(const CMat& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace etfforge
