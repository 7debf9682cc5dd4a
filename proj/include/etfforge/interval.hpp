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
#include <vector>

#include "etfforge/errors.hpp"
#include "etfforge/linalg.hpp"

namespace etfforge {

namespace detail {
inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
}  // namespace detail

/// Closed real interval [lo, hi]. Endpoints are rounded outward, so results
/// enclose the exact image of every member.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    constexpr Interval() = default;
    constexpr Interval(double x) : lo(x), hi(x) {}  // NOLINT: degenerate lift is intended
    Interval(double l, double h) : lo(l), hi(h) {
        if (std::isnan(l) || std::isnan(h) || l > h) throw InvalidArgument("interval endpoints out of order or NaN");
    }

    double mid() const { return lo + 0.5 * (hi - lo); }
    double width() const { return hi - lo; }
    double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
    bool subset_of(const Interval& o) const { return o.lo <= lo && hi <= o.hi; }
};

namespace detail {
inline Interval outward(double l, double h) {
    Interval r;
    r.lo = down(l);
    r.hi = up(h);
    return r;
}

inline bool is_zero(const Interval& a) { return a.lo == 0.0 && a.hi == 0.0; }

// Directed rounding from round-to-nearest plus the exact rounding error:
// TwoSum for sums, fma residuals for products and quotients. Near the
// underflow range the residual may itself round away, so fall back to a
// one-ulp step there.
inline constexpr double tiny = 1e-280;

inline double add_dn(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return down(s);
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return err < 0.0 ? down(s) : s;
}

inline double add_up(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return up(s);
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return err > 0.0 ? up(s) : s;
}

inline double mul_dn(double a, double b) {
    const double p = a * b;
    if (!std::isfinite(p) || (p != 0.0 && std::abs(p) < tiny) || (p == 0.0 && a != 0.0 && b != 0.0)) return down(p);
    const double err = std::fma(a, b, -p);
    return err < 0.0 ? down(p) : p;
}

inline double mul_up(double a, double b) {
    const double p = a * b;
    if (!std::isfinite(p) || (p != 0.0 && std::abs(p) < tiny) || (p == 0.0 && a != 0.0 && b != 0.0)) return up(p);
    const double err = std::fma(a, b, -p);
    return err > 0.0 ? up(p) : p;
}

// sign of a/b - q is sign(a - q b) * sign(b)
inline double div_dn(double a, double b) {
    const double q = a / b;
    if (!std::isfinite(q) || (q != 0.0 && std::abs(q) < tiny) || (q == 0.0 && a != 0.0) || std::abs(a) < tiny)
        return down(q);
    const double r = std::fma(-q, b, a);
    return (b > 0.0 ? r < 0.0 : r > 0.0) ? down(q) : q;
}

inline double div_up(double a, double b) {
    const double q = a / b;
    if (!std::isfinite(q) || (q != 0.0 && std::abs(q) < tiny) || (q == 0.0 && a != 0.0) || std::abs(a) < tiny)
        return up(q);
    const double r = std::fma(-q, b, a);
    return (b > 0.0 ? r > 0.0 : r < 0.0) ? up(q) : q;
}
}  // namespace detail

inline Interval iv_add(const Interval& a, const Interval& b) {
    Interval r;
    r.lo = detail::add_dn(a.lo, b.lo);
    r.hi = detail::add_up(a.hi, b.hi);
    return r;
}

inline Interval iv_sub(const Interval& a, const Interval& b) {
    Interval r;
    r.lo = detail::add_dn(a.lo, -b.hi);
    r.hi = detail::add_up(a.hi, -b.lo);
    return r;
}

inline Interval iv_mul(const Interval& a, const Interval& b) {
    if (detail::is_zero(a) || detail::is_zero(b)) return Interval(0.0);
    Interval r;
    r.lo = std::min({detail::mul_dn(a.lo, b.lo), detail::mul_dn(a.lo, b.hi), detail::mul_dn(a.hi, b.lo),
                     detail::mul_dn(a.hi, b.hi)});
    r.hi = std::max({detail::mul_up(a.lo, b.lo), detail::mul_up(a.lo, b.hi), detail::mul_up(a.hi, b.lo),
                     detail::mul_up(a.hi, b.hi)});
    return r;
}

inline Interval iv_div(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw DivisionByZeroInterval("interval division by an interval containing 0");
    Interval r;
    r.lo = std::min({detail::div_dn(a.lo, b.lo), detail::div_dn(a.lo, b.hi), detail::div_dn(a.hi, b.lo),
                     detail::div_dn(a.hi, b.hi)});
    r.hi = std::max({detail::div_up(a.lo, b.lo), detail::div_up(a.lo, b.hi), detail::div_up(a.hi, b.lo),
                     detail::div_up(a.hi, b.hi)});
    return r;
}

inline Interval iv_abs(const Interval& a) {
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return {-a.hi, -a.lo};
    return {0.0, std::max(-a.lo, a.hi)};
}

inline Interval iv_sqr(const Interval& a) {
    const Interval m = iv_abs(a);
    Interval r;
    r.lo = std::max(0.0, detail::mul_dn(m.lo, m.lo));
    r.hi = detail::mul_up(m.hi, m.hi);
    return r;
}

inline Interval iv_sqrt(const Interval& a) {
    if (a.hi < 0.0) throw InvalidArgument("interval square root of a negative interval");
    Interval r = detail::outward(std::sqrt(std::max(a.lo, 0.0)), std::sqrt(a.hi));
    if (r.lo < 0.0) r.lo = 0.0;
    return r;
}

inline Interval iv_max(const Interval& a, const Interval& b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }

inline Interval operator+(const Interval& a, const Interval& b) { return iv_add(a, b); }
inline Interval operator-(const Interval& a, const Interval& b) { return iv_sub(a, b); }
inline Interval operator*(const Interval& a, const Interval& b) { return iv_mul(a, b); }
inline Interval operator/(const Interval& a, const Interval& b) { return iv_div(a, b); }
inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }
inline Interval& operator+=(Interval& a, const Interval& b) { return a = iv_add(a, b); }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = iv_sub(a, b); }

inline Interval sqr(const Interval& a) { return iv_sqr(a); }
inline double sqr(double a) { return a * a; }

/// Row-major matrix of intervals.
struct IntervalMatrix {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    std::vector<Interval> entries;

    IntervalMatrix() = default;
    IntervalMatrix(Eigen::Index r, Eigen::Index c) : rows(r), cols(c), entries(static_cast<size_t>(r * c)) {}

    Interval& operator()(Eigen::Index i, Eigen::Index j) { return entries[static_cast<size_t>(i * cols + j)]; }
    const Interval& operator()(Eigen::Index i, Eigen::Index j) const {
        return entries[static_cast<size_t>(i * cols + j)];
    }

    static IntervalMatrix lift(const RMat& a) {
        IntervalMatrix m(a.rows(), a.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j) m(i, j) = Interval(a(i, j));
        return m;
    }

    RMat midpoint() const {
        RMat a(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = (*this)(i, j).mid();
        return a;
    }

    double max_width() const {
        double w = 0.0;
        for (const auto& e : entries) w = std::max(w, e.width());
        return w;
    }
};

/// Enclosure of the largest absolute row sum.
inline Interval iv_norm_inf(const IntervalMatrix& a) {
    Interval best(0.0);
    for (Eigen::Index i = 0; i < a.rows; ++i) {
        Interval s(0.0);
        for (Eigen::Index j = 0; j < a.cols; ++j) s = iv_add(s, iv_abs(a(i, j)));
        best = i == 0 ? s : iv_max(best, s);
    }
    return best;
}

inline IntervalMatrix iv_matmul(const IntervalMatrix& a, const RMat& b) {
    if (a.cols != b.rows()) throw InvalidArgument("iv_matmul: inner dimensions disagree");
    IntervalMatrix c(a.rows, b.cols());
    for (Eigen::Index i = 0; i < a.rows; ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            Interval s(0.0);
            for (Eigen::Index k = 0; k < a.cols; ++k) {
                const double bk = b(k, j);
                if (bk == 0.0) continue;
                s = iv_add(s, iv_mul(a(i, k), Interval(bk)));
            }
            c(i, j) = s;
        }
    return c;
}

}  // namespace etfforge
