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

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "etfforge/errors.hpp"
#include "etfforge/linalg.hpp"

namespace etfforge {

/// Field elements are integer codes: code = sum_i c_i p^i for the
/// coefficient vector (c_0, ..., c_{k-1}) of the polynomial representative.
/// Increasing code order is coefficient-lexicographic with the leading
/// coefficient most significant.
using FieldElement = std::uint64_t;

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

/// (p, k) with q = p^k, or nullopt when q is not a prime power.
inline std::optional<std::pair<std::uint64_t, int>> prime_power(std::uint64_t q) {
    if (q < 2) return std::nullopt;
    auto f = prime_factors(q);
    if (f.size() != 1) return std::nullopt;
    int k = 0;
    for (std::uint64_t r = q; r > 1; r /= f[0]) ++k;
    return std::make_pair(f[0], k);
}

inline bool is_odd_prime_power(std::uint64_t q) { return q % 2 == 1 && prime_power(q).has_value(); }

namespace poly {
using Poly = std::vector<std::int64_t>;  // low to high, trimmed

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mod(Poly a, const Poly& m, std::int64_t p) {
    trim(a);
    const size_t dm = m.size() - 1;
    // m is monic
    while (a.size() > dm) {
        const std::int64_t lead = a.back();
        const size_t shift = a.size() - 1 - dm;
        for (size_t i = 0; i <= dm; ++i) {
            a[shift + i] = ((a[shift + i] - lead * m[i]) % p + p) % p;
        }
        trim(a);
    }
    return a;
}

inline Poly mul(const Poly& a, const Poly& b, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    trim(c);
    return c;
}
}  // namespace poly

class GaloisField {
public:
    std::uint64_t p = 0;
    int k = 0;
    std::uint64_t q = 0;
    std::vector<std::int64_t> modulus;  // low to high, monic, size k+1

    std::vector<std::int64_t> coeffs(FieldElement a) const {
        std::vector<std::int64_t> c(static_cast<size_t>(k), 0);
        for (int i = 0; i < k; ++i) {
            c[static_cast<size_t>(i)] = static_cast<std::int64_t>(a % p);
            a /= p;
        }
        return c;
    }

    FieldElement from_coeffs(const std::vector<std::int64_t>& c) const {
        FieldElement a = 0;
        for (int i = k - 1; i >= 0; --i) {
            std::int64_t v = i < static_cast<int>(c.size()) ? c[static_cast<size_t>(i)] : 0;
            v = ((v % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p);
            a = a * p + static_cast<FieldElement>(v);
        }
        return a;
    }

    FieldElement zero() const { return 0; }
    FieldElement one() const { return 1; }
    FieldElement from_int(std::int64_t n) const {
        const auto pp = static_cast<std::int64_t>(p);
        return static_cast<FieldElement>(((n % pp) + pp) % pp);
    }

    FieldElement add(FieldElement a, FieldElement b) const {
        if (k == 1) return (a + b) % p;
        FieldElement r = 0, scale = 1;
        for (int i = 0; i < k; ++i) {
            r += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        return r;
    }

    FieldElement neg(FieldElement a) const {
        if (k == 1) return (p - a % p) % p;
        FieldElement r = 0, scale = 1;
        for (int i = 0; i < k; ++i) {
            r += ((p - a % p) % p) * scale;
            a /= p;
            scale *= p;
        }
        return r;
    }

    FieldElement sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

    FieldElement mul(FieldElement a, FieldElement b) const {
        if (a == 0 || b == 0) return 0;
        if (!exp_.empty()) {
            const std::uint64_t e = (log_[a] + log_[b]) % (q - 1);
            return exp_[e];
        }
        return mul_slow(a, b);
    }

    FieldElement pow(FieldElement a, std::uint64_t e) const {
        if (e == 0) return 1;
        if (a == 0) return 0;
        if (!exp_.empty()) return exp_[(log_[a] * (e % (q - 1))) % (q - 1)];
        FieldElement r = 1, b = a;
        while (e) {
            if (e & 1) r = mul_slow(r, b);
            b = mul_slow(b, b);
            e >>= 1;
        }
        return r;
    }

    FieldElement inv(FieldElement a) const {
        if (a == 0) throw InvalidArgument("inverse of zero field element");
        return pow(a, q - 2);
    }

    /// Discrete log base the field generator; requires tables.
    std::uint64_t log(FieldElement a) const {
        require_tables();
        if (a == 0) throw InvalidArgument("log of zero field element");
        return log_[a];
    }

    FieldElement exp(std::uint64_t e) const {
        require_tables();
        return exp_[e % (q - 1)];
    }

    FieldElement generator() const {
        require_tables();
        return generator_;
    }

    bool has_tables() const { return !exp_.empty(); }

    /// Quadratic character: 0 at 0, +1 on nonzero squares, -1 otherwise.
    int chi(FieldElement a) const {
        if (p == 2) throw InvalidArgument("quadratic character undefined in even characteristic");
        if (a == 0) return 0;
        if (!exp_.empty()) return (log_[a] % 2 == 0) ? 1 : -1;
        return pow(a, (q - 1) / 2) == 1 ? 1 : -1;
    }

    FieldElement mul_slow(FieldElement a, FieldElement b) const {
        const auto pp = static_cast<std::int64_t>(p);
        poly::Poly pa = coeffs(a), pb = coeffs(b);
        poly::trim(pa);
        poly::trim(pb);
        return from_coeffs(poly::mod(poly::mul(pa, pb, pp), modulus, pp));
    }

    std::uint64_t order_slow(FieldElement a) const;

    void build_tables(FieldElement g) {
        exp_.assign(static_cast<size_t>(q - 1), 0);
        log_.assign(static_cast<size_t>(q), 0);
        FieldElement x = 1;
        for (std::uint64_t e = 0; e + 1 < q; ++e) {
            exp_[e] = x;
            log_[x] = e;
            x = mul_slow(x, g);
        }
        generator_ = g;
    }

private:
    std::vector<FieldElement> exp_;
    std::vector<std::uint64_t> log_;
    FieldElement generator_ = 0;

    void require_tables() const {
        if (exp_.empty()) throw InvalidArgument("field too large for log tables");
    }
};

namespace detail {
inline bool is_irreducible(const poly::Poly& m, std::int64_t p) {
    const int k = static_cast<int>(m.size()) - 1;
    if (k <= 1) return true;
    // trial division by every monic polynomial of degree 1..k/2
    for (int deg = 1; deg <= k / 2; ++deg) {
        std::uint64_t count = 1;
        for (int i = 0; i < deg; ++i) count *= static_cast<std::uint64_t>(p);
        for (std::uint64_t c = 0; c < count; ++c) {
            poly::Poly f(static_cast<size_t>(deg) + 1, 0);
            std::uint64_t r = c;
            for (int i = 0; i < deg; ++i) {
                f[static_cast<size_t>(i)] = static_cast<std::int64_t>(r % static_cast<std::uint64_t>(p));
                r /= static_cast<std::uint64_t>(p);
            }
            f[static_cast<size_t>(deg)] = 1;
            if (poly::mod(m, f, p).empty()) return false;
        }
    }
    return true;
}
}  // namespace detail

inline std::uint64_t GaloisField::order_slow(FieldElement a) const {
    if (a == 0) throw InvalidArgument("order of zero");
    std::uint64_t n = q - 1;
    for (std::uint64_t r : prime_factors(q - 1)) {
        while (n % r == 0) {
            FieldElement x = 1, b = a;
            std::uint64_t e = n / r;
            while (e) {
                if (e & 1) x = mul_slow(x, b);
                b = mul_slow(b, b);
                e >>= 1;
            }
            if (x != 1) break;
            n /= r;
        }
    }
    return n;
}

/// Least element (in code order) of multiplicative order q - 1.
inline FieldElement find_generator(const GaloisField& f) {
    if (f.q > 1000000) throw InvalidArgument("find_generator: field order above 10^6");
    if (f.q == 2) return 1;
    const auto factors = prime_factors(f.q - 1);
    for (FieldElement g = 1; g < f.q; ++g) {
        bool ok = true;
        for (std::uint64_t r : factors) {
            FieldElement x = 1, b = g;
            std::uint64_t e = (f.q - 1) / r;
            while (e) {
                if (e & 1) x = f.mul_slow(x, b);
                b = f.mul_slow(b, b);
                e >>= 1;
            }
            if (x == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw NumericFailure("find_generator: no generator found");
}

/// GF(p^k) with the least monic irreducible modulus in code order.
inline std::shared_ptr<const GaloisField> make_field(std::uint64_t p, int k) {
    if (p >= (1ULL << 31) || !is_prime(p)) throw InvalidArgument("make_field: p must be a prime below 2^31");
    if (k < 1) throw InvalidArgument("make_field: k must be at least 1");
    std::uint64_t q = 1;
    for (int i = 0; i < k; ++i) {
        if (q > (static_cast<std::uint64_t>(1) << 63) / p) throw InvalidArgument("make_field: p^k too large");
        q *= p;
    }
    if (q >= (static_cast<std::uint64_t>(1) << 63)) throw InvalidArgument("make_field: p^k too large");
    auto f = std::make_shared<GaloisField>();
    f->p = p;
    f->k = k;
    f->q = q;
    const auto pp = static_cast<std::int64_t>(p);
    if (k == 1) {
        f->modulus = {0, 1};
    } else {
        const std::uint64_t count = q;  // lower coefficients range over p^k choices
        bool found = false;
        for (std::uint64_t c = 0; c < count && !found; ++c) {
            poly::Poly m(static_cast<size_t>(k) + 1, 0);
            std::uint64_t r = c;
            for (int i = 0; i < k; ++i) {
                m[static_cast<size_t>(i)] = static_cast<std::int64_t>(r % p);
                r /= p;
            }
            m[static_cast<size_t>(k)] = 1;
            if (m[0] == 0) continue;  // x divides it
            if (detail::is_irreducible(m, pp)) {
                f->modulus = m;
                found = true;
            }
        }
        if (!found) throw NumericFailure("make_field: no irreducible modulus found");
    }
    if (q <= 1000000 && q > 2) f->build_tables(find_generator(*f));
    return f;
}

/// Field of order q (an odd or even prime power).
inline std::shared_ptr<const GaloisField> make_field_q(std::uint64_t q) {
    auto pk = prime_power(q);
    if (!pk) throw InvalidArgument("field order " + std::to_string(q) + " is not a prime power");
    return make_field(pk->first, pk->second);
}

inline int quadratic_character(const GaloisField& f, FieldElement x) { return f.chi(x); }

/// Lines of GF(q^2) viewed as a 2-dimensional GF(q)-space.
struct SymplecticLineSystem {
    enum class Variant { halfturn, fullturn };

    Variant variant = Variant::halfturn;
    std::uint64_t q = 0;
    std::shared_ptr<const GaloisField> ext;  // GF(q^2)
    FieldElement zeta = 0;                   // generator of GF(q^2)^x
    std::vector<FieldElement> reps;          // halfturn: index e*h + k; fullturn: index j
    std::vector<FieldElement> alpha;         // line-shift scalars, elements of the base field

    std::uint64_t half() const { return (q + 1) / 2; }

    FieldElement frob(FieldElement x) const { return ext->pow(x, q); }

    /// [x,y] = zeta^((q+1)/2) (x y^q - y x^q), an element of the base field.
    FieldElement form(FieldElement x, FieldElement y) const {
        const FieldElement s = ext->sub(ext->mul(x, frob(y)), ext->mul(y, frob(x)));
        return ext->mul(ext->pow(zeta, (q + 1) / 2), s);
    }

    bool in_base_field(FieldElement z) const { return z == 0 || ext->log(z) % (q + 1) == 0; }

    /// Quadratic character of the base field GF(q), evaluated inside GF(q^2).
    int base_chi(FieldElement z) const {
        if (z == 0) return 0;
        const std::uint64_t l = ext->log(z);
        if (l % (q + 1) != 0) throw InvalidArgument("base_chi: element outside the base field");
        return ((l / (q + 1)) % 2 == 0) ? 1 : -1;
    }

    cplx omega() const { return q % 4 == 1 ? cplx(1.0, 0.0) : I_unit; }

    /// S_ij = omega * chi([t_i, t_j]).
    CMat signature() const {
        const auto n = static_cast<Eigen::Index>(reps.size());
        CMat s = CMat::Zero(n, n);
        const cplx w = omega();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                s(i, j) = w * static_cast<double>(base_chi(form(reps[static_cast<size_t>(i)], reps[static_cast<size_t>(j)])));
        return s;
    }
};

inline SymplecticLineSystem build_line_system(std::uint64_t q, SymplecticLineSystem::Variant variant) {
    if (!is_odd_prime_power(q)) throw InvalidArgument("build_line_system: q must be an odd prime power");
    if (q * q > 1000000) throw InvalidArgument("build_line_system: q^2 above 10^6");
    auto pk = prime_power(q);
    SymplecticLineSystem sys;
    sys.variant = variant;
    sys.q = q;
    sys.ext = make_field(pk->first, 2 * pk->second);
    const GaloisField& e = *sys.ext;
    sys.zeta = e.generator();
    const FieldElement minus_one = e.neg(1);
    if (variant == SymplecticLineSystem::Variant::halfturn) {
        const std::uint64_t h = (q + 1) / 2;
        // L(x) = zeta^(1-q) x
        const std::uint64_t lstep = (e.q - 1) - (q - 1);
        const FieldElement lmul = e.exp(lstep);
        sys.reps.assign(2 * h, 0);
        for (std::uint64_t k = 0; k < h; ++k) {
            sys.reps[k] = e.exp(lstep * k);
            sys.reps[h + k] = e.mul(sys.reps[k], sys.zeta);
        }
        sys.alpha.assign(h, 1);
        sys.alpha[h - 1] = minus_one;
        for (std::uint64_t k = 0; k < h; ++k)
            for (std::uint64_t eps = 0; eps < 2; ++eps) {
                const FieldElement lt = e.mul(lmul, sys.reps[eps * h + k]);
                const FieldElement rhs = e.mul(sys.alpha[k], sys.reps[eps * h + (k + 1) % h]);
                if (lt != rhs) throw NumericFailure("build_line_system: halfturn shift relation failed");
            }
    } else {
        sys.reps.assign(q + 1, 0);
        for (std::uint64_t j = 0; j <= q; ++j) sys.reps[j] = e.exp(j);
        sys.alpha.assign(q + 1, 1);
        sys.alpha[q] = e.exp(q + 1);
        for (std::uint64_t j = 0; j <= q; ++j) {
            const FieldElement lt = e.mul(sys.zeta, sys.reps[j]);
            if (lt != e.mul(sys.alpha[j], sys.reps[(j + 1) % (q + 1)]))
                throw NumericFailure("build_line_system: fullturn shift relation failed");
        }
    }
    // distinct lines: ratios never lie in the base field
    for (size_t i = 0; i < sys.reps.size(); ++i)
        for (size_t j = i + 1; j < sys.reps.size(); ++j)
            if (e.log(sys.reps[i]) % (q + 1) == e.log(sys.reps[j]) % (q + 1))
                throw NumericFailure("build_line_system: representatives share a line");
    return sys;
}

}  // namespace etfforge
