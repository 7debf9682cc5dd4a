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
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "etfforge/constructions.hpp"
#include "etfforge/errors.hpp"
#include "etfforge/frames.hpp"
#include "etfforge/galois.hpp"
#include "etfforge/linalg.hpp"

namespace etfforge {

/// (tm) x (tm) matrix viewed as t x t blocks of size m; index i*m + g.
struct BlockGram {
    int t = 0;
    int m = 0;
    CMat g;

    BlockGram() = default;
    BlockGram(int t_, int m_, CMat g_) : t(t_), m(m_), g(std::move(g_)) {
        if (t < 1 || m < 1 || g.rows() != static_cast<Eigen::Index>(t) * m || g.cols() != g.rows())
            throw InvalidArgument("BlockGram: matrix size must be (t m) x (t m)");
    }

    CMat block(int i, int j) const { return g.block(i * m, j * m, m, m); }
};

struct HarmonicReport {
    bool stable = false;
    bool psd_ok = false;
    double stability_dev = 0.0;
    double min_eigenvalue = 0.0;
    std::vector<CMat> H;  // indexed by character alpha
};

/// Gram-side test for t-generator C_m-harmonic structure.
inline HarmonicReport detect_harmonic_gram(const BlockGram& bg) {
    if (max_abs(bg.g - bg.g.adjoint()) > 1e-8) throw InvalidArgument("detect_harmonic_gram: Gram is not Hermitian");
    const int t = bg.t, m = bg.m;
    HarmonicReport rep;
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) {
            const CMat b = bg.block(i, j);
            for (int g = 0; g < m; ++g)
                for (int h = 0; h < m; ++h)
                    rep.stability_dev = std::max(rep.stability_dev, std::abs(b(g, h) - b(0, ((h - g) % m + m) % m)));
        }
    rep.stable = rep.stability_dev <= 1e-8;
    const CMat f = dft_matrix(m);
    rep.H.assign(static_cast<size_t>(m), CMat::Zero(t, t));
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) {
            const CMat d = f * bg.block(i, j) * f.adjoint();
            for (int a = 0; a < m; ++a) rep.H[static_cast<size_t>(a)](i, j) = d(a, a);
        }
    rep.min_eigenvalue = INFINITY;
    for (auto& h : rep.H) {
        const CMat hs = (h + h.adjoint()) / 2.0;
        rep.min_eigenvalue = std::min(rep.min_eigenvalue, hermitian_eigen(hs).eigenvalues(0));
    }
    rep.psd_ok = rep.min_eigenvalue >= -1e-8;
    return rep;
}

/// G^2 = tG and sum_i G_ii = tI, each to 1e-8.
inline bool check_regular_representation(const BlockGram& bg) {
    const Eigen::Index n = bg.g.rows();
    const double t = bg.t;
    if (max_abs(bg.g * bg.g - t * bg.g) > 1e-8) return false;
    CMat s = CMat::Zero(bg.m, bg.m);
    for (int i = 0; i < bg.t; ++i) s += bg.block(i, i);
    if (max_abs(s - t * CMat::Identity(bg.m, bg.m)) > 1e-8) return false;
    (void)n;
    const auto rep = detect_harmonic_gram(bg);
    for (const auto& h : rep.H) {
        const auto e = hermitian_eigen((h + h.adjoint()) / 2.0);
        const Eigen::Index k = e.eigenvalues.size();
        if (std::abs(e.eigenvalues(k - 1) - t) > 1e-6)
            throw NumericFailure("check_regular_representation: H_alpha lacks the eigenvalue t");
        for (Eigen::Index i = 0; i + 1 < k; ++i)
            if (std::abs(e.eigenvalues(i)) > 1e-6)
                throw NumericFailure("check_regular_representation: t has multiplicity above 1 in H_alpha");
    }
    return true;
}

/// Generators x_1..x_t of a t-circulant frame whose Gram is bg (regular representation case).
inline std::vector<CVec> circulant_generators(const BlockGram& bg) {
    if (!check_regular_representation(bg)) throw InvalidArgument("circulant_generators: not a regular-representation Gram");
    const int t = bg.t, m = bg.m;
    const auto rep = detect_harmonic_gram(bg);
    const CMat f = dft_matrix(m);
    std::vector<CVec> xhat(static_cast<size_t>(t), CVec::Zero(m));
    for (int a = 0; a < m; ++a) {
        const auto e = hermitian_eigen(rep.H[static_cast<size_t>(a)]);
        const CVec w = std::sqrt(static_cast<double>(t)) * e.eigenvectors.col(t - 1);
        for (int i = 0; i < t; ++i) xhat[static_cast<size_t>(i)](a) = std::conj(w(i));
    }
    std::vector<CVec> gens;
    for (int i = 0; i < t; ++i) {
        const CMat c = f.adjoint() * xhat[static_cast<size_t>(i)].asDiagonal() * f;
        gens.push_back(c.col(0));
    }
    if (max_abs(gram(assemble_circulant(gens)) - bg.g) > 1e-8)
        throw NumericFailure("circulant_generators: reconstructed Gram disagrees");
    return gens;
}

/// sigma and unimodular c with <phi_i, phi_j> = conj(c_i) c_j <phi_sigma(i), phi_sigma(j)>.
struct AutomorphismWitness {
    std::vector<int> sigma;
    std::vector<cplx> c;
    int m = 0;  // cycle length
    int t = 0;  // cycle count

    std::vector<std::vector<int>> cycles() const {
        std::vector<std::vector<int>> out;
        std::vector<char> seen(sigma.size(), 0);
        for (size_t i = 0; i < sigma.size(); ++i) {
            if (seen[i]) continue;
            std::vector<int> cyc;
            for (int j = static_cast<int>(i); !seen[static_cast<size_t>(j)]; j = sigma[static_cast<size_t>(j)]) {
                seen[static_cast<size_t>(j)] = 1;
                cyc.push_back(j);
            }
            out.push_back(cyc);
        }
        return out;
    }

    /// Sorted cycle lengths.
    std::vector<int> cycle_type() const {
        std::vector<int> out;
        for (const auto& c : cycles()) out.push_back(static_cast<int>(c.size()));
        std::sort(out.begin(), out.end());
        return out;
    }

    void validate(Eigen::Index n) const {
        if (static_cast<Eigen::Index>(sigma.size()) != n || static_cast<Eigen::Index>(c.size()) != n)
            throw InvalidArgument("witness size does not match the Gram");
        std::vector<char> hit(sigma.size(), 0);
        for (int s : sigma) {
            if (s < 0 || s >= static_cast<int>(sigma.size()) || hit[static_cast<size_t>(s)])
                throw InvalidArgument("witness sigma is not a permutation");
            hit[static_cast<size_t>(s)] = 1;
        }
        for (const auto& x : c)
            if (std::abs(std::abs(x) - 1.0) > 1e-10) throw InvalidArgument("witness scalars must be unimodular");
    }
};

inline double automorphism_residual(const CMat& g, const AutomorphismWitness& w) {
    w.validate(g.rows());
    double r = 0.0;
    const Eigen::Index n = g.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const cplx rhs = std::conj(w.c[static_cast<size_t>(i)]) * w.c[static_cast<size_t>(j)] *
                             g(w.sigma[static_cast<size_t>(i)], w.sigma[static_cast<size_t>(j)]);
            r = std::max(r, std::abs(g(i, j) - rhs));
        }
    return r;
}

inline bool verify_automorphism(const CMat& g, const AutomorphismWitness& w, double tol) {
    if (g.rows() != g.cols() || static_cast<Eigen::Index>(w.sigma.size()) != g.rows()) return false;
    try {
        return automorphism_residual(g, w) <= tol;
    } catch (const InvalidArgument&) {
        return false;
    }
}

struct Circulantized {
    BlockGram gram;
    std::vector<cplx> a;     // switching scalars in input indexing
    cplx beta;
    std::vector<int> order;  // order[j*m + l] = sigma^l(r_j)
};

/// Rescales and reorders the Gram along the cycles of an automorphism of type m^t.
inline Circulantized circulantize(const CMat& g, const AutomorphismWitness& w) {
    w.validate(g.rows());
    const Eigen::Index n = g.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (std::abs(g(i, j)) < 1e-10) throw UnsupportedInput("circulantize: Gram has a zero entry");
    if (automorphism_residual(g, w) > 1e-8) throw InvalidArgument("circulantize: witness is not an automorphism");
    const auto cyc = w.cycles();
    const int m = static_cast<int>(cyc.front().size());
    for (const auto& c : cyc)
        if (static_cast<int>(c.size()) != m) throw InvalidArgument("circulantize: cycle type is not m^t");
    const int t = static_cast<int>(cyc.size());

    std::vector<cplx> f(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        cplx prod(1.0);
        int x = static_cast<int>(i);
        for (int k = 0; k < m; ++k) {
            prod *= w.c[static_cast<size_t>(x)];
            x = w.sigma[static_cast<size_t>(x)];
        }
        f[static_cast<size_t>(i)] = prod;
    }
    for (const auto& v : f)
        if (std::abs(v - f[0]) > 1e-8) throw InconsistentWitness("circulantize: cycle products are not constant");

    Circulantized out;
    out.beta = std::polar(1.0, std::arg(f[0]) / m);
    out.a.assign(static_cast<size_t>(n), cplx(0.0));
    out.order.assign(static_cast<size_t>(n), 0);
    // cycles() lists cycles by least index and starts each at that index
    for (int j = 0; j < t; ++j) {
        int x = cyc[static_cast<size_t>(j)].front();
        cplx prod(1.0);
        for (int l = 0; l < m; ++l) {
            out.a[static_cast<size_t>(x)] = prod * std::pow(out.beta, -l);
            out.order[static_cast<size_t>(j * m + l)] = x;
            prod *= w.c[static_cast<size_t>(x)];
            x = w.sigma[static_cast<size_t>(x)];
        }
    }
    CMat h(n, n);
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = 0; q < n; ++q) {
            const int ip = out.order[static_cast<size_t>(p)], iq = out.order[static_cast<size_t>(q)];
            h(p, q) = std::conj(out.a[static_cast<size_t>(ip)]) * out.a[static_cast<size_t>(iq)] * g(ip, iq);
        }
    out.gram = BlockGram(t, m, h);
    if (!detect_harmonic_gram(out.gram).stable)
        throw NumericFailure("circulantize: rescaled Gram is not stable");
    return out;
}

enum class Family { paley_plus, double_paley_plus };

inline std::string family_name(Family f) { return f == Family::paley_plus ? "paley-plus" : "double-paley-plus"; }

/// Signature on which family_automorphism acts.
/// paley_plus: omega chi([t_i, t_j]) over halfturn representatives, index e*h + k.
/// double_paley_plus: [[wC, wC + iI], [wC - iI, -wC]] over fullturn representatives, index e*(q+1) + i.
inline CMat family_signature(Family fam, std::uint64_t q) {
    if (fam == Family::paley_plus) return build_line_system(q, SymplecticLineSystem::Variant::halfturn).signature();
    const auto sys = build_line_system(q, SymplecticLineSystem::Variant::fullturn);
    const CMat wc = sys.signature();
    const auto n = static_cast<Eigen::Index>(q + 1);
    const CMat I = CMat::Identity(n, n);
    CMat s(2 * n, 2 * n);
    s.topLeftCorner(n, n) = wc;
    s.topRightCorner(n, n) = wc + I_unit * I;
    s.bottomLeftCorner(n, n) = wc - I_unit * I;
    s.bottomRightCorner(n, n) = -wc;
    return s;
}

/// Frame dimension of the family at q.
inline int family_dimension(Family fam, std::uint64_t q) {
    return fam == Family::paley_plus ? static_cast<int>((q + 1) / 2) : static_cast<int>(q + 1);
}

namespace detail {
inline CMat switched(const CMat& s, const std::vector<cplx>& a) {
    CMat out = s;
    for (Eigen::Index i = 0; i < s.rows(); ++i)
        for (Eigen::Index j = 0; j < s.cols(); ++j)
            out(i, j) = std::conj(a[static_cast<size_t>(i)]) * a[static_cast<size_t>(j)] * s(i, j);
    return out;
}
}  // namespace detail

/// The explicit automorphism of family_signature(fam, q).
inline AutomorphismWitness family_automorphism(Family fam, std::uint64_t q) {
    AutomorphismWitness w;
    if (fam == Family::paley_plus) {
        const auto sys = build_line_system(q, SymplecticLineSystem::Variant::halfturn);
        const int h = static_cast<int>(sys.half());
        w.sigma.resize(static_cast<size_t>(2 * h));
        w.c.resize(static_cast<size_t>(2 * h));
        for (int e = 0; e < 2; ++e)
            for (int k = 0; k < h; ++k) {
                w.sigma[static_cast<size_t>(e * h + k)] = e * h + (k + 1) % h;
                w.c[static_cast<size_t>(e * h + k)] = static_cast<double>(sys.base_chi(sys.alpha[static_cast<size_t>(k)]));
            }
        w.m = h;
        w.t = 2;
    } else {
        const auto sys = build_line_system(q, SymplecticLineSystem::Variant::fullturn);
        const int n1 = static_cast<int>(q + 1);
        w.sigma.resize(static_cast<size_t>(2 * n1));
        w.c.resize(static_cast<size_t>(2 * n1));
        for (int e = 0; e < 2; ++e)
            for (int i = 0; i < n1; ++i) {
                w.sigma[static_cast<size_t>(e * n1 + i)] = (1 - e) * n1 + (i + 1) % n1;
                const double sign = e == 0 ? 1.0 : -1.0;
                w.c[static_cast<size_t>(e * n1 + i)] = sign * sys.base_chi(sys.alpha[static_cast<size_t>(i)]);
            }
        w.m = n1;
        w.t = 2;
    }
    const CMat s = family_signature(fam, q);
    const double res = automorphism_residual(s, w);
    if (res > 1e-10) throw NumericFailure("family_automorphism: witness residual " + std::to_string(res));
    if (fam == Family::double_paley_plus) {
        // (D* S D)_{(0,1), s^k(0,1)} = -(D* S D)_{(0,0), s^k(0,0)}
        const Eigen::Index n = s.rows();
        const CMat g = CMat::Identity(n, n) + welch_gamma(n / 2, n) * s;
        const Circulantized cz = circulantize(g, w);
        const CMat ds = detail::switched(s, cz.a);
        const int n1 = static_cast<int>(q + 1);
        int x0 = 0, x1 = n1;
        for (int k = 0; k < n1; ++k) {
            if (std::abs(ds(n1, x1) + ds(0, x0)) > 1e-10)
                throw NumericFailure("family_automorphism: regular-representation identity fails");
            x0 = w.sigma[static_cast<size_t>(x0)];
            x1 = w.sigma[static_cast<size_t>(x1)];
        }
    }
    return w;
}

/// Exhaustive (n <= 12) or budgeted randomized search for an automorphism of cycle type m^t.
inline std::optional<AutomorphismWitness> brute_force_automorphism_search(const CMat& g, int m, int t, long budget,
                                                                          std::uint64_t seed = 1) {
    const int n = static_cast<int>(g.rows());
    if (n != m * t || g.cols() != n) throw InvalidArgument("brute_force_automorphism_search: n must equal m t");
    const double tol = 1e-8;
    const bool exhaustive = n <= 12;
    std::mt19937_64 rng(seed);
    std::vector<int> sigma(static_cast<size_t>(n), -1);
    std::vector<char> used(static_cast<size_t>(n), 0);
    long nodes = 0;
    std::optional<AutomorphismWitness> found;

    auto consistent = [&](int i) {
        const int si = sigma[static_cast<size_t>(i)];
        if (std::abs(std::abs(g(i, i)) - std::abs(g(si, si))) > tol) return false;
        for (int j = 0; j < i; ++j) {
            const int sj = sigma[static_cast<size_t>(j)];
            if (std::abs(std::abs(g(i, j)) - std::abs(g(si, sj))) > tol) return false;
            for (int k = 0; k < j; ++k) {
                const int sk = sigma[static_cast<size_t>(k)];
                const cplx a = g(i, j) * g(j, k) * g(k, i);
                const cplx b = g(si, sj) * g(sj, sk) * g(sk, si);
                if (std::abs(a - b) > tol) return false;
            }
        }
        // partial cycle structure through i
        int x = si, len = 1;
        while (x != i && x <= i && sigma[static_cast<size_t>(x)] >= 0 && len <= m) {
            x = sigma[static_cast<size_t>(x)];
            ++len;
        }
        if (x == i && len != m) return false;
        if (len > m) return false;
        return true;
    };

    auto finish = [&]() -> std::optional<AutomorphismWitness> {
        AutomorphismWitness w;
        w.sigma = sigma;
        w.m = m;
        w.t = t;
        for (int len : w.cycle_type())
            if (len != m) return std::nullopt;
        std::vector<cplx> c(static_cast<size_t>(n), cplx(0.0));
        std::vector<char> known(static_cast<size_t>(n), 0);
        for (int root = 0; root < n; ++root) {
            if (known[static_cast<size_t>(root)]) continue;
            c[static_cast<size_t>(root)] = 1.0;
            known[static_cast<size_t>(root)] = 1;
            std::vector<int> queue{root};
            for (size_t qi = 0; qi < queue.size(); ++qi) {
                const int i = queue[qi];
                for (int j = 0; j < n; ++j) {
                    if (known[static_cast<size_t>(j)]) continue;
                    const cplx gs = g(sigma[static_cast<size_t>(i)], sigma[static_cast<size_t>(j)]);
                    if (std::abs(g(i, j)) < 1e-10 || std::abs(gs) < 1e-10) continue;
                    const cplx cj = c[static_cast<size_t>(i)] * g(i, j) / gs;
                    c[static_cast<size_t>(j)] = cj / std::abs(cj);
                    known[static_cast<size_t>(j)] = 1;
                    queue.push_back(j);
                }
            }
        }
        w.c = c;
        if (!verify_automorphism(g, w, tol)) return std::nullopt;
        return w;
    };

    auto rec = [&](auto&& self, int i) -> bool {
        if (!exhaustive && nodes >= budget) return false;
        if (i == n) {
            found = finish();
            return found.has_value();
        }
        std::vector<int> cand;
        for (int v = 0; v < n; ++v)
            if (!used[static_cast<size_t>(v)]) cand.push_back(v);
        if (!exhaustive) std::shuffle(cand.begin(), cand.end(), rng);
        for (int v : cand) {
            ++nodes;
            sigma[static_cast<size_t>(i)] = v;
            used[static_cast<size_t>(v)] = 1;
            if (consistent(i) && self(self, i + 1)) return true;
            used[static_cast<size_t>(v)] = 0;
            sigma[static_cast<size_t>(i)] = -1;
            if (!exhaustive && nodes >= budget) return false;
        }
        return false;
    };
    rec(rec, 0);
    return found;
}

/// Permutation pi and unimodular a with B_ij = conj(a_i) a_j A_{pi(i), pi(j)}; exhaustive, n <= 10.
inline std::optional<std::pair<std::vector<int>, std::vector<cplx>>> find_switching(const CMat& a, const CMat& b,
                                                                                     double tol) {
    const int n = static_cast<int>(a.rows());
    if (b.rows() != n || a.cols() != n || b.cols() != n) throw InvalidArgument("find_switching: shapes differ");
    if (n > 10) throw UnsupportedInput("find_switching: exhaustive search limited to n <= 10");
    std::vector<int> pi(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pi[static_cast<size_t>(i)] = i;
    do {
        std::vector<cplx> d(static_cast<size_t>(n), cplx(1.0));
        bool ok = true;
        for (int j = 1; j < n && ok; ++j) {
            const cplx src = a(pi[0], pi[static_cast<size_t>(j)]);
            if (std::abs(src) < 1e-12) {
                ok = std::abs(b(0, j)) < tol;
                continue;
            }
            const cplx v = b(0, j) / src;
            ok = std::abs(std::abs(v) - 1.0) <= tol;
            d[static_cast<size_t>(j)] = v / std::abs(v);
        }
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n && ok; ++j) {
                const cplx rhs = std::conj(d[static_cast<size_t>(i)]) * d[static_cast<size_t>(j)] *
                                 a(pi[static_cast<size_t>(i)], pi[static_cast<size_t>(j)]);
                ok = std::abs(b(i, j) - rhs) <= tol;
            }
        if (ok) return std::make_pair(pi, d);
    } while (std::next_permutation(pi.begin(), pi.end()));
    return std::nullopt;
}

}  // namespace etfforge
