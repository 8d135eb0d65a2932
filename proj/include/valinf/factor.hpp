// factor.hpp
// ----------
// GCDs, squarefree decomposition, and factorization:
//   * univariate / bivariate gcd over Q (primitive PRS in y),
//   * Musser squarefree decomposition,
//   * full univariate factorization over Q (Berlekamp mod p + quadratic
//     Hensel lifting + subset recombination),
//   * budgeted bivariate factorization by Hensel lifting along a generic
//     vertical line x = x0, per the classical evaluation/lift/recombine
//     scheme.  Failures degrade to flagged "not further split" parts.

#ifndef VALINF_FACTOR_HPP
#define VALINF_FACTOR_HPP

#include "valinf/poly.hpp"
#include "valinf/resultant.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace valinf {

// ---------------------------------------------------------------------------
// Contents and primitive parts w.r.t. y
// ---------------------------------------------------------------------------

inline Poly1 content_y(const Poly2& p) {
    Poly1 g;
    for (auto& c : p.coeffs_in_y())
        if (!c.zero()) g = poly1_gcd(g, c);
    return g;  // monic, or zero for zero input
}

inline Poly2 divide_content_y(const Poly2& p, const Poly1& cont) {
    auto cs = p.coeffs_in_y();
    for (auto& c : cs) {
        if (c.zero()) continue;
        Poly1 q, r;
        poly1_divrem(c, cont, q, r);
        if (!r.zero()) throw std::logic_error("divide_content_y: inexact");
        c = q;
    }
    return Poly2::from_coeffs_in_y(cs);
}

inline Poly2 primitive_part_y(const Poly2& p) {
    if (p.zero()) return p;
    return divide_content_y(p, content_y(p));
}

// pseudo-remainder of A by B in y
inline Poly2 prem_y(const Poly2& A, const Poly2& B) {
    int db = B.deg_y();
    if (db < 0) throw std::domain_error("prem_y: zero divisor");
    auto bc = B.coeffs_in_y();
    Poly1 lb = bc[db];
    Poly2 LB = Poly2::from_coeffs_in_y({lb});
    Poly2 R = A;
    while (!R.zero() && R.deg_y() >= db) {
        int dr = R.deg_y();
        auto rc = R.coeffs_in_y();
        Poly2 lr = Poly2::from_coeffs_in_y({rc[dr]});
        // R <- lb*R - lr*y^(dr-db)*B
        Poly2 shift;
        shift.t[{0, dr - db}] = Rat(1);
        R = R * LB - B * shift * lr;
    }
    return R;
}

// gcd over Q[x,y], normalized with monic y-content and primitive-in-y part
// scaled so its y-leading univariate coefficient is monic in x.
inline Poly2 gcd_bivariate(Poly2 P, Poly2 Q) {
    if (P.zero()) std::swap(P, Q);
    if (Q.zero()) {
        if (P.zero()) return P;
        Q = P;  // gcd(P,0)=P, fall through to normalization
    }
    if (P.deg_y() == 0 && Q.deg_y() == 0) {
        Poly1 a = P.coeffs_in_y().empty() ? Poly1() : P.coeffs_in_y()[0];
        Poly1 b = Q.coeffs_in_y().empty() ? Poly1() : Q.coeffs_in_y()[0];
        return Poly2::from_coeffs_in_y({poly1_gcd(a, b)});
    }
    Poly1 cg = poly1_gcd(content_y(P), content_y(Q));
    Poly2 A = primitive_part_y(P), B = primitive_part_y(Q);
    if (A.deg_y() < B.deg_y()) std::swap(A, B);
    while (!B.zero() && B.deg_y() > 0) {
        Poly2 R = prem_y(A, B);
        A = B;
        B = R.zero() ? R : primitive_part_y(R);
    }
    Poly2 G = B.zero() ? A : Poly2(Rat(1));
    if (B.zero() == false) G = Poly2(Rat(1));  // coprime primitive parts
    // normalize: leading y-coefficient monic in x
    if (!G.zero()) {
        auto gc = G.coeffs_in_y();
        Rat lead = gc[G.deg_y()].lead();
        G = G * (Rat(1) / lead);
    }
    Poly2 CG = Poly2::from_coeffs_in_y({cg});
    return G * CG;
}

// ---------------------------------------------------------------------------
// Squarefree decomposition (Musser)
// ---------------------------------------------------------------------------

struct SquarefreePart {
    Poly2 part;
    int multiplicity;
};

inline std::vector<std::pair<Poly1, int>> squarefree_poly1(Poly1 a) {
    std::vector<std::pair<Poly1, int>> out;
    if (a.deg() <= 0) return out;
    a = a * (Rat(1) / a.lead());
    Poly1 g = poly1_gcd(a, a.derivative());
    Poly1 b, r;
    poly1_divrem(a, g, b, r);
    int i = 1;
    while (b.deg() > 0) {
        Poly1 c = poly1_gcd(b, g);
        Poly1 f, r2;
        poly1_divrem(b, c, f, r2);
        if (f.deg() > 0) out.push_back({f, i});
        b = c;
        if (!g.zero() && g.deg() >= 0) {
            Poly1 q;
            poly1_divrem(g, c, q, r2);
            g = q;
        }
        ++i;
    }
    return out;
}

// Squarefree factorization of a bivariate polynomial: product of
// part^multiplicity equals P up to a rational unit; parts are pairwise
// coprime and squarefree.  Constants give the empty list.
inline std::vector<SquarefreePart> squarefree_factor(const Poly2& P) {
    if (P.zero()) throw std::domain_error("squarefree_factor: zero polynomial");
    std::vector<SquarefreePart> out;
    if (P.deg() == 0) return out;

    // split off the univariate content in x, decompose it univariately
    Poly1 cont = content_y(P);
    Poly2 pp = divide_content_y(P, cont);
    for (auto& [f, m] : squarefree_poly1(cont)) {
        Poly2 fx;
        for (size_t i = 0; i < f.c.size(); ++i) fx.add_term((int)i, 0, f.c[i]);
        out.push_back({fx, m});
    }
    if (pp.deg_y() == 0) {
        // pp is a constant once the content is removed
        return out;
    }
    // Musser on the y-primitive part
    Poly2 a = pp;
    Poly2 g = gcd_bivariate(a, a.derivative_y());
    Poly2 b;
    if (!poly2_divides(g, a, &b)) throw std::logic_error("squarefree: division failure");
    int i = 1;
    while (b.deg_y() > 0 || b.deg() > 0) {
        Poly2 c = gcd_bivariate(b, g);
        Poly2 f;
        if (!poly2_divides(c, b, &f)) throw std::logic_error("squarefree: division failure");
        if (f.deg() > 0) out.push_back({f, i});
        b = c;
        Poly2 gq;
        if (!poly2_divides(c, g, &gq)) throw std::logic_error("squarefree: division failure");
        g = gq;
        ++i;
        if (b.deg() == 0) break;
    }
    // merge parts with equal multiplicity arising from content and pp
    std::map<int, Poly2> merged;
    for (auto& sp : out) {
        auto it = merged.find(sp.multiplicity);
        if (it == merged.end()) merged[sp.multiplicity] = sp.part;
        else it->second = it->second * sp.part;
    }
    out.clear();
    for (auto& [m, f] : merged) out.push_back({f, m});
    return out;
}

// ---------------------------------------------------------------------------
// Univariate factorization over Q (Zassenhaus)
// ---------------------------------------------------------------------------

namespace zass {

using ZPoly = std::vector<Int>;  // c[i] * t^i

inline void ztrim(ZPoly& a) {
    while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}
inline int zdeg(const ZPoly& a) { return (int)a.size() - 1; }

inline ZPoly zmul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    ztrim(r);
    return r;
}
inline ZPoly zsub(const ZPoly& a, const ZPoly& b) {
    ZPoly r = a;
    if (r.size() < b.size()) r.resize(b.size(), Int(0));
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    ztrim(r);
    return r;
}

inline Int smod(const Int& a, const Int& m) {
    Int r = a % m;
    if (sgn(r) < 0) r += m;
    if (r * 2 > m) r -= m;  // symmetric representative
    return r;
}
inline ZPoly zmod(ZPoly a, const Int& m) {
    for (auto& c : a) c = smod(c, m);
    ztrim(a);
    return a;
}

// division by a monic divisor, coefficients mod m
inline void zdivrem_monic(const ZPoly& a, const ZPoly& b, const Int& m, ZPoly& q, ZPoly& r) {
    r = zmod(a, m);
    q.clear();
    int db = zdeg(b);
    if (db < 0) throw std::domain_error("zdivrem_monic: zero divisor");
    if (smod(b.back() - 1, m) != 0) throw std::logic_error("zdivrem_monic: divisor not monic");
    if (zdeg(r) >= db) q.assign(zdeg(r) - db + 1, Int(0));
    while (zdeg(r) >= db) {
        Int k = r.back();
        int s = zdeg(r) - db;
        q[s] = smod(q[s] + k, m);
        for (int i = 0; i <= db; ++i) r[s + i] = smod(r[s + i] - k * b[i], m);
        ztrim(r);
    }
    ztrim(q);
}

// extended euclid mod a prime p: s*a + t*b = g (g monic)
inline void zxgcd_modp(ZPoly a, ZPoly b, const Int& p, ZPoly& g, ZPoly& s, ZPoly& t) {
    auto inv = [&](const Int& x) {
        Int r;
        if (!mpz_invert(r.get_mpz_t(), Int(smod(x, p) % p).get_mpz_t(), p.get_mpz_t()))
            throw std::domain_error("zxgcd_modp: non-invertible");
        return r;
    };
    auto make_monic = [&](ZPoly& f, ZPoly& u, ZPoly& v) {
        if (f.empty()) return;
        Int iv = inv(f.back());
        for (auto& c : f) c = smod(c * iv, p);
        for (auto& c : u) c = smod(c * iv, p);
        for (auto& c : v) c = smod(c * iv, p);
    };
    ZPoly r0 = zmod(a, p), r1 = zmod(b, p);
    ZPoly s0 = {Int(1)}, s1 = {}, t0 = {}, t1 = {Int(1)};
    while (!r1.empty()) {
        // divrem r0 by r1 mod p (r1 not nec. monic: scale)
        ZPoly q, r;
        ZPoly r1m = r1;
        Int lead = r1.back();
        Int il = inv(lead);
        for (auto& c : r1m) c = smod(c * il, p);
        zdivrem_monic(r0, r1m, p, q, r);
        for (auto& c : q) c = smod(c * il, p);
        ZPoly ns = zsub(s0, zmod(zmul(q, s1), p)), nt = zsub(t0, zmod(zmul(q, t1), p));
        r0 = r1; r1 = zmod(r, p);
        s0 = s1; s1 = zmod(ns, p);
        t0 = t1; t1 = zmod(nt, p);
    }
    g = r0; s = s0; t = t0;
    make_monic(g, s, t);
}

// Berlekamp over F_p for a monic squarefree input; returns monic factors.
std::vector<ZPoly> berlekamp(const ZPoly& f, const Int& p);

// quadratic Hensel lifting of a monic coprime pair, and the factor tree
void hensel_pair(const ZPoly& f, ZPoly& g, ZPoly& h, ZPoly& s, ZPoly& t, const Int& p,
                 const Int& target);
void hensel_tree(const ZPoly& f, std::vector<ZPoly>& factors, const Int& p, const Int& target);

}  // namespace zass

struct UniFactorResult {
    // irreducible (over Q) monic factors with multiplicities; unit ignored
    std::vector<std::pair<Poly1, int>> factors;
    bool certified = true;  // false when the recombination budget was exceeded
};

UniFactorResult factor_poly1(const Poly1& f);

// ---------------------------------------------------------------------------
// Bivariate factorization, best effort
// ---------------------------------------------------------------------------

struct BivFactor {
    Poly2 factor;
    bool irreducible_certified;
};

struct BivFactorResult {
    std::vector<BivFactor> factors;  // pairwise coprime, squarefree input assumed
    bool complete = true;            // false when some part was left unsplit
};

// Factor a squarefree bivariate polynomial over Q into irreducible factors
// (certified) where the lift/recombination succeeds within budget.
BivFactorResult factor_bivariate_squarefree(const Poly2& Q, int subset_budget = 12);

}  // namespace valinf

#endif  // VALINF_FACTOR_HPP
