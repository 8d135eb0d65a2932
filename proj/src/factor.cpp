// factor.cpp
// ----------
// Zassenhaus univariate factorization and the bivariate Hensel lift.

#include "valinf/factor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace valinf {
namespace zass {

namespace {

ZPoly zadd(const ZPoly& a, const ZPoly& b) {
    ZPoly r = a;
    if (r.size() < b.size()) r.resize(b.size(), Int(0));
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    ztrim(r);
    return r;
}

ZPoly zmulp(const ZPoly& a, const ZPoly& b, const Int& p) { return zmod(zmul(a, b), p); }

ZPoly zpow_mod(ZPoly base, Int e, const ZPoly& f, const Int& p) {
    ZPoly r = {Int(1)};
    while (sgn(e) > 0) {
        if (mpz_odd_p(e.get_mpz_t())) {
            ZPoly q, rem;
            zdivrem_monic(zmulp(r, base, p), f, p, q, rem);
            r = rem;
        }
        ZPoly q, rem;
        zdivrem_monic(zmulp(base, base, p), f, p, q, rem);
        base = rem;
        e >>= 1;
    }
    return r;
}

ZPoly zgcd_modp(ZPoly a, ZPoly b, const Int& p) {
    ZPoly g, s, t;
    zxgcd_modp(a, b, p, g, s, t);
    return g;
}

}  // namespace

std::vector<ZPoly> berlekamp(const ZPoly& f, const Int& p) {
    int n = zdeg(f);
    if (n <= 1) return {f};
    // rows of the Frobenius matrix: x^(i*p) mod f
    std::vector<std::vector<Int>> Q(n, std::vector<Int>(n, Int(0)));
    ZPoly xp = zpow_mod({Int(0), Int(1)}, p, f, p);
    ZPoly cur = {Int(1)};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= zdeg(cur); ++j) Q[i][j] = ((cur[j] % p) + p) % p;
        ZPoly q, rem;
        zdivrem_monic(zmul(cur, xp), f, p, q, rem);
        cur = zmod(rem, p);
    }
    // kernel of v -> v*(Q - I): row-reduce (Q - I)^T
    std::vector<std::vector<Int>> A(n, std::vector<Int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            A[i][j] = ((Q[j][i] - (i == j ? 1 : 0)) % p + p) % p;
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int piv = -1;
        for (int r = rank; r < n; ++r)
            if (sgn(A[r][col]) != 0) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(A[rank], A[piv]);
        Int inv;
        mpz_invert(inv.get_mpz_t(), A[rank][col].get_mpz_t(), p.get_mpz_t());
        for (int j = 0; j < n; ++j) A[rank][j] = (A[rank][j] * inv) % p;
        for (int r = 0; r < n; ++r) {
            if (r == rank) continue;
            Int k = A[r][col];
            if (sgn(k) == 0) continue;
            for (int j = 0; j < n; ++j) A[r][j] = ((A[r][j] - k * A[rank][j]) % p + p) % p;
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<ZPoly> basis;
    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col) is_pivot[c] = true;
    for (int col = 0; col < n; ++col) {
        if (is_pivot[col]) continue;
        ZPoly v(n, Int(0));
        v[col] = 1;
        for (int r = 0; r < rank; ++r) v[pivot_col[r]] = smod(-A[r][col], p);
        ztrim(v);
        basis.push_back(v);
    }
    size_t r_factors = basis.size() + 1;  // kernel contains the constants? no:
    // kernel of (Q-I) includes the constant vector; basis excludes pivots, so
    // count factors as the full nullity:
    r_factors = basis.size();
    std::vector<ZPoly> factors = {zmod(f, p)};
    if (r_factors <= 1) return factors;
    bool progress = true;
    while (factors.size() < r_factors && progress) {
        progress = false;
        for (const ZPoly& v : basis) {
            if (factors.size() >= r_factors) break;
            for (size_t gi = 0; gi < factors.size(); ++gi) {
                if (zdeg(factors[gi]) <= 1) continue;
                for (Int s(0); s < p; ++s) {
                    ZPoly vs = v;
                    if (vs.empty()) vs = {Int(0)};
                    vs[0] = smod(vs[0] - s, p);
                    ztrim(vs);
                    if (vs.empty()) continue;
                    ZPoly d = zgcd_modp(factors[gi], vs, p);
                    if (zdeg(d) > 0 && zdeg(d) < zdeg(factors[gi])) {
                        ZPoly q, rem;
                        // make d monic then divide
                        Int inv;
                        mpz_invert(inv.get_mpz_t(), Int(((d.back() % p) + p) % p).get_mpz_t(),
                                   p.get_mpz_t());
                        for (auto& c : d) c = smod(c * inv, p);
                        zdivrem_monic(factors[gi], d, p, q, rem);
                        factors[gi] = q;
                        factors.push_back(d);
                        progress = true;
                        if (factors.size() >= r_factors) break;
                    }
                }
                if (factors.size() >= r_factors) break;
            }
        }
    }
    return factors;
}

void hensel_pair(const ZPoly& f, ZPoly& g, ZPoly& h, ZPoly& s, ZPoly& t, const Int& p,
                 const Int& target) {
    // f ≡ g*h and s*g + t*h ≡ 1 (mod m); f, g, h monic.  One pass doubles m.
    Int m = p;
    while (m < target) {
        Int m2 = m * m;
        ZPoly e = zmod(zsub(f, zmul(g, h)), m2);
        ZPoly q, r;
        zdivrem_monic(zmod(zmul(s, e), m2), h, m2, q, r);
        g = zmod(zadd(g, zadd(zmul(t, e), zmul(q, g))), m2);
        h = zmod(zadd(h, r), m2);
        ZPoly b = zmod(zsub(zadd(zmul(s, g), zmul(t, h)), {Int(1)}), m2);
        ZPoly c, d;
        zdivrem_monic(zmod(zmul(s, b), m2), h, m2, c, d);
        s = zmod(zsub(s, d), m2);
        t = zmod(zsub(zsub(t, zmod(zmul(t, b), m2)), zmod(zmul(c, g), m2)), m2);
        m = m2;
    }
}

void hensel_tree(const ZPoly& f, std::vector<ZPoly>& factors, const Int& p, const Int& target) {
    if (factors.size() <= 1) {
        if (!factors.empty()) factors[0] = zmod(f, target);
        return;
    }
    size_t half = factors.size() / 2;
    ZPoly g = {Int(1)}, h = {Int(1)};
    for (size_t i = 0; i < half; ++i) g = zmod(zmul(g, factors[i]), p);
    for (size_t i = half; i < factors.size(); ++i) h = zmod(zmul(h, factors[i]), p);
    ZPoly gg, s, t;
    zxgcd_modp(g, h, p, gg, s, t);
    if (zdeg(gg) != 0) throw std::logic_error("hensel_tree: factors not coprime mod p");
    // scale Bezout so that s*g + t*h = 1 (gg is a nonzero constant)
    Int inv;
    mpz_invert(inv.get_mpz_t(), Int(((gg[0] % p) + p) % p).get_mpz_t(), p.get_mpz_t());
    for (auto& c : s) c = smod(c * inv, p);
    for (auto& c : t) c = smod(c * inv, p);
    ZPoly gl = g, hl = h;
    hensel_pair(zmod(f, target), gl, hl, s, t, p, target);
    std::vector<ZPoly> left(factors.begin(), factors.begin() + half);
    std::vector<ZPoly> right(factors.begin() + half, factors.end());
    hensel_tree(gl, left, p, target);
    hensel_tree(hl, right, p, target);
    factors.clear();
    factors.insert(factors.end(), left.begin(), left.end());
    factors.insert(factors.end(), right.begin(), right.end());
}

}  // namespace zass

namespace {

using zass::ZPoly;

Poly1 from_zpoly(const ZPoly& f) {
    Poly1 r;
    for (size_t i = 0; i < f.size(); ++i) r.set(i, Rat(f[i]));
    return r;
}

// Mignotte-style bound on coefficients of monic factors of monic f.
Int factor_bound(const ZPoly& f) {
    Int norm2 = 0;
    for (auto& c : f) norm2 += c * c;
    Int s;
    mpz_sqrt(s.get_mpz_t(), norm2.get_mpz_t());
    s += 1;
    return (Int(1) << (zass::zdeg(f) + 1)) * s;
}

std::vector<ZPoly> factor_monic_squarefree(const ZPoly& F, bool& certified, int subset_budget) {
    certified = true;
    if (zass::zdeg(F) <= 1) return {F};
    Int p = 1009;
    for (int tries = 0; tries < 500; ++tries) {
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        ZPoly fp = zass::zmod(F, p);
        if (zass::zdeg(fp) != zass::zdeg(F)) continue;
        ZPoly der;
        for (size_t i = 1; i < fp.size(); ++i) der.push_back(zass::smod(Int((long)i) * fp[i], p));
        zass::ztrim(der);
        ZPoly g, s, t;
        zass::zxgcd_modp(fp, der, p, g, s, t);
        if (zass::zdeg(g) == 0) break;
    }
    ZPoly fp = zass::zmod(F, p);
    std::vector<ZPoly> modular = zass::berlekamp(fp, p);
    for (auto& g : modular) {
        Int inv;
        mpz_invert(inv.get_mpz_t(), Int(((g.back() % p) + p) % p).get_mpz_t(), p.get_mpz_t());
        for (auto& c : g) c = zass::smod(c * inv, p);
    }
    if (modular.size() == 1) return {F};
    if ((int)modular.size() > subset_budget + 8) {
        certified = false;
        return {F};
    }
    Int bound = factor_bound(F);
    Int target = p;
    while (target < 2 * bound + 1) target *= target;
    std::vector<ZPoly> lifted = modular;
    zass::hensel_tree(F, lifted, p, target);

    std::vector<ZPoly> result;
    std::vector<int> alive(lifted.size());
    std::iota(alive.begin(), alive.end(), 0);
    ZPoly rem = F;
    size_t csize = 1;
    long attempts = 0;
    const long attempt_budget = 1L << std::min(subset_budget + 4, 22);
    while (csize <= alive.size() && !alive.empty()) {
        bool found = false;
        std::vector<int> idx(csize);
        std::function<bool(size_t, size_t)> rec = [&](size_t start, size_t k) -> bool {
            if (++attempts > attempt_budget) return false;
            if (k == csize) {
                ZPoly cand = {Int(1)};
                for (size_t a = 0; a < csize; ++a)
                    cand = zass::zmod(zass::zmul(cand, lifted[alive[idx[a]]]), target);
                if (zass::zdeg(cand) > zass::zdeg(rem)) return false;
                ZPoly q, r;
                zass::zdivrem_monic(rem, cand, target, q, r);
                if (!r.empty()) return false;
                if (zass::zmul(cand, q) != rem) return false;  // exact over Z
                result.push_back(cand);
                rem = q;
                std::vector<int> na;
                for (size_t a2 = 0, b = 0; a2 < alive.size(); ++a2) {
                    if (b < csize && (int)a2 == idx[b]) { ++b; continue; }
                    na.push_back(alive[a2]);
                }
                alive = na;
                return true;
            }
            for (size_t i = start; i < alive.size(); ++i) {
                idx[k] = (int)i;
                if (rec(i + 1, k + 1)) return true;
            }
            return false;
        };
        found = rec(0, 0);
        if (attempts > attempt_budget) {
            certified = false;
            break;
        }
        if (!found) ++csize;
    }
    if (zass::zdeg(rem) > 0) result.push_back(rem);
    return result;
}

}  // namespace

UniFactorResult factor_poly1(const Poly1& f) {
    UniFactorResult out;
    if (f.deg() <= 0) return out;
    for (auto& [part, mult] : squarefree_poly1(f)) {
        Poly1 g = part;
        int k = 0;
        while (g.deg() >= 0 && sgn(g.get(0)) == 0) {
            Poly1 h;
            for (size_t i = 1; i < g.c.size(); ++i) h.set(i - 1, g.c[i]);
            g = h;
            ++k;
        }
        if (k > 0) {
            Poly1 t;
            t.set(1, Rat(1));
            out.factors.push_back({t, mult});
        }
        if (g.deg() < 1) continue;
        // primitive integer form
        Int den(1);
        for (auto& c : g.c) den = lcm(den, c.get_den());
        ZPoly gi(g.c.size());
        for (size_t i = 0; i < g.c.size(); ++i)
            gi[i] = Int(g.c[i].get_num() * (den / g.c[i].get_den()));
        Int cont(0);
        for (auto& c : gi) cont = gcd(cont, c);
        for (auto& c : gi) c /= cont;
        int n = zass::zdeg(gi);
        if (n == 1) {
            Poly1 q = from_zpoly(gi);
            q = q * (Rat(1) / q.lead());
            out.factors.push_back({q, mult});
            continue;
        }
        // monicize: M(t) = lc^(n-1) * g(t/lc)
        Int lc = gi.back();
        ZPoly monic(gi.size());
        for (int i = 0; i < n; ++i) monic[i] = gi[i] * int_pow(lc, (unsigned long)(n - 1 - i));
        monic[n] = 1;
        bool certified = true;
        std::vector<ZPoly> fs = factor_monic_squarefree(monic, certified, 12);
        out.certified = out.certified && certified;
        for (auto& Fz : fs) {
            // map back: factor(t) -> primitive part of factor(lc*t)
            ZPoly back(Fz.size());
            for (size_t i = 0; i < Fz.size(); ++i) back[i] = Fz[i] * int_pow(lc, (unsigned long)i);
            Int c2(0);
            for (auto& c : back) c2 = gcd(c2, c);
            if (sgn(c2) != 0)
                for (auto& c : back) c /= c2;
            Poly1 q = from_zpoly(back);
            if (q.deg() >= 1) {
                q = q * (Rat(1) / q.lead());
                out.factors.push_back({q, mult});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bivariate
// ---------------------------------------------------------------------------

namespace {

// truncated power series in s with Poly1-in-y coefficients
using SPoly = std::vector<Poly1>;

SPoly smul(const SPoly& a, const SPoly& b, int N) {
    SPoly r(N);
    for (int i = 0; i < (int)a.size() && i < N; ++i) {
        if (a[i].zero()) continue;
        for (int j = 0; j + i < N && j < (int)b.size(); ++j)
            r[i + j] = r[i + j] + a[i] * b[j];
    }
    return r;
}

bool szero(const SPoly& a) {
    for (auto& c : a)
        if (!c.zero()) return false;
    return true;
}

// divide by b whose s^0 coefficient is y-monic of maximal y-degree in b
void sdivrem(const SPoly& a, const SPoly& b, int N, SPoly& q, SPoly& r) {
    int db = b.empty() ? -1 : b[0].deg();
    q.assign(N, Poly1());
    SPoly rem(N);
    for (int i = 0; i < N && i < (int)a.size(); ++i) rem[i] = a[i];
    bool progress = true;
    while (progress) {
        progress = false;
        for (int k = 0; k < N; ++k) {
            while (db >= 0 && rem[k].deg() >= db) {
                Rat lead = rem[k].lead() / b[0].lead();
                int dy = rem[k].deg() - db;
                Poly1 qt;
                qt.set(dy, lead);
                q[k] = q[k] + qt;
                for (int j = 0; j + k < N && j < (int)b.size(); ++j)
                    rem[k + j] = rem[k + j] - qt * b[j];
                progress = true;
            }
        }
    }
    r = rem;
}

}  // namespace

BivFactorResult factor_bivariate_squarefree(const Poly2& Qin, int subset_budget) {
    BivFactorResult out;
    if (Qin.zero() || Qin.deg() == 0) return out;
    Poly1 cont = content_y(Qin);
    Poly2 Q = divide_content_y(Qin, cont);
    if (cont.deg() > 0) {
        UniFactorResult cf = factor_poly1(cont);
        out.complete = out.complete && cf.certified;
        for (auto& [g, m2] : cf.factors) {
            Poly2 gx;
            for (size_t i = 0; i < g.c.size(); ++i) gx.add_term((int)i, 0, g.c[i]);
            out.factors.push_back({gx, cf.certified});
        }
    }
    int m = Q.deg_y();
    if (m == 0) {
        if (Q.deg() > 0) out.factors.push_back({Q, true});
        return out;
    }
    if (m == 1) {
        out.factors.push_back({Q, true});  // y-primitive and linear in y
        return out;
    }

    // monicize in y: Q* = lc(x)^(m-1) * Q(x, y/lc(x)); the y^m coefficient is 1
    auto qc = Q.coeffs_in_y();
    Poly1 lc = qc[m];
    Poly2 Qstar = Poly2::mono(0, m, Rat(1));
    for (int j = 0; j < m; ++j) {
        Poly1 cj = qc[j];
        for (int k = 0; k < m - 1 - j; ++k) cj = cj * lc;
        for (size_t i = 0; i < cj.c.size(); ++i) Qstar.add_term((int)i, j, cj.c[i]);
    }
    // choose x0 with lc(x0) != 0 and squarefree full-degree specialization
    Rat x0;
    bool found_x0 = false;
    for (long c = 0; c <= 80 && !found_x0; ++c) {
        for (long sign_c : {c, -c}) {
            Rat cand(sign_c);
            if (sgn(lc.eval(cand)) == 0) continue;
            Poly1 u;
            for (auto& [mm, co] : Qstar.t) u.set(mm.j, u.get(mm.j) + co * rat_pow(cand, mm.i));
            if (u.deg() != m) continue;
            if (poly1_gcd(u, u.derivative()).deg() != 0) continue;
            x0 = cand;
            found_x0 = true;
            break;
        }
    }
    if (!found_x0) {
        out.factors.push_back({Q, false});
        out.complete = false;
        return out;
    }
    Poly2 Qs = Qstar.subst(Poly2::var_x() + Poly2(Rat(x0)), Poly2::var_y());
    int N = Qs.deg_x() + 1;
    Poly1 u0;
    for (auto& [mm, co] : Qs.t)
        if (mm.i == 0) u0.set(mm.j, u0.get(mm.j) + co);
    UniFactorResult uf = factor_poly1(u0);
    if (!uf.certified) {
        out.factors.push_back({Q, false});
        out.complete = false;
        return out;
    }
    std::vector<Poly1> leaves;
    for (auto& [g, mult] : uf.factors)
        for (int i = 0; i < mult; ++i) leaves.push_back(g);
    if (leaves.size() == 1) {
        out.factors.push_back({Q, true});
        return out;
    }
    if ((int)leaves.size() > subset_budget) {
        out.factors.push_back({Q, false});
        out.complete = false;
        return out;
    }
    SPoly f(N);
    for (auto& [mm, co] : Qs.t) f[mm.i].set(mm.j, f[mm.i].get(mm.j) + co);

    std::function<std::vector<SPoly>(const SPoly&, std::vector<Poly1>)> lift =
        [&](const SPoly& F, std::vector<Poly1> lv) -> std::vector<SPoly> {
        if (lv.size() == 1) return {F};
        size_t half = lv.size() / 2;
        Poly1 g0(Rat(1)), h0(Rat(1));
        for (size_t i = 0; i < half; ++i) g0 = g0 * lv[i];
        for (size_t i = half; i < lv.size(); ++i) h0 = h0 * lv[i];
        Poly1 r0 = g0, r1 = h0, s0(Rat(1)), s1, t0, t1(Rat(1));
        while (!r1.zero()) {
            Poly1 q, r;
            poly1_divrem(r0, r1, q, r);
            Poly1 ns = s0 - q * s1, nt = t0 - q * t1;
            r0 = r1; r1 = r;
            s0 = s1; s1 = ns;
            t0 = t1; t1 = nt;
        }
        Rat ic = Rat(1) / r0.c[0];
        Poly1 S = s0 * ic, T = t0 * ic;  // S*g0 + T*h0 = 1
        SPoly G(N), H(N);
        G[0] = g0;
        H[0] = h0;
        for (int k = 1; k < N; ++k) {
            SPoly GH = smul(G, H, k + 1);
            Poly1 ek = (k < (int)F.size() ? F[k] : Poly1()) - GH[k];
            if (ek.zero()) continue;
            Poly1 q, r;
            poly1_divrem(T * ek, g0, q, r);
            G[k] = G[k] + r;
            H[k] = H[k] + S * ek + q * h0;
        }
        auto left = lift(G, std::vector<Poly1>(lv.begin(), lv.begin() + half));
        auto right = lift(H, std::vector<Poly1>(lv.begin() + half, lv.end()));
        left.insert(left.end(), right.begin(), right.end());
        return left;
    };
    std::vector<SPoly> lifted = lift(f, leaves);

    auto spoly_to_poly2 = [&](const SPoly& a) {
        Poly2 r;
        for (int k = 0; k < (int)a.size(); ++k)
            for (size_t j = 0; j < a[k].c.size(); ++j) r.add_term(k, (int)j, a[k].c[j]);
        return r;
    };

    std::vector<int> alive(lifted.size());
    std::iota(alive.begin(), alive.end(), 0);
    SPoly rem = f;
    Poly2 remaining = Q;
    size_t csize = 1;
    while (csize <= alive.size() && !alive.empty()) {
        bool found = false;
        std::vector<int> idx(csize);
        std::function<bool(size_t, size_t)> rec = [&](size_t start, size_t kk) -> bool {
            if (kk == csize) {
                SPoly cand(N);
                cand[0] = Poly1(Rat(1));
                for (size_t a = 0; a < csize; ++a) cand = smul(cand, lifted[alive[idx[a]]], N);
                Poly2 cpoly = spoly_to_poly2(cand);
                Poly2 gstar = cpoly.subst(Poly2::var_x() - Poly2(Rat(x0)), Poly2::var_y());
                Poly2 lcx;
                for (size_t i = 0; i < lc.c.size(); ++i) lcx.add_term((int)i, 0, lc.c[i]);
                Poly2 g = gstar.subst(Poly2::var_x(), Poly2::var_y() * lcx);
                if (g.zero()) return false;
                g = primitive_part_y(g);
                Poly2 quot;
                if (g.deg() > 0 && poly2_divides(g, remaining, &quot)) {
                    out.factors.push_back({g, true});
                    remaining = quot;
                    SPoly q2, r2;
                    sdivrem(rem, cand, N, q2, r2);
                    if (szero(r2)) rem = q2;
                    std::vector<int> na;
                    for (size_t a2 = 0, b = 0; a2 < alive.size(); ++a2) {
                        if (b < csize && (int)a2 == idx[b]) { ++b; continue; }
                        na.push_back(alive[a2]);
                    }
                    alive = na;
                    return true;
                }
                return false;
            }
            for (size_t i = start; i < alive.size(); ++i) {
                idx[kk] = (int)i;
                if (rec(i + 1, kk + 1)) return true;
            }
            return false;
        };
        found = rec(0, 0);
        if (!found) ++csize;
    }
    if (remaining.deg() > 0) out.factors.push_back({remaining, alive.size() <= 1});
    return out;
}

}  // namespace valinf
