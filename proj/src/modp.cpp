// modp.cpp
// --------
// Screening kernels over prime fields.  The OpenMP variants parallelize over
// primes / trials; results are combined with order-independent max-reductions
// so both builds return identical values.

#include "valinf/modp.hpp"

#include <algorithm>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace valinf {

std::vector<int> screened_degrees(const Endo& f, int nmax, const std::vector<uint64_t>& primes,
                                  bool parallel, int* used_primes) {
    std::vector<std::vector<int>> per_prime(primes.size());
    std::vector<char> usable(primes.size(), 0);

    auto work = [&](size_t i) {
        auto fp = reduce_endo(f, primes[i]);
        if (!fp) return;
        usable[i] = 1;
        per_prime[i] = degree_seq_mod_p(*fp, nmax);
    };

    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (long i = 0; i < (long)primes.size(); ++i) work((size_t)i);
    } else {
        for (size_t i = 0; i < primes.size(); ++i) work(i);
    }

    int used = 0;
    std::vector<int> out(nmax, -1);
    for (size_t i = 0; i < primes.size(); ++i) {
        if (!usable[i]) continue;
        ++used;
        for (int n = 0; n < nmax; ++n) out[n] = std::max(out[n], per_prime[i][n]);
    }
    if (used_primes) *used_primes = used;
    if (used == 0) throw std::runtime_error("screened_degrees: all primes divide a denominator");
    return out;
}

// ---------------------------------------------------------------------------

VecP vmul(const VecP& a, const VecP& b, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    VecP r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + (unsigned __int128)a[i] * b[j]) % p;
    }
    vtrim(r);
    return r;
}

static void vdivrem(const VecP& a, const VecP& b, uint64_t p, VecP& q, VecP& r) {
    r = a;
    vtrim(r);
    q.clear();
    if (b.empty()) throw std::domain_error("vdivrem: zero divisor");
    uint64_t il = ZpV::invmod(b.back(), p);
    if (r.size() >= b.size()) q.assign(r.size() - b.size() + 1, 0);
    while (r.size() >= b.size()) {
        uint64_t k = ZpV::mulmod(r.back(), il, p);
        size_t s = r.size() - b.size();
        q[s] = k;
        for (size_t i = 0; i < b.size(); ++i) {
            uint64_t sub = ZpV::mulmod(k, b[i], p);
            r[s + i] = (r[s + i] + p - sub) % p;
        }
        vtrim(r);
    }
}

VecP vgcd(VecP a, VecP b, uint64_t p) {
    vtrim(a);
    vtrim(b);
    while (!b.empty()) {
        VecP q, r;
        vdivrem(a, b, p, q, r);
        a = b;
        b = r;
    }
    if (!a.empty()) {
        uint64_t il = ZpV::invmod(a.back(), p);
        for (auto& c : a) c = ZpV::mulmod(c, il, p);
    }
    return a;
}

int squarefree_degree(const VecP& a, uint64_t p) {
    if (a.empty()) return -1;
    VecP d;
    for (size_t i = 1; i < a.size(); ++i)
        d.push_back(ZpV::mulmod(a[i], i % p, p));
    vtrim(d);
    if (d.empty()) return 0;  // p-th power artifacts, degenerate
    VecP g = vgcd(a, d, p);
    return (int)a.size() - 1 - ((int)g.size() - 1);
}

VecP resultant_y_modp(const Poly2p& P, const Poly2p& Q) {
    // Evaluation-interpolation: deg_x bound of Res is dxP*dyQ + dxQ*dyP.
    // For desk-size inputs a direct Sylvester/Bareiss over F_p[x] would also
    // do; evaluation keeps the inner loop in uint64.
    if (P.zero() || Q.zero()) return {};
    uint64_t p = 0;
    for (auto& [m, c] : P.t) { p = c.p; break; }
    int dyP = P.deg_y(), dyQ = Q.deg_y();
    int bound = P.deg_x() * dyQ + Q.deg_x() * dyP + 1;
    if ((uint64_t)bound + 2 >= p) return {};  // tiny prime, give up
    std::vector<uint64_t> xs, ys;
    auto lead_of = [&](const Poly2p& F, int dy) {
        Poly1p l;
        for (auto& [m, c] : F.t)
            if (m.j == dy) l.set(m.i, c);
        return l;
    };
    Poly1p lcP = lead_of(P, dyP), lcQ = lead_of(Q, dyQ);
    auto eval_uni = [&](const Poly1p& f, uint64_t x) {
        uint64_t acc = 0;
        for (size_t i = f.c.size(); i-- > 0;)
            acc = (ZpV::mulmod(acc, x, p) + f.c[i].v) % p;
        return acc;
    };
    auto specialize = [&](const Poly2p& F, uint64_t x) {
        // coefficients of y^j after substituting x
        std::vector<uint64_t> ps(std::max(F.deg_x(), 0) + 1);
        ps[0] = 1;
        for (size_t i = 1; i < ps.size(); ++i) ps[i] = ZpV::mulmod(ps[i - 1], x, p);
        VecP out((size_t)F.deg_y() + 1, 0);
        for (auto& [m, c] : F.t) out[m.j] = (out[m.j] + ZpV::mulmod(c.v, ps[m.i], p)) % p;
        vtrim(out);
        return out;
    };
    auto resultant_uni = [&](VecP A, VecP B) -> uint64_t {
        // PRS-based univariate resultant over F_p
        vtrim(A);
        vtrim(B);
        if (A.empty() || B.empty()) return 0;
        uint64_t res = 1;
        int s = 1;
        while (true) {
            int da = (int)A.size() - 1, db = (int)B.size() - 1;
            if (db == 0) {
                res = ZpV::mulmod(res, ZpV::powmod(B[0], da, p), p);
                break;
            }
            VecP q, r;
            vdivrem(A, B, p, q, r);
            int dr = (int)r.size() - 1;
            if (r.empty()) return 0;
            if ((da & 1) && (db & 1)) s = -s;
            uint64_t lb = B.back();
            res = ZpV::mulmod(res, ZpV::powmod(lb, da - dr, p), p);
            A = B;
            B = r;
        }
        if (s < 0) res = (p - res) % p;
        return res;
    };
    xs.reserve(bound + 1);
    ys.reserve(bound + 1);
    uint64_t x = 0;
    while ((int)xs.size() <= bound) {
        if (x >= p) return {};
        // skip points where either leading coefficient vanishes (degree drop)
        if (eval_uni(lcP, x) != 0 && eval_uni(lcQ, x) != 0) {
            VecP A = specialize(P, x), B = specialize(Q, x);
            xs.push_back(x);
            ys.push_back(resultant_uni(A, B));
        }
        ++x;
    }
    // Lagrange interpolation
    size_t n = xs.size();
    VecP num(1, 1);  // prod (t - xs[i]) built incrementally, and divided back out
    VecP acc;        // result accumulator
    for (size_t i = 0; i < n; ++i) {
        // basis_i(t) = prod_{j != i} (t - xs[j]) / (xs[i] - xs[j])
        VecP basis(1, 1);
        uint64_t denom = 1;
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            basis = vmul(basis, VecP{(p - xs[j]) % p, 1}, p);
            denom = ZpV::mulmod(denom, (xs[i] + p - xs[j]) % p, p);
        }
        uint64_t k = ZpV::mulmod(ys[i], ZpV::invmod(denom, p), p);
        if (acc.size() < basis.size()) acc.resize(basis.size(), 0);
        for (size_t t = 0; t < basis.size(); ++t)
            acc[t] = (acc[t] + ZpV::mulmod(basis[t], k, p)) % p;
    }
    (void)num;
    vtrim(acc);
    return acc;
}

int fiber_count_mod_p(const EndoP& f, uint64_t a, uint64_t b, uint64_t shear) {
    uint64_t p = f.p;
    // substitute x = z - shear*y into F - a and G - b
    Poly2p Fz, Gz;
    Poly2p xz = Poly2p::var_x();  // z
    Poly2p ysub = Poly2p::var_y();
    Poly2p rep = xz - ysub * ZpV(shear, p);
    Fz = f.F.subst(rep, ysub) - Poly2p(ZpV(a, p));
    Gz = f.G.subst(rep, ysub) - Poly2p(ZpV(b, p));
    if (Fz.zero() || Gz.zero()) return -1;
    if (Fz.deg_y() == 0 && Gz.deg_y() == 0) return -1;
    VecP R = resultant_y_modp(Fz, Gz);
    if (R.empty()) return -1;
    if ((int)R.size() - 1 == 0) return 0;
    return squarefree_degree(R, p);
}

int fiber_count_screen(const Endo& f, const std::vector<uint64_t>& primes, int trials,
                       uint64_t seed, bool parallel) {
    struct Trial {
        uint64_t p, a, b, shear;
    };
    std::vector<Trial> work;
    std::mt19937_64 rng(seed);
    for (uint64_t p : primes) {
        for (int t = 0; t < trials; ++t)
            work.push_back({p, rng() % p, rng() % p, (rng() % (p - 1)) + 1});
    }
    std::vector<int> counts(work.size(), -1);
    auto run = [&](size_t i) {
        auto fp = reduce_endo(f, work[i].p);
        if (!fp) return;
        counts[i] = fiber_count_mod_p(*fp, work[i].a, work[i].b, work[i].shear);
    };
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (long i = 0; i < (long)work.size(); ++i) run((size_t)i);
    } else {
        for (size_t i = 0; i < work.size(); ++i) run(i);
    }
    int best = -1;
    for (int c : counts) best = std::max(best, c);
    return best;
}

}  // namespace valinf
