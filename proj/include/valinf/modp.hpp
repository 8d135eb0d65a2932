// modp.hpp
// --------
// Prime-field kernels used for screening: coefficient reduction mod p,
// bivariate composition over F_p for degree sequences, and fiber counting for
// the topological degree.  The degree-sequence and fiber-count kernels exist
// in two builds, a serial reference and an OpenMP-parallel one; the tests
// compare them and the bench target times them.

#ifndef VALINF_MODP_HPP
#define VALINF_MODP_HPP

#include "valinf/poly.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace valinf {

// value in F_p, p < 2^62
struct ZpV {
    uint64_t v = 0;
    uint64_t p = 0;

    ZpV() = default;
    // modulus-free small literal; adopts a modulus on first mixed operation
    ZpV(long n) : v((uint64_t)(n < 0 ? -n : n)), p(0) {
        if (n < 0) throw std::logic_error("ZpV: negative literal requires modulus");
    }
    ZpV(uint64_t val, uint64_t mod) : v(val % mod), p(mod) {}

    bool is_zero() const { return v == 0; }

    static uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
        return (uint64_t)((unsigned __int128)a * b % p);
    }
    static uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
        uint64_t r = 1 % p;
        a %= p;
        while (e) {
            if (e & 1) r = mulmod(r, a, p);
            a = mulmod(a, a, p);
            e >>= 1;
        }
        return r;
    }
    static uint64_t invmod(uint64_t a, uint64_t p) { return powmod(a % p, p - 2, p); }

    uint64_t mod() const { return p; }
    ZpV with(uint64_t val) const { return ZpV(val % p, p); }

    ZpV operator+(const ZpV& o) const {
        uint64_t m = p ? p : o.p;
        if (!m) return ZpV((long)(v + o.v));
        return ZpV((v % m + o.v % m) % m, m);
    }
    ZpV operator-(const ZpV& o) const {
        uint64_t m = p ? p : o.p;
        if (!m) throw std::logic_error("ZpV: subtraction of bare literals");
        return ZpV((v % m + m - o.v % m) % m, m);
    }
    ZpV operator*(const ZpV& o) const {
        uint64_t m = p ? p : o.p;
        if (!m) return ZpV((long)(v * o.v));
        return ZpV(mulmod(v % m, o.v % m, m), m);
    }
    ZpV operator/(const ZpV& o) const {
        uint64_t m = p ? p : o.p;
        return ZpV(mulmod(v, invmod(o.v, m), m), m);
    }
    bool operator==(const ZpV& o) const { return v == o.v; }
    bool operator<(const ZpV& o) const { return v < o.v; }
};

template <>
inline bool is_zero_coeff<ZpV>(const ZpV& c) { return c.v == 0; }

using Poly2p = Poly2T<ZpV>;
using Poly1p = Poly1T<ZpV>;

// Reduce a rational mod p; nullopt when p divides the denominator.
inline std::optional<uint64_t> rat_mod_p(const Rat& q, uint64_t p) {
    Int den = q.get_den();
    if (mpz_divisible_ui_p(den.get_mpz_t(), p)) return std::nullopt;
    Int num = q.get_num();
    uint64_t n = mpz_fdiv_ui(num.get_mpz_t(), p);
    uint64_t d = mpz_fdiv_ui(den.get_mpz_t(), p);
    return ZpV::mulmod(n, ZpV::invmod(d, p), p);
}

inline std::optional<Poly2p> reduce_mod_p(const Poly2& f, uint64_t p) {
    Poly2p r;
    for (auto& [m, c] : f.t) {
        auto v = rat_mod_p(c, p);
        if (!v) return std::nullopt;
        if (*v) r.t[m] = ZpV(*v, p);
    }
    return r;
}

struct EndoP {
    Poly2p F, G;
    uint64_t p;
};

inline std::optional<EndoP> reduce_endo(const Endo& f, uint64_t p) {
    auto F = reduce_mod_p(f.F, p);
    auto G = reduce_mod_p(f.G, p);
    if (!F || !G) return std::nullopt;
    return EndoP{*F, *G, p};
}

// degrees of f, f^2, ..., f^nmax over F_p (composition done mod p)
inline std::vector<int> degree_seq_mod_p(const EndoP& f, int nmax) {
    std::vector<int> out;
    Poly2p Fk = f.F, Gk = f.G;
    out.push_back(std::max(Fk.deg(), Gk.deg()));
    for (int n = 2; n <= nmax; ++n) {
        Poly2p Fn = f.F.subst(Fk, Gk);
        Poly2p Gn = f.G.subst(Fk, Gk);
        Fk = Fn;
        Gk = Gn;
        out.push_back(std::max(Fk.deg(), Gk.deg()));
    }
    return out;
}

// Across-primes screening: per n, max observed degree over the usable primes.
// Primes dividing a coefficient denominator are skipped.  `parallel` selects
// the OpenMP kernel; the serial path is the reference implementation.
std::vector<int> screened_degrees(const Endo& f, int nmax, const std::vector<uint64_t>& primes,
                                  bool parallel, int* used_primes = nullptr);

// ---------------------------------------------------------------------------
// Fiber counting over F_p for the topological degree
// ---------------------------------------------------------------------------

// univariate arithmetic over F_p on plain vectors
using VecP = std::vector<uint64_t>;

inline void vtrim(VecP& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

VecP vmul(const VecP& a, const VecP& b, uint64_t p);
VecP vgcd(VecP a, VecP b, uint64_t p);
int squarefree_degree(const VecP& a, uint64_t p);

// resultant in y of two bivariate polynomials over F_p (returns coefficients
// of the univariate result in x)
VecP resultant_y_modp(const Poly2p& P, const Poly2p& Q);

// Count solutions of F = a, G = b (coordinates sheared by z = x + shear*y)
// over the algebraic closure of F_p: the degree of the squarefree part of the
// z-resultant.  Returns -1 when the trial degenerates.
int fiber_count_mod_p(const EndoP& f, uint64_t a, uint64_t b, uint64_t shear);

// Run `trials` fiber counts across primes/targets, return the max (serial and
// OpenMP builds).
int fiber_count_screen(const Endo& f, const std::vector<uint64_t>& primes, int trials,
                       uint64_t seed, bool parallel);

}  // namespace valinf

#endif  // VALINF_MODP_HPP
