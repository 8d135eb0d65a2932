// rat.hpp
// -------
// Exact arithmetic base layer: arbitrary-precision integers and rationals
// (GMP-backed), a rational-or-plus-infinity extension used for valuation
// values, and small numeric helpers shared across the library.

#ifndef VALINF_RAT_HPP
#define VALINF_RAT_HPP

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace valinf {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat rat_from_int(const Int& n) { return Rat(n); }

inline int sign(const Rat& q) { return sgn(q); }
inline int sign(const Int& n) { return sgn(n); }

inline Int rat_num(const Rat& q) { return q.get_num(); }
inline Int rat_den(const Rat& q) { return q.get_den(); }

inline Rat rat_abs(const Rat& q) { return abs(q); }

inline double to_double(const Rat& q) { return q.get_d(); }

inline Int int_pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    Int n = base.get_num(), d = base.get_den();
    if (e < 0) {
        if (n == 0) throw std::domain_error("rat_pow: zero to negative power");
        std::swap(n, d);
        e = -e;
        if (sgn(d) < 0) { n = -n; d = -d; }
    }
    Rat r(int_pow(n, (unsigned long)e), int_pow(d, (unsigned long)e));
    r.canonicalize();
    return r;
}

// Bit size of the numerator/denominator pair; used for orbit height budgets.
inline size_t rat_bits(const Rat& q) {
    return mpz_sizeinbase(q.get_num().get_mpz_t(), 2) +
           mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
}

// floor(log2-ish) free comparison a^(1/m) vs b^(1/n) done exactly: a^n vs b^m.
inline int cmp_nth_roots(const Int& a, unsigned long m, const Int& b, unsigned long n) {
    Int lhs = int_pow(a, n), rhs = int_pow(b, m);
    return cmp(lhs, rhs);
}

// Largest squarefree factorization d = s^2 * d0 for small-ish integers.
inline void squarefree_split(Int d, Int& s, Int& d0) {
    s = 1;
    d0 = 1;
    if (d == 0) return;
    if (d < 0) throw std::domain_error("squarefree_split: negative radicand");
    for (Int p = 2; p * p <= d; ++p) {
        while (d % (p * p) == 0) {
            d /= p * p;
            s *= p;
        }
    }
    d0 = d;
}

// Exact test: is q the square of a rational?  If so return the nonneg root.
inline std::optional<Rat> rat_sqrt(const Rat& q) {
    if (sgn(q) < 0) return std::nullopt;
    Int n = q.get_num(), d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
        return std::nullopt;
    Int rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    Rat r(rn, rd);
    r.canonicalize();
    return r;
}

// Rational value v ∈ Q ∪ {+∞}; the value space of valuations on polynomials.
struct ExtRat {
    bool infinite = false;
    Rat value;  // meaningful only when !infinite

    ExtRat() : infinite(false), value(0) {}
    ExtRat(const Rat& q) : infinite(false), value(q) {}
    ExtRat(long n) : infinite(false), value(n) {}
    static ExtRat inf() {
        ExtRat e;
        e.infinite = true;
        return e;
    }
    bool is_inf() const { return infinite; }
    const Rat& finite() const {
        if (infinite) throw std::domain_error("ExtRat: +inf where finite value required");
        return value;
    }
    ExtRat operator+(const ExtRat& o) const {
        if (infinite || o.infinite) return inf();
        return ExtRat(value + o.value);
    }
    ExtRat operator*(const Rat& c) const {
        if (infinite) {
            if (sgn(c) <= 0) throw std::domain_error("ExtRat: inf * nonpositive");
            return inf();
        }
        return ExtRat(value * c);
    }
    bool operator==(const ExtRat& o) const {
        if (infinite != o.infinite) return false;
        return infinite || value == o.value;
    }
    bool operator<(const ExtRat& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return value < o.value;
    }
};

inline ExtRat ext_min(const ExtRat& a, const ExtRat& b) { return a < b ? a : (b < a ? b : a); }

inline std::string to_string(const Rat& q) { return q.get_str(); }

inline std::string to_string(const ExtRat& v) {
    return v.is_inf() ? std::string("inf") : v.finite().get_str();
}

// Single deterministic RNG for everything that samples; seeded once by the
// caller (CLI reads VALINF_SEED), never reseeded behind the caller's back.
class Rng {
  public:
    explicit Rng(uint64_t seed = 0xC0FFEE1234ULL) : eng_(seed) {}
    uint64_t u64() { return eng_(); }
    // uniform integer in [lo, hi]
    long range(long lo, long hi) {
        return lo + (long)(u64() % (uint64_t)(hi - lo + 1));
    }
    Rat small_rat(long max_abs_num = 8, long max_den = 4) {
        long n = range(-max_abs_num, max_abs_num);
        long d = range(1, max_den);
        return make_rat(n, d);
    }
    uint64_t prime62() {
        // random ~62 bit prime via GMP nextprime
        Int base = Int(1) << 61;
        Int off((unsigned long)(u64() >> 3));
        Int seed = base + off;
        Int p;
        mpz_nextprime(p.get_mpz_t(), seed.get_mpz_t());
        return mpz_get_ui(p.get_mpz_t());
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace valinf

namespace std {
template <>
struct hash<valinf::Rat> {
    size_t operator()(const valinf::Rat& q) const {
        return std::hash<std::string>()(q.get_str());
    }
};
}  // namespace std

#endif  // VALINF_RAT_HPP
