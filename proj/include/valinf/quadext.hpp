// quadext.hpp
// -----------
// Exact arithmetic in a real quadratic extension Q(sqrt(D)), D a squarefree
// nonnegative integer (D == 0 encodes a plain rational).  This is the whole
// coefficient tower the library supports: blowup centers, Puiseux
// coefficients and dynamical degrees live in Q or in one Q(sqrt(D));
// anything deeper fails loudly.

#ifndef VALINF_QUADEXT_HPP
#define VALINF_QUADEXT_HPP

#include "valinf/rat.hpp"

#include <stdexcept>
#include <string>

namespace valinf {

struct QuadExt {
    Rat a;        // rational part
    Rat b;        // coefficient of sqrt(D)
    long long D;  // squarefree radicand, 0 when the value is rational

    QuadExt() : a(0), b(0), D(0) {}
    QuadExt(const Rat& r) : a(r), b(0), D(0) {}
    QuadExt(long n) : a(n), b(0), D(0) {}
    QuadExt(const Rat& ra, const Rat& rb, long long d) : a(ra), b(rb), D(d) {
        if (sgn(b) == 0) D = 0;
        if (D == 0 && sgn(b) != 0) throw std::domain_error("QuadExt: sqrt(0) coefficient");
    }

    bool is_rational() const { return D == 0; }
    bool is_zero() const { return sgn(a) == 0 && sgn(b) == 0; }

    const Rat& rational() const {
        if (!is_rational()) throw std::domain_error("QuadExt: irrational where rational required");
        return a;
    }

    static long long common_field(const QuadExt& x, const QuadExt& y) {
        if (x.D == 0) return y.D;
        if (y.D == 0 || x.D == y.D) return x.D;
        throw std::domain_error("QuadExt: mixing distinct quadratic fields");
    }

    QuadExt operator+(const QuadExt& o) const {
        long long d = common_field(*this, o);
        return QuadExt(a + o.a, b + o.b, (sgn(b + o.b) == 0) ? 0 : d);
    }
    QuadExt operator-(const QuadExt& o) const {
        long long d = common_field(*this, o);
        return QuadExt(a - o.a, b - o.b, (sgn(b - o.b) == 0) ? 0 : d);
    }
    QuadExt operator-() const { return QuadExt(-a, -b, D); }
    QuadExt operator*(const QuadExt& o) const {
        long long d = common_field(*this, o);
        Rat ra = a * o.a + b * o.b * Rat((long)d);
        Rat rb = a * o.b + b * o.a;
        return QuadExt(ra, rb, (sgn(rb) == 0) ? 0 : d);
    }
    QuadExt conj() const { return QuadExt(a, -b, D); }
    Rat norm() const { return a * a - b * b * Rat((long)D); }
    Rat trace() const { return a + a; }

    QuadExt inverse() const {
        Rat n = norm();
        if (sgn(n) == 0) throw std::domain_error("QuadExt: division by zero");
        QuadExt c = conj();
        return QuadExt(c.a / n, c.b / n, (sgn(c.b) == 0) ? 0 : D);
    }
    QuadExt operator/(const QuadExt& o) const { return *this * o.inverse(); }

    bool operator==(const QuadExt& o) const { return a == o.a && b == o.b && (sgn(b) == 0 || D == o.D); }
    bool operator!=(const QuadExt& o) const { return !(*this == o); }

    // exact sign of a + b*sqrt(D); requires a real value (D >= 0)
    int sign() const {
        if (sgn(b) == 0) return sgn(a);
        if (D < 0) throw std::domain_error("QuadExt::sign: complex value has no sign");
        if (sgn(a) == 0) return sgn(b);
        if (sgn(a) > 0 && sgn(b) > 0) return 1;
        if (sgn(a) < 0 && sgn(b) < 0) return -1;
        // opposite signs: compare a^2 with b^2 D
        Rat lhs = a * a, rhs = b * b * Rat((long)D);
        int c = cmp(lhs, rhs);
        if (c == 0) return 0;
        // |a| dominates -> sign of a, else sign of b
        return c > 0 ? sgn(a) : sgn(b);
    }

    bool operator<(const QuadExt& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const QuadExt& o) const { return (*this - o).sign() <= 0; }

    double to_double() const { return a.get_d() + b.get_d() * std::sqrt((double)D); }

    std::string str() const {
        if (is_rational()) return a.get_str();
        std::string s = "(" + a.get_str();
        s += (sgn(b) >= 0 ? "+" : "-");
        s += rat_abs(b).get_str() + "*sqrt(" + std::to_string(D) + "))";
        return s;
    }
};

// sqrt of a rational as a QuadExt (exact); negative input gives an imaginary
// quadratic value (D < 0), on which only equality and arithmetic are valid
inline QuadExt quad_sqrt(const Rat& q) {
    if (sgn(q) == 0) return QuadExt();
    if (sgn(q) > 0) {
        if (auto r = rat_sqrt(q)) return QuadExt(*r);
    }
    // q = n/d ; sqrt(q) = sqrt(n*d)/d ; split |n*d| = s^2 * D0
    Int nd = q.get_num() * q.get_den();
    int neg = sgn(nd) < 0;
    Int s, d0;
    squarefree_split(abs(nd), s, d0);
    Rat coeff(s, q.get_den());
    coeff.canonicalize();
    if (!d0.fits_slong_p()) throw std::domain_error("quad_sqrt: radicand too large");
    long long D = d0.get_si();
    return QuadExt(Rat(0), coeff, neg ? -D : D);
}

// Roots of a*t^2 + b*t + c (a != 0) inside Q(sqrt(D)); extends the field only
// when the inputs are rational.  Returns empty when the roots leave the
// supported tower (negative or non-matching discriminant).
struct QuadRoots {
    bool ok = false;
    QuadExt r1, r2;
};

inline QuadRoots solve_quadratic(const QuadExt& a, const QuadExt& b, const QuadExt& c,
                                 bool allow_complex = false) {
    QuadRoots out;
    QuadExt disc = b * b - QuadExt(Rat(4)) * a * c;
    if (disc.D < 0) return out;  // nested complex radicand unsupported
    if (!allow_complex && disc.sign() < 0) return out;
    if (!disc.is_rational() && disc.sign() < 0) return out;
    QuadExt sq;
    if (disc.is_rational()) {
        sq = quad_sqrt(disc.rational());
        // mixing check: if a,b,c carry a field already, sq must agree
        long long dd = 0;
        dd = QuadExt::common_field(a, b);
        dd = (dd == 0) ? c.D : dd;
        if (dd != 0 && sq.D != 0 && sq.D != dd) return out;  // would need a biquadratic field
    } else {
        // discriminant irrational: need it to be a perfect square in Q(sqrt D)
        // (x + y sqrt(D))^2 = x^2 + y^2 D + 2xy sqrt(D) = A + B sqrt(D)
        // solve x^2 + y^2 D = A, 2xy = B exactly
        Rat A = disc.a, B = disc.b;
        // x^2 is a root of t^2 - A t + D B^2/4 = 0 over Q
        Rat discq = A * A - Rat((long)disc.D) * B * B;
        auto s0 = rat_sqrt(discq);
        if (!s0) return out;
        Rat x2a = (A + *s0) / 2, x2b = (A - *s0) / 2;
        for (const Rat& x2 : {x2a, x2b}) {
            auto xr = rat_sqrt(x2);
            if (!xr || sgn(*xr) == 0) continue;
            Rat y = B / (Rat(2) * (*xr));
            QuadExt cand(*xr, y, disc.D);
            if ((cand * cand) == disc) {
                sq = cand;
                out.ok = true;
                break;
            }
        }
        if (!out.ok) return out;
    }
    QuadExt two_a = a + a;
    out.r1 = (-b + sq) / two_a;
    out.r2 = (-b - sq) / two_a;
    out.ok = true;
    return out;
}

}  // namespace valinf

#endif  // VALINF_QUADEXT_HPP
