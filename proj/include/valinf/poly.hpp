// poly.hpp
// --------
// Dense univariate and sparse bivariate polynomials over an exact coefficient
// ring (Rat, QuadExt, or a prime field), plus the text grammar used by the
// CLI: terms joined by +/-, term = coeff ['*'] [x['^'n]] ['*'] [y['^'n]],
// coeff = integer or integer/integer.  The canonical printer orders terms by
// (total degree desc, x-degree desc) and round-trips with the parser.

#ifndef VALINF_POLY_HPP
#define VALINF_POLY_HPP

#include "valinf/quadext.hpp"
#include "valinf/rat.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace valinf {

template <class K>
inline bool is_zero_coeff(const K& c) { return c.is_zero(); }
template <>
inline bool is_zero_coeff<Rat>(const Rat& c) { return sgn(c) == 0; }

// ---------------------------------------------------------------------------
// Univariate polynomials, dense.
// ---------------------------------------------------------------------------

template <class C>
struct Poly1T {
    std::vector<C> c;  // c[i] * t^i, trailing zeros trimmed

    Poly1T() = default;
    explicit Poly1T(const C& c0) {
        if (!is_zero(c0)) c.push_back(c0);
    }

    static bool is_zero(const C& x);

    void trim() {
        while (!c.empty() && is_zero(c.back())) c.pop_back();
    }
    bool zero() const { return c.empty(); }
    int deg() const { return (int)c.size() - 1; }  // -1 for zero
    const C& lead() const { return c.back(); }
    C get(size_t i) const { return i < c.size() ? c[i] : C(); }
    void set(size_t i, const C& v) {
        if (c.size() <= i) c.resize(i + 1, C());
        c[i] = v;
        trim();
    }

    Poly1T operator+(const Poly1T& o) const {
        Poly1T r;
        r.c.resize(std::max(c.size(), o.c.size()), C());
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = get(i) + o.get(i);
        r.trim();
        return r;
    }
    Poly1T operator-(const Poly1T& o) const {
        Poly1T r;
        r.c.resize(std::max(c.size(), o.c.size()), C());
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = get(i) - o.get(i);
        r.trim();
        return r;
    }
    Poly1T operator*(const Poly1T& o) const {
        Poly1T r;
        if (zero() || o.zero()) return r;
        r.c.assign(c.size() + o.c.size() - 1, C());
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] = r.c[i + j] + c[i] * o.c[j];
        r.trim();
        return r;
    }
    Poly1T operator*(const C& k) const {
        Poly1T r = *this;
        for (auto& x : r.c) x = x * k;
        r.trim();
        return r;
    }
    Poly1T shifted(int k) const {  // * t^k
        Poly1T r;
        if (zero()) return r;
        r.c.assign(c.size() + k, C());
        for (size_t i = 0; i < c.size(); ++i) r.c[i + k] = c[i];
        return r;
    }
    C eval(const C& x) const {
        C acc = C();
        for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }
    Poly1T derivative() const {
        Poly1T r;
        for (size_t i = 1; i < c.size(); ++i) r.c.push_back(c[i] * C((long)i));
        r.trim();
        return r;
    }
    bool operator==(const Poly1T& o) const { return c == o.c; }
};

template <class C>
bool Poly1T<C>::is_zero(const C& x) { return is_zero_coeff<C>(x); }

using Poly1 = Poly1T<Rat>;

// division over a field coefficient type
template <class C>
inline void poly1_divrem(const Poly1T<C>& a, const Poly1T<C>& b, Poly1T<C>& q, Poly1T<C>& r) {
    if (b.zero()) throw std::domain_error("poly1_divrem: division by zero polynomial");
    q = Poly1T<C>();
    r = a;
    C invlead = C(1) / b.lead();
    while (!r.zero() && r.deg() >= b.deg()) {
        C k = r.lead() * invlead;
        int s = r.deg() - b.deg();
        Poly1T<C> t;
        t.c.assign(s + 1, C());
        t.c[s] = k;
        q = q + t;
        r = r - (b * t);
    }
}

template <class C>
inline Poly1T<C> poly1_gcd(Poly1T<C> a, Poly1T<C> b) {
    while (!b.zero()) {
        Poly1T<C> q, r;
        poly1_divrem(a, b, q, r);
        a = b;
        b = r;
    }
    if (!a.zero()) a = a * (C(1) / a.lead());  // monic normal form
    return a;
}

// ---------------------------------------------------------------------------
// Bivariate polynomials, sparse term map.
// ---------------------------------------------------------------------------

struct Mono {
    int i = 0, j = 0;  // x^i y^j  (or u^i v^j in chart coordinates)
    bool operator<(const Mono& o) const { return i != o.i ? i < o.i : j < o.j; }
    bool operator==(const Mono& o) const { return i == o.i && j == o.j; }
};

template <class K>
struct Poly2T {
    std::map<Mono, K> t;

    Poly2T() = default;
    explicit Poly2T(const K& c) {
        if (!is_zero_coeff<K>(c)) t[{0, 0}] = c;
    }
    static Poly2T var_x(int e = 1) {
        Poly2T p;
        p.t[{e, 0}] = K(1);
        return p;
    }
    static Poly2T var_y(int e = 1) {
        Poly2T p;
        p.t[{0, e}] = K(1);
        return p;
    }
    static Poly2T mono(int i, int j, const K& c) {
        Poly2T p;
        if (!is_zero_coeff<K>(c)) p.t[{i, j}] = c;
        return p;
    }

    bool zero() const { return t.empty(); }
    // total degree; -1 sentinel for the zero polynomial
    int deg() const {
        int d = -1;
        for (auto& [m, c] : t) d = std::max(d, m.i + m.j);
        return d;
    }
    int deg_x() const {
        int d = -1;
        for (auto& [m, c] : t) d = std::max(d, m.i);
        return d;
    }
    int deg_y() const {
        int d = -1;
        for (auto& [m, c] : t) d = std::max(d, m.j);
        return d;
    }
    int ord_x() const {  // min exponent of x; throws on zero
        if (zero()) throw std::domain_error("ord_x of zero polynomial");
        int d = INT32_MAX;
        for (auto& [m, c] : t) d = std::min(d, m.i);
        return d;
    }
    int ord_y() const {
        if (zero()) throw std::domain_error("ord_y of zero polynomial");
        int d = INT32_MAX;
        for (auto& [m, c] : t) d = std::min(d, m.j);
        return d;
    }

    void add_term(int i, int j, const K& c) {
        Mono m{i, j};
        auto it = t.find(m);
        if (it == t.end()) {
            if (!is_zero_coeff<K>(c)) t[m] = c;
        } else {
            it->second = it->second + c;
            if (is_zero_coeff<K>(it->second)) t.erase(it);
        }
    }

    Poly2T operator+(const Poly2T& o) const {
        Poly2T r = *this;
        for (auto& [m, c] : o.t) r.add_term(m.i, m.j, c);
        return r;
    }
    Poly2T operator-(const Poly2T& o) const {
        Poly2T r = *this;
        for (auto& [m, c] : o.t) r.add_term(m.i, m.j, K() - c);
        return r;
    }
    Poly2T operator-() const {
        Poly2T r;
        for (auto& [m, c] : t) r.t[m] = K() - c;
        return r;
    }
    Poly2T operator*(const Poly2T& o) const {
        Poly2T r;
        for (auto& [m1, c1] : t)
            for (auto& [m2, c2] : o.t) r.add_term(m1.i + m2.i, m1.j + m2.j, c1 * c2);
        return r;
    }
    Poly2T operator*(const K& k) const {
        Poly2T r;
        if (is_zero_coeff<K>(k)) return r;
        for (auto& [m, c] : t) {
            K v = c * k;
            if (!is_zero_coeff<K>(v)) r.t[m] = v;
        }
        return r;
    }
    bool operator==(const Poly2T& o) const { return t == o.t; }

    Poly2T pow(int e) const {
        Poly2T r(K(1));
        Poly2T base = *this;
        while (e > 0) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    K eval(const K& x, const K& y) const {
        // Horner against cached powers; inputs are desk scale
        K acc = K();
        for (auto& [m, c] : t) {
            K term = c;
            for (int a = 0; a < m.i; ++a) term = term * x;
            for (int a = 0; a < m.j; ++a) term = term * y;
            acc = acc + term;
        }
        return acc;
    }

    // substitute x -> px, y -> py
    Poly2T subst(const Poly2T& px, const Poly2T& py) const {
        // bank powers to avoid recomputation
        int dx = std::max(deg_x(), 0), dy = std::max(deg_y(), 0);
        std::vector<Poly2T> xp(dx + 1), yp(dy + 1);
        xp[0] = Poly2T(K(1));
        for (int a = 1; a <= dx; ++a) xp[a] = xp[a - 1] * px;
        yp[0] = Poly2T(K(1));
        for (int a = 1; a <= dy; ++a) yp[a] = yp[a - 1] * py;
        Poly2T r;
        for (auto& [m, c] : t) r = r + (xp[m.i] * yp[m.j]) * c;
        return r;
    }

    Poly2T derivative_x() const {
        Poly2T r;
        for (auto& [m, c] : t)
            if (m.i > 0) r.add_term(m.i - 1, m.j, c * K((long)m.i));
        return r;
    }
    Poly2T derivative_y() const {
        Poly2T r;
        for (auto& [m, c] : t)
            if (m.j > 0) r.add_term(m.i, m.j - 1, c * K((long)m.j));
        return r;
    }

    // divide by x^a y^b (must divide exactly)
    Poly2T shift_down(int a, int b) const {
        Poly2T r;
        for (auto& [m, c] : t) {
            if (m.i < a || m.j < b) throw std::domain_error("shift_down: not divisible");
            r.t[{m.i - a, m.j - b}] = c;
        }
        return r;
    }

    // view in y: coefficient of y^j as univariate in x
    std::vector<Poly1T<K>> coeffs_in_y() const {
        std::vector<Poly1T<K>> out((size_t)std::max(deg_y() + 1, 0));
        for (auto& [m, c] : t) out[m.j].set(m.i, c);
        return out;
    }
    static Poly2T from_coeffs_in_y(const std::vector<Poly1T<K>>& cs) {
        Poly2T r;
        for (size_t j = 0; j < cs.size(); ++j)
            for (size_t i = 0; i < cs[j].c.size(); ++i) r.add_term((int)i, (int)j, cs[j].c[i]);
        return r;
    }

    // min of a*i + b*j over the support, and the sub-polynomial achieving it
    // (the weighted leading form).  Weights are rationals >= 0, not both 0.
    Rat weight_min(const Rat& a, const Rat& b) const {
        if (zero()) throw std::domain_error("weight_min of zero polynomial");
        bool first = true;
        Rat best;
        for (auto& [m, c] : t) {
            Rat w = a * Rat(m.i) + b * Rat(m.j);
            if (first || w < best) {
                best = w;
                first = false;
            }
        }
        return best;
    }
    Poly2T weight_leading_form(const Rat& a, const Rat& b) const {
        Poly2T r;
        Rat best = weight_min(a, b);
        for (auto& [m, c] : t)
            if (a * Rat(m.i) + b * Rat(m.j) == best) r.t[m] = c;
        return r;
    }
};

using Poly2 = Poly2T<Rat>;
using Poly2Q = Poly2T<QuadExt>;

inline Poly2Q promote(const Poly2& p) {
    Poly2Q r;
    for (auto& [m, c] : p.t) r.t[m] = QuadExt(c);
    return r;
}

// exact single-divisor reduction; remainder == 0 iff divisor | dividend
template <class K>
inline bool poly2_divides(const Poly2T<K>& d, const Poly2T<K>& p, Poly2T<K>* quot = nullptr) {
    if (d.zero()) return p.zero();
    Poly2T<K> r = p, q;
    // leading term under (total degree, then x-degree) order
    auto lead = [](const Poly2T<K>& f) {
        Mono best{-1, -1};
        for (auto& [m, c] : f.t) {
            if (best.i < 0 || m.i + m.j > best.i + best.j ||
                (m.i + m.j == best.i + best.j && m.i > best.i))
                best = m;
        }
        return best;
    };
    Mono dl = lead(d);
    K dc = d.t.at(dl);
    while (!r.zero()) {
        // find a reducible term of maximal order
        bool reduced = false;
        std::vector<Mono> monos;
        for (auto& [m, c] : r.t) monos.push_back(m);
        std::sort(monos.begin(), monos.end(), [](const Mono& a, const Mono& b) {
            if (a.i + a.j != b.i + b.j) return a.i + a.j > b.i + b.j;
            return a.i > b.i;
        });
        for (const Mono& m : monos) {
            if (m.i >= dl.i && m.j >= dl.j) {
                K k = r.t.at(m) / dc;
                Poly2T<K> term = Poly2T<K>::mono(m.i - dl.i, m.j - dl.j, k);
                q = q + term;
                r = r - d * term;
                reduced = true;
                break;
            }
        }
        if (!reduced) return false;
    }
    if (quot) *quot = q;
    return true;
}

// ---------------------------------------------------------------------------
// Parsing / printing (Rat coefficients)
// ---------------------------------------------------------------------------

struct ParseError : std::runtime_error {
    size_t offset;
    ParseError(const std::string& msg, size_t off)
        : std::runtime_error(msg + " at byte " + std::to_string(off)), offset(off) {}
};

namespace detail {
struct PolyParser {
    const std::string& s;
    size_t pos = 0;
    explicit PolyParser(const std::string& str) : s(str) {}

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    bool eat(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }
    Int parse_nat() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && isdigit((unsigned char)s[pos])) ++pos;
        if (pos == start) throw ParseError("expected integer", pos);
        return Int(s.substr(start, pos - start));
    }
    int parse_exp() {
        Int e = parse_nat();
        if (!e.fits_sint_p() || e.get_si() > 4096) throw ParseError("exponent too large", pos);
        return (int)e.get_si();
    }

    Poly2 parse_term(bool negative) {
        skip_ws();
        Rat coeff(1);
        bool have_coeff = false;
        if (pos < s.size() && isdigit((unsigned char)s[pos])) {
            Int num = parse_nat();
            if (eat('/')) {
                Int den = parse_nat();
                if (sgn(den) == 0) throw ParseError("zero denominator", pos);
                coeff = Rat(num, den);
                coeff.canonicalize();
            } else {
                coeff = Rat(num);
            }
            have_coeff = true;
        }
        int ex = 0, ey = 0;
        bool have_var = false;
        while (true) {
            skip_ws();
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                continue;
            }
            if (pos < s.size() && (s[pos] == 'x' || s[pos] == 'y')) {
                char var = s[pos++];
                int e = 1;
                if (eat('^')) e = parse_exp();
                if (var == 'x') ex += e; else ey += e;
                have_var = true;
                continue;
            }
            break;
        }
        if (!have_coeff && !have_var) throw ParseError("expected term", pos);
        if (negative) coeff = -coeff;
        return Poly2::mono(ex, ey, coeff);
    }

    Poly2 parse() {
        Poly2 acc;
        skip_ws();
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        acc = acc + parse_term(neg);
        while (true) {
            skip_ws();
            if (pos >= s.size()) break;
            if (eat('-')) acc = acc + parse_term(true);
            else if (eat('+')) acc = acc + parse_term(false);
            else throw ParseError(std::string("unexpected character '") + s[pos] + "'", pos);
        }
        return acc;
    }
};
}  // namespace detail

inline Poly2 parse_poly(const std::string& text) {
    detail::PolyParser p(text);
    Poly2 r = p.parse();
    return r;
}

inline std::string print_poly(const Poly2& p) {
    if (p.zero()) return "0";
    std::vector<std::pair<Mono, Rat>> terms(p.t.begin(), p.t.end());
    std::sort(terms.begin(), terms.end(), [](auto& a, auto& b) {
        int da = a.first.i + a.first.j, db = b.first.i + b.first.j;
        if (da != db) return da > db;
        return a.first.i > b.first.i;
    });
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : terms) {
        Rat a = c;
        if (first) {
            if (sgn(a) < 0) {
                os << "-";
                a = -a;
            }
            first = false;
        } else {
            os << (sgn(a) < 0 ? " - " : " + ");
            a = rat_abs(a);
        }
        bool unit = (a == Rat(1)) && (m.i > 0 || m.j > 0);
        if (!unit) os << a.get_str();
        bool star = !unit;
        if (m.i > 0) {
            if (star) os << "*";
            os << "x";
            if (m.i > 1) os << "^" << m.i;
            star = true;
        }
        if (m.j > 0) {
            if (star) os << "*";
            os << "y";
            if (m.j > 1) os << "^" << m.j;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Polynomial endomorphisms f = (F, G)
// ---------------------------------------------------------------------------

struct Endo {
    Poly2 F, G;

    Endo() = default;
    Endo(Poly2 f, Poly2 g) : F(std::move(f)), G(std::move(g)) {
        if (F.deg() <= 0 && G.deg() <= 0)
            throw std::domain_error("Endo: both components constant");
    }
    static Endo parse(const std::string& fs, const std::string& gs) {
        return Endo(parse_poly(fs), parse_poly(gs));
    }

    int deg() const { return std::max(F.deg(), G.deg()); }

    Poly2 jacobian() const {
        return F.derivative_x() * G.derivative_y() - F.derivative_y() * G.derivative_x();
    }
    bool dominant() const { return !jacobian().zero(); }

    // pullback h -> h(F, G)
    Poly2 pullback(const Poly2& h) const { return h.subst(F, G); }

    std::pair<Rat, Rat> apply_point(const Rat& x, const Rat& y) const {
        return {F.eval(x, y), G.eval(x, y)};
    }

    bool is_monomial(long exps[4] = nullptr) const {
        if (F.t.size() != 1 || G.t.size() != 1) return false;
        auto& [mf, cf] = *F.t.begin();
        auto& [mg, cg] = *G.t.begin();
        if (exps) {
            exps[0] = mf.i; exps[1] = mf.j;
            exps[2] = mg.i; exps[3] = mg.j;
        }
        return true;
    }
};

// g o f
inline Endo compose(const Endo& g, const Endo& f) {
    return Endo(g.F.subst(f.F, f.G), g.G.subst(f.F, f.G));
}

inline Endo iterate(const Endo& f, int n) {
    if (n < 1) throw std::domain_error("iterate: n must be >= 1");
    Endo r = f;
    for (int k = 1; k < n; ++k) r = compose(f, r);
    return r;
}

}  // namespace valinf

#endif  // VALINF_POLY_HPP
