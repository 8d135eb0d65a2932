// puiseux.hpp
// -----------
// Truncated Laurent series over Q(sqrt(D)) with explicit precision tracking.
// A PSeries holds terms c_k tau^k with k < prec; prec == EXACT means the
// series is known completely (a Laurent polynomial).  Every operation
// propagates the certified window, so any order read off a series is exact.
// Used for Puiseux parameterizations of branches at infinity, written in an
// integer parameter tau after the ramification substitution.

#ifndef VALINF_PUISEUX_HPP
#define VALINF_PUISEUX_HPP

#include "valinf/poly.hpp"
#include "valinf/quadext.hpp"

#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace valinf {

struct PSeries {
    static constexpr int EXACT = std::numeric_limits<int>::max();

    std::map<int, QuadExt> c;  // exponent -> nonzero coefficient
    int prec = EXACT;          // terms with exponent >= prec are unknown

    PSeries() = default;
    static PSeries from_const(const QuadExt& k) {
        PSeries s;
        if (!k.is_zero()) s.c[0] = k;
        return s;
    }
    static PSeries monomial(int e, const QuadExt& k) {
        PSeries s;
        if (!k.is_zero()) s.c[e] = k;
        return s;
    }

    bool exact() const { return prec == EXACT; }

    void add_term(int e, const QuadExt& v) {
        if (e >= prec || v.is_zero()) return;
        auto it = c.find(e);
        if (it == c.end()) c[e] = v;
        else {
            it->second = it->second + v;
            if (it->second.is_zero()) c.erase(it);
        }
    }

    void truncate(int p) {
        if (p >= prec) return;
        prec = p;
        for (auto it = c.begin(); it != c.end();) {
            if (it->first >= prec) it = c.erase(it);
            else ++it;
        }
    }

    // certain order of the series: value if a nonzero term is stored;
    // "zero" if exactly zero; "unknown" if empty within a finite window
    enum class OrdKind { Value, Zero, Unknown };
    OrdKind ord_kind() const {
        if (!c.empty()) return OrdKind::Value;
        return exact() ? OrdKind::Zero : OrdKind::Unknown;
    }
    int ord_value() const {
        if (c.empty()) throw std::domain_error("PSeries: order of empty series");
        return c.begin()->first;
    }

    QuadExt coeff(int k) const {
        auto it = c.find(k);
        return it == c.end() ? QuadExt() : it->second;
    }

    PSeries operator+(const PSeries& o) const {
        PSeries r;
        r.prec = std::min(prec, o.prec);
        for (auto& [k, v] : c)
            if (k < r.prec) r.add_term(k, v);
        for (auto& [k, v] : o.c)
            if (k < r.prec) r.add_term(k, v);
        return r;
    }
    PSeries operator-() const {
        PSeries r;
        r.prec = prec;
        for (auto& [k, v] : c) r.c[k] = -v;
        return r;
    }
    PSeries operator-(const PSeries& o) const { return *this + (-o); }

    // lower bound for the order used in precision propagation
    long ord_lb() const { return c.empty() ? (exact() ? (long)1 << 30 : prec) : c.begin()->first; }

    PSeries operator*(const PSeries& o) const {
        PSeries r;
        long p1 = exact() ? (long)EXACT : o.ord_lb() + prec;
        long p2 = o.exact() ? (long)EXACT : ord_lb() + o.prec;
        long pr = std::min(p1, p2);
        r.prec = (int)std::min(pr, (long)EXACT);
        for (auto& [ka, va] : c)
            for (auto& [kb, vb] : o.c) {
                long k = (long)ka + kb;
                if (k < r.prec) r.add_term((int)k, va * vb);
            }
        return r;
    }

    PSeries operator*(const QuadExt& k) const {
        PSeries r;
        r.prec = prec;
        if (k.is_zero()) return r;
        for (auto& [e, v] : c) r.c[e] = v * k;
        return r;
    }

    // multiplicative inverse computed to absolute precision
    // min(want_prec, prec - 2*ord); requires a stored leading term
    PSeries inverse(int want_prec) const {
        if (c.empty()) throw std::domain_error("PSeries::inverse: no leading term");
        int d = ord_value();
        QuadExt lead = c.at(d);
        // unit part 1 + h with ord(h) >= 1, relative precision prec - d
        PSeries h;
        h.prec = exact() ? EXACT : prec - d;
        for (auto& [k, v] : c)
            if (k != d) h.add_term(k - d, v / lead);
        long rel = h.exact() ? (long)EXACT : h.prec;
        long target = std::min((long)want_prec + d, rel);  // relative target for the unit
        PSeries acc = from_const(QuadExt(Rat(1)));
        PSeries pw = from_const(QuadExt(Rat(1)));
        for (long i = 1; i < target; ++i) {
            pw = pw * h;
            pw.truncate((int)target);
            if (pw.c.empty()) break;
            acc = (i % 2) ? acc - pw : acc + pw;
        }
        if (!(h.exact() && h.c.empty())) acc.truncate((int)target);
        // shift down by d and divide by lead
        PSeries out;
        out.prec = acc.exact() ? EXACT : acc.prec - d;
        for (auto& [k, v] : acc.c) out.c[k - d] = v / lead;
        return out;
    }

    // substitute tau -> tau^m (m >= 1)
    PSeries stretch(int m) const {
        PSeries r;
        r.prec = exact() ? EXACT : (int)std::min((long)prec * m, (long)EXACT);
        for (auto& [k, v] : c) r.c[k * m] = v;
        return r;
    }

    std::string str() const {
        std::string s;
        for (auto& [k, v] : c) s += "+(" + v.str() + ")t^" + std::to_string(k);
        if (!exact()) s += " + O(t^" + std::to_string(prec) + ")";
        if (s.empty()) s = "0";
        return s;
    }
};

// evaluate a bivariate polynomial on a pair of series
inline PSeries eval_poly_series(const Poly2Q& P, const PSeries& X, const PSeries& Y) {
    int dx = std::max(P.deg_x(), 0), dy = std::max(P.deg_y(), 0);
    std::vector<PSeries> xp(dx + 1), yp(dy + 1);
    xp[0] = PSeries::from_const(QuadExt(Rat(1)));
    for (int i = 1; i <= dx; ++i) xp[i] = xp[i - 1] * X;
    yp[0] = PSeries::from_const(QuadExt(Rat(1)));
    for (int j = 1; j <= dy; ++j) yp[j] = yp[j - 1] * Y;
    PSeries acc;
    bool first = true;
    for (auto& [m, co] : P.t) {
        PSeries term = (xp[m.i] * yp[m.j]) * co;
        acc = first ? term : acc + term;
        first = false;
    }
    if (first) return PSeries();
    return acc;
}

}  // namespace valinf

#endif  // VALINF_PUISEUX_HPP
