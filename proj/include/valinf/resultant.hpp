// resultant.hpp
// -------------
// Resultants via fraction-free (Bareiss) elimination on the Sylvester matrix.
// Entries live in Q[x] (Poly1) when eliminating y from bivariate input, or in
// Q for univariate input.  Bareiss keeps every division exact, so the result
// is the textbook Sylvester determinant, bit for bit.

#ifndef VALINF_RESULTANT_HPP
#define VALINF_RESULTANT_HPP

#include "valinf/poly.hpp"

#include <stdexcept>
#include <vector>

namespace valinf {

namespace detail {

template <class C>
struct RingOps;

template <>
struct RingOps<Rat> {
    static bool zero(const Rat& a) { return sgn(a) == 0; }
    static Rat div(const Rat& a, const Rat& b) { return a / b; }
};

template <>
struct RingOps<Poly1> {
    static bool zero(const Poly1& a) { return a.zero(); }
    static Poly1 div(const Poly1& a, const Poly1& b) {
        Poly1 q, r;
        poly1_divrem(a, b, q, r);
        if (!r.zero()) throw std::logic_error("Bareiss: inexact division");
        return q;
    }
};

// Fraction-free determinant; destroys m.
template <class C>
C bareiss_det(std::vector<std::vector<C>>& m) {
    const size_t n = m.size();
    if (n == 0) return C(1);
    C prev = C(1);
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (RingOps<C>::zero(m[k][k])) {
            size_t piv = k + 1;
            while (piv < n && RingOps<C>::zero(m[piv][k])) ++piv;
            if (piv == n) return C();  // singular
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                C num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
                m[i][j] = RingOps<C>::div(num, prev);
            }
            m[i][k] = C();
        }
        prev = m[k][k];
    }
    C det = m[n - 1][n - 1];
    if (sign < 0) det = C() - det;
    return det;
}

}  // namespace detail

// Sylvester resultant of univariate polynomials over Q.
inline Rat resultant_poly1(const Poly1& p, const Poly1& q) {
    if (p.zero() || q.zero()) return Rat(0);
    int m = p.deg(), n = q.deg();
    if (m == 0 && n == 0) throw std::domain_error("resultant: both operands constant");
    if (m == 0) return rat_pow(p.c[0], n);
    if (n == 0) return rat_pow(q.c[0], m);
    size_t dim = (size_t)(m + n);
    std::vector<std::vector<Rat>> s(dim, std::vector<Rat>(dim, Rat(0)));
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) s[r][r + (m - k)] = p.get(k);
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) s[n + r][r + (n - k)] = q.get(k);
    return detail::bareiss_det(s);
}

// Res_y(P, Q) for bivariate P, Q viewed as polynomials in y over Q[x].
// Returns a univariate polynomial in x (as Poly2 with j == 0 everywhere).
inline Poly1 resultant_y_poly1(const Poly2& P, const Poly2& Q) {
    if (P.zero() || Q.zero()) throw std::domain_error("resultant_y: zero operand");
    int m = P.deg_y(), n = Q.deg_y();
    if (m == 0 && n == 0) throw std::domain_error("no elimination variable");
    auto pc = P.coeffs_in_y();
    auto qc = Q.coeffs_in_y();
    if (m == 0) {  // Res(constant-in-y, Q) = P^deg_y(Q)
        Poly1 r(Rat(1));
        for (int k = 0; k < n; ++k) r = r * pc[0];
        return r;
    }
    if (n == 0) {
        Poly1 r(Rat(1));
        for (int k = 0; k < m; ++k) r = r * qc[0];
        return r;
    }
    size_t dim = (size_t)(m + n);
    std::vector<std::vector<Poly1>> s(dim, std::vector<Poly1>(dim));
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) s[r][r + (m - k)] = pc[k];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) s[n + r][r + (n - k)] = qc[k];
    return detail::bareiss_det(s);
}

inline Poly2 resultant_y(const Poly2& P, const Poly2& Q) {
    Poly1 r = resultant_y_poly1(P, Q);
    Poly2 out;
    for (size_t i = 0; i < r.c.size(); ++i) out.add_term((int)i, 0, r.c[i]);
    return out;
}

inline Poly2 resultant_x(const Poly2& P, const Poly2& Q) {
    auto swap_vars = [](const Poly2& p) {
        Poly2 r;
        for (auto& [m, c] : p.t) r.t[{m.j, m.i}] = c;
        return r;
    };
    return swap_vars(resultant_y(swap_vars(P), swap_vars(Q)));
}

}  // namespace valinf

#endif  // VALINF_RESULTANT_HPP
