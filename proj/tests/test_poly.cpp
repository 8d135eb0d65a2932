// Exact polynomial kernel: parsing, resultants, composition, squarefree
// decomposition, degree screening, univariate/bivariate factorization.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "valinf/factor.hpp"
#include "valinf/modp.hpp"
#include "valinf/poly.hpp"
#include "valinf/resultant.hpp"

using namespace valinf;

TEST_CASE("parse and print round-trip") {
    Poly2 p = parse_poly("x^2*y - 3/2");
    CHECK(p.t.size() == 2);
    CHECK(p.t.at({2, 1}) == Rat(1));
    CHECK(p.t.at({0, 0}) == make_rat(-3, 2));
    CHECK(p.deg() == 3);

    CHECK(parse_poly("0").zero());
    CHECK(parse_poly("0").deg() == -1);

    CHECK_THROWS_AS(parse_poly("(x+y)^2"), ParseError);

    // canonical printer round-trips
    for (const char* s : {"x^2*y - 3/2", "x - y", "2*x^3 + x*y^2 - 7", "1/3*x + y^4"}) {
        Poly2 q = parse_poly(s);
        CHECK(parse_poly(print_poly(q)) == q);
    }
    CHECK(print_poly(parse_poly("y + x")) == "x + y");
    CHECK(print_poly(Poly2()) == "0");
}

TEST_CASE("parser error offsets") {
    try {
        parse_poly("x + $");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);
    }
}

TEST_CASE("resultant_y on the spec examples") {
    // Res_y(y - x^2, y - x^3) = x^2 - x^3
    Poly2 r = resultant_y(parse_poly("y - x^2"), parse_poly("y - x^3"));
    CHECK(r == parse_poly("x^2 - x^3"));

    // common factor: Res_y(y, y) = 0
    CHECK(resultant_y(parse_poly("y"), parse_poly("y")).zero());

    // constant second argument convention: Res_y(y^2 - x, 1) = 1
    CHECK(resultant_y(parse_poly("y^2 - x"), parse_poly("1")) == parse_poly("1"));

    CHECK_THROWS(resultant_y(parse_poly("x"), parse_poly("x + 1")));
}

TEST_CASE("resultant vanishing detects shared roots over small fields") {
    // Res_y(P,Q)(a) = 0 iff P(a,.), Q(a,.) share a root or both leading
    // coefficients vanish; cross-check over F_p by brute force root search.
    uint64_t p = 101;
    Poly2 P = parse_poly("y^2 - x");
    Poly2 Q = parse_poly("y^2 - 2*y + x");
    Poly2 R = resultant_y(P, Q);
    auto Pp = *reduce_mod_p(P, p);
    auto Qp = *reduce_mod_p(Q, p);
    auto Rp = *reduce_mod_p(R, p);
    for (uint64_t a = 0; a < p; ++a) {
        bool shared = false;
        for (uint64_t yv = 0; yv < p && !shared; ++yv) {
            auto ev = [&](const Poly2p& f) {
                uint64_t acc = 0;
                for (auto& [m, c] : f.t) {
                    uint64_t term = c.v;
                    for (int i = 0; i < m.i; ++i) term = ZpV::mulmod(term, a, p);
                    for (int j = 0; j < m.j; ++j) term = ZpV::mulmod(term, yv, p);
                    acc = (acc + term) % p;
                }
                return acc;
            };
            shared = (ev(Pp) == 0 && ev(Qp) == 0);
        }
        uint64_t rv = 0;
        for (auto& [m, c] : Rp.t) {
            uint64_t term = c.v;
            for (int i = 0; i < m.i; ++i) term = ZpV::mulmod(term, a, p);
            rv = (rv + term) % p;
        }
        CHECK((rv == 0) == shared);
    }
}

TEST_CASE("composition") {
    Endo f = Endo::parse("x^2", "y^2");
    Endo ff = compose(f, f);
    CHECK(ff.F == parse_poly("x^4"));
    CHECK(ff.G == parse_poly("y^4"));

    Endo g = Endo::parse("x^2", "x*y^2");
    Endo gg = compose(g, g);
    CHECK(gg.F == parse_poly("x^4"));
    CHECK(gg.G == parse_poly("x^4*y^4"));

    Endo id = Endo::parse("x", "y");
    Endo idf = compose(id, g);
    CHECK(idf.F == g.F);
    CHECK(idf.G == g.G);
    CHECK(compose(g, id).G == g.G);

    CHECK(ff.deg() <= f.deg() * f.deg());
}

TEST_CASE("degree sequence: monomial, skew, linear") {
    std::vector<uint64_t> primes = {1000003, 1000033, 1000037};
    Endo f = Endo::parse("x^2", "y^2");
    auto d = screened_degrees(f, 5, primes, false);
    CHECK(d == std::vector<int>{2, 4, 8, 16, 32});

    Endo g = Endo::parse("x^2", "x*y^2");
    auto dg = screened_degrees(g, 5, primes, false);
    // deg g^n = (n+2)*2^(n-1)
    CHECK(dg == std::vector<int>{3, 8, 20, 48, 112});
    // exact confirmation by symbolic composition for n <= 4
    Endo gn = g;
    for (int n = 1; n <= 4; ++n) {
        CHECK(gn.deg() == dg[n - 1]);
        if (n < 4) gn = compose(g, gn);
    }

    Endo lin = Endo::parse("y", "x");
    auto dl = screened_degrees(lin, 4, primes, false);
    CHECK(dl == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("screening skips primes dividing denominators") {
    Endo f = Endo::parse("1/5*x^2", "y^2");
    int used = 0;
    auto d = screened_degrees(f, 3, {5, 1000003}, false, &used);
    CHECK(used == 1);
    CHECK(d == std::vector<int>{2, 4, 8});
    CHECK_THROWS(screened_degrees(f, 3, {5}, false));
}

TEST_CASE("squarefree factorization") {
    // (x-y)^2 (x+y)
    Poly2 P = parse_poly("x - y").pow(2) * parse_poly("x + y");
    auto parts = squarefree_factor(P);
    REQUIRE(parts.size() == 2);
    // sort by multiplicity
    if (parts[0].multiplicity > parts[1].multiplicity) std::swap(parts[0], parts[1]);
    CHECK(parts[0].multiplicity == 1);
    CHECK(parts[1].multiplicity == 2);
    // parts equal up to rational unit
    auto unit_eq = [](const Poly2& a, const Poly2& b) {
        if (a.t.size() != b.t.size()) return false;
        Rat ratio = a.t.begin()->second / b.t.begin()->second;
        return a == b * ratio;
    };
    CHECK(unit_eq(parts[0].part, parse_poly("x + y")));
    CHECK(unit_eq(parts[1].part, parse_poly("x - y")));

    auto sf2 = squarefree_factor(parse_poly("x^2 - y^2"));
    REQUIRE(sf2.size() == 1);
    CHECK(sf2[0].multiplicity == 1);
    CHECK(unit_eq(sf2[0].part, parse_poly("x^2 - y^2")));

    CHECK(squarefree_factor(parse_poly("5")).empty());

    // reconstruction up to a unit on a random-ish product
    Poly2 Q = parse_poly("x").pow(3) * parse_poly("y - x^2").pow(2) * parse_poly("x*y - 1");
    auto sq = squarefree_factor(Q);
    Poly2 prod(Rat(1));
    for (auto& s : sq) prod = prod * s.part.pow(s.multiplicity);
    CHECK(unit_eq(prod, Q));
}

TEST_CASE("univariate factorization over Q") {
    // (t^2+1)(t-3)^2 (2t+1)
    Poly1 f;
    {
        Poly1 a, b, c;
        a.set(2, Rat(1)); a.set(0, Rat(1));
        b.set(1, Rat(1)); b.set(0, Rat(-3));
        c.set(1, Rat(2)); c.set(0, Rat(1));
        f = a * b * b * c;
    }
    auto r = factor_poly1(f);
    CHECK(r.certified);
    REQUIRE(r.factors.size() == 3);
    int found = 0;
    for (auto& [g, m] : r.factors) {
        if (g.deg() == 2) { CHECK(m == 1); ++found; }
        if (g.deg() == 1 && m == 2) { CHECK(sgn(g.get(0)) < 0); ++found; }
        if (g.deg() == 1 && m == 1) { ++found; }
    }
    CHECK(found == 3);

    // irreducible quartic stays whole
    Poly1 q;
    q.set(4, Rat(1)); q.set(0, Rat(1));
    q.set(1, Rat(1));  // t^4 + t + 1 (irreducible over Q)
    auto rq = factor_poly1(q);
    CHECK(rq.certified);
    REQUIRE(rq.factors.size() == 1);
    CHECK(rq.factors[0].first.deg() == 4);
}

TEST_CASE("bivariate factorization best effort") {
    auto unit_eq = [](const Poly2& a, const Poly2& b) {
        if (a.zero() || b.zero()) return a.zero() && b.zero();
        Rat ratio = a.t.begin()->second / b.t.begin()->second;
        return a == b * ratio;
    };
    auto r = factor_bivariate_squarefree(parse_poly("x^2 - y^2"));
    CHECK(r.complete);
    REQUIRE(r.factors.size() == 2);
    bool m1 = unit_eq(r.factors[0].factor, parse_poly("y - x")) ||
              unit_eq(r.factors[0].factor, parse_poly("y + x"));
    CHECK(m1);
    Poly2 prod = r.factors[0].factor * r.factors[1].factor;
    CHECK(unit_eq(prod, parse_poly("x^2 - y^2")));

    // irreducible conic
    auto r2 = factor_bivariate_squarefree(parse_poly("x*y - 1"));
    REQUIRE(r2.factors.size() == 1);
    CHECK(r2.factors[0].irreducible_certified);

    // y^2 - x^2*(x+1): irreducible over Q
    auto r3 = factor_bivariate_squarefree(parse_poly("y^2 - x^3 - x^2"));
    REQUIRE(r3.factors.size() == 1);
    CHECK(r3.factors[0].irreducible_certified);

    // product of a line and a hyperbola
    auto r4 = factor_bivariate_squarefree(parse_poly("x*y - 1") * parse_poly("x + y"));
    CHECK(r4.complete);
    CHECK(r4.factors.size() == 2);
}

TEST_CASE("gcd bivariate") {
    Poly2 a = parse_poly("x - y") * parse_poly("x + y^2");
    Poly2 b = parse_poly("x - y") * parse_poly("y");
    Poly2 g = gcd_bivariate(a, b);
    Poly2 q;
    CHECK(poly2_divides(g, a, &q));
    CHECK(poly2_divides(g, b, &q));
    CHECK(g.deg() == 1);
}

TEST_CASE("truncated nth root comparisons") {
    // 2^(1/1) vs 8^(1/3): equal
    CHECK(cmp_nth_roots(Int(2), 1, Int(8), 3) == 0);
    CHECK(cmp_nth_roots(Int(3), 1, Int(8), 3) > 0);
    CHECK(cmp_nth_roots(Int(20), 2, Int(80), 3) > 0);  // sqrt(20) vs 80^(1/3)
}
