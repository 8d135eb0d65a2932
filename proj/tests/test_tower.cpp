// Blowup towers: chart pullback orders, b / skewness / thinness invariants,
// dual classes, intersection lattice bookkeeping.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "valinf/tower.hpp"

using namespace valinf;

TEST_CASE("fresh tower: the line at infinity") {
    BlowupTower t;
    CHECK(t.size() == 1);
    CHECK(t.node(0).b == 1);
    CHECK(t.node(0).ord_x == -1);
    CHECK(t.node(0).ord_y == -1);
    CHECK(t.node(0).ord_jac == -3);
    CHECK(t.skewness(0) == Rat(1));
    CHECK(t.skewness_lattice(0) == Rat(1));
    CHECK(t.thinness(0) == Rat(-2));
    CHECK(t.check_l_infty_pullback());

    // ord along l_infty by substitution
    CHECK(t.ord_on_divisor(0, parse_poly("x")) == -1);
    CHECK(t.ord_on_divisor(0, parse_poly("x^2*y")) == -3);
    CHECK(t.ord_on_divisor(0, parse_poly("1")) == 0);
    CHECK(t.ord_on_divisor(0, parse_poly("x + y + 1")) == -1);
}

TEST_CASE("first free blowup and satellite") {
    BlowupTower t;
    int e1 = t.blowup(PointSpec::free_point(0, K(make_rat(1, 2))));
    CHECK(t.node(e1).b == 1);
    CHECK(t.skewness(e1) == Rat(0));
    CHECK(t.skewness_lattice(e1) == Rat(0));
    CHECK(t.thinness(e1) == Rat(-1));
    CHECK(t.node(e1).ord_x == -1);
    CHECK(t.node(e1).ord_y == -1);
    CHECK(t.check_l_infty_pullback());

    // satellite E1 with l_infty: b = 2, alpha = 1/2
    int e2 = t.blowup(PointSpec::satellite(e1, 0));
    CHECK(t.node(e2).b == 2);
    CHECK(t.skewness(e2) == make_rat(1, 2));
    CHECK(t.skewness_lattice(e2) == make_rat(1, 2));
    CHECK(t.thinness(e2) == make_rat(-3, 2));
    CHECK(t.check_l_infty_pullback());
    CHECK(t.recompute_matrix() == t.intersection_matrix());

    // free chain on E1: alpha drops to -1, thinness rises to 0
    int e3 = t.blowup(PointSpec::free_point(e1, K(Rat(3))));
    CHECK(t.node(e3).b == 1);
    CHECK(t.skewness(e3) == Rat(-1));
    CHECK(t.skewness_lattice(e3) == Rat(-1));
    CHECK(t.thinness(e3) == Rat(0));
    CHECK(t.recompute_matrix() == t.intersection_matrix());

    // alpha_pair: meets against the root have skewness 1
    CHECK(t.alpha_pair(0, e1) == Rat(1));
    CHECK(t.alpha_pair(0, 0) == Rat(1));
    // E2 lies between l_infty and E1: alpha_pair(e2, e1) = alpha(e2)
    CHECK(t.alpha_pair(e2, e1) == make_rat(1, 2));
    // incomparable free blowups at distinct points meet at the root
    int f1 = t.blowup(PointSpec::free_point(0, K(Rat(5))));
    CHECK(t.alpha_pair(e1, f1) == Rat(1));
    CHECK(t.alpha_pair(e3, f1) == Rat(1));
}

TEST_CASE("satellite chains and continued fractions") {
    BlowupTower t;
    int e1 = t.blowup(PointSpec::free_point(0, K(Rat(0))));
    int e2 = t.blowup(PointSpec::satellite(e1, 0));
    // deeper satellite between E2 and E1: b = 3, alpha = 1/3
    int e3 = t.blowup(PointSpec::satellite(e2, e1));
    CHECK(t.node(e3).b == 3);
    CHECK(t.skewness(e3) == make_rat(1, 3));
    CHECK(t.skewness_lattice(e3) == make_rat(1, 3));
    // and between E3 and E1: b = 4, alpha = 1/4
    int e4 = t.blowup(PointSpec::satellite(e3, e1));
    CHECK(t.node(e4).b == 4);
    CHECK(t.skewness_lattice(e4) == make_rat(1, 4));
    CHECK(t.check_l_infty_pullback());
    CHECK(t.recompute_matrix() == t.intersection_matrix());

    // satellites of previously separated divisors are rejected
    CHECK_THROWS(t.blowup(PointSpec::satellite(e1, 0)));
}

TEST_CASE("ord_on_divisor is a valuation") {
    BlowupTower t;
    int e1 = t.blowup(PointSpec::free_point(0, K(Rat(0))));
    int e2 = t.blowup(PointSpec::satellite(e1, 0));
    Poly2 P = parse_poly("x^2*y - 3/2*x");
    Poly2 Q = parse_poly("y^2 + x");
    for (int node : {0, e1, e2}) {
        long op = t.ord_on_divisor(node, P);
        long oq = t.ord_on_divisor(node, Q);
        CHECK(t.ord_on_divisor(node, P * Q) == op + oq);
        CHECK(t.ord_on_divisor(node, P + Q) >= std::min(op, oq));
    }
}

TEST_CASE("jacobian order by direct chart differentiation") {
    BlowupTower t;
    int e1 = t.blowup(PointSpec::free_point(0, K(Rat(1))));
    int e2 = t.blowup(PointSpec::satellite(e1, 0));
    int e3 = t.blowup(PointSpec::free_point(e2, K(Rat(2))));
    for (int node : {0, e1, e2, e3}) {
        const Chart& ch = t.chart(t.node(node).chartA);
        Poly2Q Au = ch.A.derivative_x(), Av = ch.A.derivative_y();
        Poly2Q Bu = ch.B.derivative_x(), Bv = ch.B.derivative_y();
        Poly2Q Cu = ch.C.derivative_x(), Cv = ch.C.derivative_y();
        Poly2Q num = (Au * ch.C - ch.A * Cu) * (Bv * ch.C - ch.B * Cv) -
                     (Av * ch.C - ch.A * Cv) * (Bu * ch.C - ch.B * Cu);
        long oj = num.ord_x() - 4 * ch.C.ord_x();
        CHECK(oj == t.node(node).ord_jac);
    }
}

TEST_CASE("errors") {
    BlowupTower t;
    CHECK_THROWS(t.blowup(PointSpec::free_point(7, K(Rat(0)))));
    int e1 = t.blowup(PointSpec::free_point(0, K(Rat(0))));
    (void)e1;
    CHECK_THROWS(t.blowup(PointSpec::free_point(0, K(Rat(0)))));  // already blown
    CHECK_THROWS(t.ord_on_divisor(0, Poly2()));
}
