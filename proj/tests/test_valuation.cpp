// Valuations: evaluation, normalization, meets, comparison, tree metric,
// retraction, tangent directions, centers.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "valinf/branch.hpp"
#include "valinf/valuation.hpp"

using namespace valinf;

static std::shared_ptr<BlowupTower> make_tower() { return std::make_shared<BlowupTower>(); }

TEST_CASE("-deg evaluation and normalization") {
    auto v = Valuation::neg_deg();
    CHECK(v->evaluate(parse_poly("x^3*y")).finite() == Rat(-4));
    CHECK(v->evaluate(parse_poly("5")).finite() == Rat(0));
    CHECK(v->evaluate(Poly2()).is_inf());
    CHECK(v->alpha() == QuadExt(Rat(1)));
    CHECK(v->thinness() == QuadExt(Rat(-2)));
    CHECK(v->evaluate(parse_poly("x")).finite() == Rat(-1));
    CHECK(v->evaluate(parse_poly("y")).finite() == Rat(-1));
}

TEST_CASE("divisorial valuations evaluate through chart pullback") {
    auto t = make_tower();
    int e1 = t->blowup(PointSpec::free_point(0, K(Rat(0))));  // over [0:1:0]
    auto v = Valuation::divisorial(t, e1);
    Rat vx = v->evaluate(parse_poly("x")).finite();
    Rat vy = v->evaluate(parse_poly("y")).finite();
    CHECK(std::min(vx, vy) == Rat(-1));
    CHECK(vx == Rat(0));  // the strict transform of {x=0} passes through [0:1:0]
    CHECK(vy == Rat(-1));
    Poly2 P = parse_poly("x^2 - y");
    Poly2 Q = parse_poly("x*y + 1");
    CHECK(v->evaluate(P * Q).finite() ==
          v->evaluate(P).finite() + v->evaluate(Q).finite());
}

TEST_CASE("quasimonomial normalization and toric fast path") {
    auto v = Valuation::toric(QuadExt(Rat(-1)), QuadExt(make_rat(-1, 2)));
    CHECK(v->evaluate(parse_poly("x")).finite() == Rat(-1));
    CHECK(v->evaluate(parse_poly("y")).finite() == make_rat(-1, 2));
    CHECK(v->evaluate(parse_poly("x*y^2")).finite() == Rat(-2));
    CHECK(v->alpha() == QuadExt(make_rat(1, 2)));
    CHECK(v->thinness() == QuadExt(make_rat(-3, 2)));
    CHECK(v->is_divisorial());

    auto d = realize_divisorial(v);
    CHECK(d->alpha() == v->alpha());
    CHECK(d->thinness() == v->thinness());
    for (const char* s : {"x", "y", "x^2*y - 3/2", "x + y^3"}) {
        CHECK(d->evaluate(parse_poly(s)).finite() == v->evaluate(parse_poly(s)).finite());
    }

    auto w = Valuation::toric(QuadExt(Rat(-1)), QuadExt(make_rat(1, 2)));
    CHECK(w->alpha() == QuadExt(make_rat(-1, 2)));
    auto dw = realize_divisorial(w);
    CHECK(dw->alpha() == w->alpha());
    CHECK(dw->evaluate(parse_poly("y")).finite() == make_rat(1, 2));
}

TEST_CASE("meets and comparison: basic order structure") {
    auto nd = Valuation::neg_deg();
    auto t = make_tower();
    int e1 = t->blowup(PointSpec::free_point(0, K(Rat(0))));
    int e2 = t->blowup(PointSpec::free_point(e1, K(Rat(1))));
    auto v1 = Valuation::divisorial(t, e1);
    auto v2 = Valuation::divisorial(t, e2);

    CHECK(compare(nd, v1) == Cmp::Less);
    CHECK(compare(v1, nd) == Cmp::Greater);
    CHECK(compare(v1, v2) == Cmp::Less);
    CHECK(compare(v2, v1) == Cmp::Greater);
    CHECK(compare(v1, v1) == Cmp::Equal);

    MeetResult m = meet(nd, v2);
    CHECK(m.relation == Cmp::Less);
    CHECK(m.alpha == QuadExt(Rat(1)));

    auto t2 = make_tower();
    int f1 = t2->blowup(PointSpec::free_point(0, K(Rat(2))));
    auto w = Valuation::divisorial(t2, f1);
    MeetResult m2 = meet(v1, w);
    CHECK(m2.relation == Cmp::Incomparable);
    CHECK(m2.alpha == QuadExt(Rat(1)));
    CHECK(tree_equal(m2.meet, nd));

    auto t3 = make_tower();
    int g1 = t3->blowup(PointSpec::free_point(0, K(Rat(0))));
    auto v1b = Valuation::divisorial(t3, g1);
    CHECK(tree_equal(v1, v1b));

    auto t4 = make_tower();
    int h1 = t4->blowup(PointSpec::free_point(0, K(Rat(0))));
    int h2 = t4->blowup(PointSpec::free_point(h1, K(Rat(1))));
    int h3 = t4->blowup(PointSpec::free_point(h1, K(Rat(2))));
    auto a = Valuation::divisorial(t4, h2);
    auto b = Valuation::divisorial(t4, h3);
    MeetResult m3 = meet(a, b);
    CHECK(m3.relation == Cmp::Incomparable);
    CHECK(m3.alpha == QuadExt(Rat(0)));
    CHECK(tree_equal(m3.meet, v1));
}

TEST_CASE("tree distance") {
    auto nd = Valuation::neg_deg();
    auto t = make_tower();
    int e1 = t->blowup(PointSpec::free_point(0, K(Rat(0))));
    auto v1 = Valuation::divisorial(t, e1);
    CHECK(tree_distance(v1, v1) == QuadExt(Rat(0)));
    CHECK(tree_distance(nd, v1) == QuadExt(Rat(1)));
    auto v2 = Valuation::toric(QuadExt(Rat(-1)), QuadExt(make_rat(-1, 3)));
    auto v3 = Valuation::toric(QuadExt(make_rat(-1, 2)), QuadExt(Rat(-1)));
    auto dd = [&](ValPtr a, ValPtr b) { return tree_distance(a, b); };
    CHECK(((dd(v1, v2) + dd(v2, v3)) - dd(v1, v3)).sign() >= 0);
    CHECK(((dd(v1, v3) + dd(v3, v2)) - dd(v1, v2)).sign() >= 0);
}

TEST_CASE("monotonicity of evaluation along the order") {
    auto nd = Valuation::neg_deg();
    auto t = make_tower();
    int e1 = t->blowup(PointSpec::free_point(0, K(Rat(1))));
    int e2 = t->blowup(PointSpec::free_point(e1, K(Rat(0))));
    auto v1 = Valuation::divisorial(t, e1);
    auto v2 = Valuation::divisorial(t, e2);
    for (const char* s : {"x", "y", "x - y", "x*y - 1", "x^2 + y^2 - 3", "y - 2*x + 1"}) {
        Poly2 P = parse_poly(s);
        CHECK(nd->evaluate(P).finite() <= v1->evaluate(P).finite());
        CHECK(v1->evaluate(P).finite() <= v2->evaluate(P).finite());
    }
}

TEST_CASE("curve valuations from branches: spec examples") {
    auto bx = branches(parse_poly("x"));
    REQUIRE(bx.branches.size() == 1);
    REQUIRE(bx.complete());
    auto vb = curve_valuation(bx.branches[0]);
    CHECK(vb->evaluate(parse_poly("x")).is_inf());
    CHECK(vb->evaluate(parse_poly("y")).finite() == Rat(-1));
    CHECK(bx.branches[0]->multiplicity() == 1);

    auto bp = branches(parse_poly("y - x^2"));
    REQUIRE(bp.branches.size() == 1);
    CHECK(bp.branches[0]->multiplicity() == 2);
    auto vp = curve_valuation(bp.branches[0]);
    CHECK(vp->evaluate(parse_poly("x")).finite() == make_rat(-1, 2));
    CHECK(vp->evaluate(parse_poly("y")).finite() == Rat(-1));
    CHECK(vp->evaluate(parse_poly("y - x^2")).is_inf());
    CHECK(vp->evaluate(parse_poly("1")).finite() == Rat(0));

    auto bh = branches(parse_poly("x*y - 1"));
    REQUIRE(bh.branches.size() == 2);
    CHECK(bh.branches[0]->multiplicity() == 1);
    CHECK(bh.branches[1]->multiplicity() == 1);
    MeetResult mh = meet(curve_valuation(bh.branches[0]), curve_valuation(bh.branches[1]));
    CHECK(mh.relation == Cmp::Incomparable);
    CHECK(mh.alpha == QuadExt(Rat(1)));
}

TEST_CASE("meet of tangent parabola branches") {
    auto b1 = branches(parse_poly("y - x^2"));
    auto b2 = branches(parse_poly("y - x^2 - 1"));
    REQUIRE(b1.branches.size() == 1);
    REQUIRE(b2.branches.size() == 1);
    auto v1 = curve_valuation(b1.branches[0]);
    auto v2 = curve_valuation(b2.branches[0]);
    MeetResult m = meet(v1, v2);
    CHECK(m.relation == Cmp::Incomparable);
    CHECK(m.alpha == QuadExt(Rat(0)));
    CHECK(intersection_at_infinity(b1.branches[0], b2.branches[0]) == Rat(4));

    auto nd = Valuation::neg_deg();
    CHECK(compare(nd, v1) == Cmp::Less);
}

TEST_CASE("retraction to finite trees") {
    auto nd = Valuation::neg_deg();
    auto t = make_tower();
    int e1 = t->blowup(PointSpec::free_point(0, K(Rat(0))));
    int e2 = t->blowup(PointSpec::free_point(e1, K(Rat(0))));
    auto v1 = Valuation::divisorial(t, e1);
    auto v2 = Valuation::divisorial(t, e2);

    FiniteTree T({v1});
    CHECK(tree_equal(T.retract(v1), v1));
    CHECK(tree_equal(T.retract(nd), nd));
    CHECK(tree_equal(T.retract(v2), v1));
    auto t2 = make_tower();
    int f1 = t2->blowup(PointSpec::free_point(0, K(Rat(3))));
    auto w = Valuation::divisorial(t2, f1);
    CHECK(tree_equal(T.retract(w), nd));

    FiniteTree T0({});
    CHECK(tree_equal(T0.retract(v2), nd));
}

TEST_CASE("direction_at and center_of") {
    auto nd = Valuation::neg_deg();
    auto t = make_tower();
    int e1 = t->blowup(PointSpec::free_point(0, K(Rat(0))));
    auto v1 = Valuation::divisorial(t, e1);

    TangentDirection d = direction_at(nd, v1);
    CHECK(!d.toward_root);
    CHECK(d.point.kind == WalkDesc::Finite);
    CHECK(d.point.c == K(Rat(0)));

    TangentDirection d2 = direction_at(v1, nd);
    CHECK(d2.toward_root);

    auto bp = branches(parse_poly("y - x^2"));
    auto vp = curve_valuation(bp.branches[0]);
    BlowupTower fresh;
    CenterResult c = center_of(fresh, vp);
    CHECK(!c.generic);
    CHECK(c.node == 0);
    CHECK(c.dir.kind == WalkDesc::Finite);
    CHECK(c.dir.c == K(Rat(0)));

    CenterResult cg = center_of(fresh, nd);
    CHECK(cg.generic);

    auto tptr = make_tower();
    int g1 = tptr->blowup(PointSpec::free_point(0, K(Rat(0))));
    auto qm = Valuation::quasimonomial(tptr, tptr->node(g1).chartB, K(),
                                       QuadExt(Rat(2)), QuadExt(Rat(1)));
    CenterResult cs = center_of(*tptr, qm);
    CHECK(!cs.generic);
}

TEST_CASE("quasimonomial equals its continued-fraction divisorial realization") {
    auto t = make_tower();
    int e1 = t->blowup(PointSpec::free_point(0, K(Rat(0))));
    auto qm = Valuation::quasimonomial(t, t->node(e1).chartB, K(), QuadExt(Rat(5)),
                                       QuadExt(Rat(3)));
    auto d = realize_divisorial(qm);
    CHECK(d->is_divisorial());
    CHECK(qm->alpha() == d->alpha());
    for (const char* s : {"x", "y", "x*y - 1", "x^2*y - 3/2", "y^3 - x"}) {
        CHECK(qm->evaluate(parse_poly(s)).finite() == d->evaluate(parse_poly(s)).finite());
    }
    CHECK(tree_equal(qm, d));
}

TEST_CASE("lazy images evaluate and localize") {
    Endo f = Endo::parse("x^2", "y^2");
    auto nd = Valuation::neg_deg();
    auto img = Valuation::lazy_image(f, nd);
    CHECK(img->evaluate(parse_poly("x")).finite() == Rat(-1));
    CHECK(img->evaluate(parse_poly("x + y^2")).finite() == Rat(-2));
    CHECK(tree_equal(img, nd));

    Endo g = Endo::parse("x^2", "x*y^2");
    auto img2 = Valuation::lazy_image(g, nd);
    auto expected = Valuation::toric(QuadExt(make_rat(-2, 3)), QuadExt(Rat(-1)));
    CHECK(img2->evaluate(parse_poly("x")).finite() == make_rat(-2, 3));
    CHECK(img2->evaluate(parse_poly("y")).finite() == Rat(-1));
    CHECK(tree_equal(img2, expected));
    auto loc = realize_divisorial(img2);
    CHECK(loc->alpha() == expected->alpha());
}

TEST_CASE("normalization invariant holds for constructed valuations") {
    std::vector<ValPtr> vs;
    vs.push_back(Valuation::neg_deg());
    vs.push_back(Valuation::toric(QuadExt(Rat(-1)), QuadExt(make_rat(3, 4))));
    auto t = make_tower();
    int e1 = t->blowup(PointSpec::free_point(0, K(Rat(2))));
    vs.push_back(Valuation::divisorial(t, e1));
    auto bp = branches(parse_poly("y - x^3"));
    for (auto& b : bp.branches) vs.push_back(curve_valuation(b));
    for (auto& v : vs) {
        ExtRat ex = v->evaluate(parse_poly("x"));
        ExtRat ey = v->evaluate(parse_poly("y"));
        Rat vx = ex.is_inf() ? Rat(0) : ex.finite();
        Rat vy = ey.is_inf() ? Rat(0) : ey.finite();
        CHECK(std::min(vx, vy) == Rat(-1));
    }
}
