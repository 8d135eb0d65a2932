// valuation.cpp
// -------------
// Valuation kernels and the shared center-path walk.

#include "valinf/valuation.hpp"

#include "valinf/branch.hpp"

#include <algorithm>
#include <sstream>

namespace valinf {

// ---------------------------------------------------------------------------
// MonomialKernel
// ---------------------------------------------------------------------------

namespace {

QuadExt weight_min_q(const Poly2Q& germ, const QuadExt& wu, const QuadExt& wv) {
    if (germ.zero()) throw std::domain_error("weight_min_q: zero germ");
    bool first = true;
    QuadExt best;
    for (auto& [m, c] : germ.t) {
        QuadExt w = wu * QuadExt(Rat((long)m.i)) + wv * QuadExt(Rat((long)m.j));
        if (first || (w - best).sign() < 0) {
            best = w;
            first = false;
        }
    }
    return best;
}

Poly2Q weight_leading_form_q(const Poly2Q& germ, const QuadExt& wu, const QuadExt& wv) {
    QuadExt best = weight_min_q(germ, wu, wv);
    Poly2Q r;
    for (auto& [m, c] : germ.t) {
        QuadExt w = wu * QuadExt(Rat((long)m.i)) + wv * QuadExt(Rat((long)m.j));
        if ((w - best).sign() == 0) r.t[m] = c;
    }
    return r;
}

// c with F1 = c * F2, if it exists
std::optional<K> proportional(const Poly2Q& F1, const Poly2Q& F2) {
    if (F1.t.size() != F2.t.size()) return std::nullopt;
    auto it1 = F1.t.begin();
    auto it2 = F2.t.begin();
    K c = it1->second / it2->second;
    for (; it1 != F1.t.end(); ++it1, ++it2) {
        if (!(it1->first == it2->first)) return std::nullopt;
        if (!(it1->second == it2->second * c)) return std::nullopt;
    }
    return c;
}

void strip_pair(Poly2Q& n, Poly2Q& d) {
    int a = std::min(n.ord_x(), d.ord_x());
    int b = std::min(n.ord_y(), d.ord_y());
    if (a > 0 || b > 0) {
        n = n.shift_down(a, b);
        d = d.shift_down(a, b);
    }
}

}  // namespace

QuadExt MonomialKernel::mu(const Poly2Q& germ) const { return weight_min_q(germ, wu, wv); }

Poly2Q MonomialKernel::leading_form(const Poly2Q& germ) const {
    return weight_leading_form_q(germ, wu, wv);
}

Poly2Q MonomialKernel::hat(const Poly2Q& P, int d) const {
    Poly2Q acc;
    for (auto& [m, co] : P.t) {
        Poly2Q term{co};
        term = term * At.pow(m.i) * Bt.pow(m.j) * Ct.pow(d - m.i - m.j);
        acc = acc + term;
    }
    return acc;
}

QuadExt MonomialKernel::value(const Poly2Q& P) const {
    if (P.zero()) throw std::domain_error("MonomialKernel::value of zero polynomial");
    int d = P.deg();
    Poly2Q h = hat(P, d);
    if (h.zero()) throw std::logic_error("MonomialKernel: pullback vanished");
    return mu(h) - mu(Ct) * QuadExt(Rat((long)d));
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

namespace {
std::shared_ptr<const BlowupTower> standard_tower() {
    static std::shared_ptr<const BlowupTower> t = std::make_shared<BlowupTower>();
    return t;
}
}  // namespace

ValPtr Valuation::neg_deg() {
    auto v = std::make_shared<Valuation>();
    v->kind = ValKind::NegDeg;
    v->alpha_cache = QuadExt(Rat(1));
    v->thin_cache = QuadExt(Rat(-2));
    return v;
}

ValPtr Valuation::divisorial(std::shared_ptr<const BlowupTower> t, int node) {
    if (node == 0) return neg_deg();
    auto k = std::make_shared<MonomialKernel>();
    k->tower = t;
    k->chart = t->node(node).chartA;
    k->cu = K();
    k->cv = K();
    k->wu = QuadExt(Rat(1, t->node(node).b));
    k->wv = QuadExt();
    const Chart& ch = t->chart(k->chart);
    k->At = ch.A;
    k->Bt = ch.B;
    k->Ct = ch.C;
    auto v = std::make_shared<Valuation>();
    v->kind = ValKind::Monomial;
    v->mono = k;
    v->alpha_cache = QuadExt(t->node(node).alpha);
    v->thin_cache = QuadExt(t->node(node).thinness);
    return v;
}

ValPtr Valuation::quasimonomial(std::shared_ptr<const BlowupTower> t, int chart, const K& c,
                                const QuadExt& wu, const QuadExt& wv) {
    if (wu.sign() <= 0 || wv.sign() < 0)
        throw std::domain_error("quasimonomial: weights must satisfy wu > 0, wv >= 0");
    auto k = std::make_shared<MonomialKernel>();
    k->tower = t;
    k->chart = chart;
    k->cu = K();
    k->cv = c;
    k->wu = wu;
    k->wv = wv;
    const Chart& ch = t->chart(chart);
    Poly2Q shift = Poly2Q::var_y() + Poly2Q(c);
    k->At = ch.A.subst(Poly2Q::var_x(), shift);
    k->Bt = ch.B.subst(Poly2Q::var_x(), shift);
    k->Ct = ch.C.subst(Poly2Q::var_x(), shift);
    // normalize min{v(x), v(y)} = -1
    QuadExt vx = k->value(Poly2Q::var_x());
    QuadExt vy = k->value(Poly2Q::var_y());
    QuadExt m = ((vx - vy).sign() <= 0) ? vx : vy;
    if (m.sign() >= 0)
        throw std::domain_error("quasimonomial: valuation not centered at infinity");
    QuadExt scale = QuadExt(Rat(-1)) / m;
    k->wu = k->wu * scale;
    k->wv = k->wv * scale;
    auto v = std::make_shared<Valuation>();
    v->kind = ValKind::Monomial;
    v->mono = k;
    return v;
}

ValPtr Valuation::toric(const QuadExt& ax_in, const QuadExt& ay_in) {
    QuadExt ax = ax_in, ay = ay_in;
    QuadExt m = ((ax - ay).sign() <= 0) ? ax : ay;
    if (m.sign() >= 0) throw std::domain_error("toric: min{v(x),v(y)} must be negative");
    QuadExt scale = QuadExt(Rat(-1)) / m;
    if (!(scale == QuadExt(Rat(1)))) {
        ax = ax * scale;
        ay = ay * scale;
    }
    if (ax == QuadExt(Rat(-1)) && ay == QuadExt(Rat(-1))) return neg_deg();
    auto t = standard_tower();
    // choose the chart at [1:0:0] when v(x) = -1 <= v(y), else [0:1:0]
    ValPtr v;
    if (ax == QuadExt(Rat(-1))) {
        // chart_x: (u, v) = (1/x, y/x); weights (1, ay + 1)
        v = quasimonomial(t, t->node(0).chartB, K(), QuadExt(Rat(1)), ay + QuadExt(Rat(1)));
    } else {
        v = quasimonomial(t, t->node(0).chartA, K(), QuadExt(Rat(1)), ax + QuadExt(Rat(1)));
    }
    auto vv = std::const_pointer_cast<Valuation>(v);
    vv->toric_xy = std::make_pair(ax, ay);
    return v;
}

ValPtr Valuation::curve(std::shared_ptr<Branch> b) {
    auto v = std::make_shared<Valuation>();
    v->kind = ValKind::Curve;
    v->branch = std::move(b);
    return v;
}

namespace {
// -deg as an explicit monomial kernel (weight 1 on the l_infty coordinate),
// for cursor construction through lazy images
ValPtr monomial_negdeg() {
    auto t = std::make_shared<BlowupTower>();
    auto k = std::make_shared<MonomialKernel>();
    k->tower = t;
    k->chart = t->node(0).chartA;
    k->wu = QuadExt(Rat(1));
    k->wv = QuadExt();
    const Chart& ch = t->chart(k->chart);
    k->At = ch.A;
    k->Bt = ch.B;
    k->Ct = ch.C;
    auto v = std::make_shared<Valuation>();
    v->kind = ValKind::Monomial;
    v->mono = k;
    v->alpha_cache = QuadExt(Rat(1));
    v->thin_cache = QuadExt(Rat(-2));
    return v;
}
}  // namespace

ValPtr Valuation::lazy_image(const Endo& f, ValPtr src) {
    Endo total = f;
    while (src->kind == ValKind::Lazy) {
        total = compose(total, src->lazy->f);
        src = src->lazy->source;
    }
    // v(P) = src(P o total) / d with d = -min{src(total.F), src(total.G), 0}
    if (src->kind == ValKind::NegDeg) src = monomial_negdeg();
    ExtRat a = src->evaluate(total.F);
    ExtRat b = src->evaluate(total.G);
    Rat d(0);
    if (!a.is_inf()) d = std::max(d, Rat(-a.finite()));
    if (!b.is_inf()) d = std::max(d, Rat(-b.finite()));
    if (sgn(d) <= 0)
        throw std::domain_error("lazy_image: valuation contracted at infinity (d = 0)");
    auto v = std::make_shared<Valuation>();
    v->kind = ValKind::Lazy;
    v->lazy = std::make_shared<LazyData>(LazyData{total, src, d});
    return v;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

ExtRat Valuation::evaluate(const Poly2& P) const {
    if (P.zero()) return ExtRat::inf();
    switch (kind) {
        case ValKind::NegDeg:
            return ExtRat(Rat(-P.deg()));
        case ValKind::Monomial: {
            QuadExt v = evaluate_q(P);
            if (!v.is_rational())
                throw std::domain_error("evaluate: irrational value; use evaluate_q");
            return ExtRat(v.rational());
        }
        case ValKind::Curve:
            return branch->evaluate_normalized(P);
        case ValKind::Lazy: {
            ExtRat s = lazy->source->evaluate(lazy->f.pullback(P));
            if (s.is_inf()) return s;
            Rat r = s.finite() / lazy->d;
            r.canonicalize();
            return ExtRat(r);
        }
    }
    throw std::logic_error("evaluate: bad kind");
}

QuadExt Valuation::evaluate_q(const Poly2& P) const {
    if (P.zero()) throw std::domain_error("evaluate_q: +infinity");
    if (kind == ValKind::Monomial) {
        if (toric_xy) {
            bool first = true;
            QuadExt best;
            for (auto& [m, c] : P.t) {
                QuadExt w = toric_xy->first * QuadExt(Rat((long)m.i)) +
                            toric_xy->second * QuadExt(Rat((long)m.j));
                if (first || (w - best).sign() < 0) {
                    best = w;
                    first = false;
                }
            }
            return best;
        }
        return mono->value(promote(P));
    }
    ExtRat e = evaluate(P);
    if (e.is_inf()) throw std::domain_error("evaluate_q: +infinity");
    return QuadExt(e.finite());
}

bool Valuation::evaluates_infinite(const Poly2& P) const {
    if (P.zero()) return true;
    if (kind == ValKind::Curve) return branch->evaluates_infinite(P);
    if (kind == ValKind::Lazy) return lazy->source->evaluates_infinite(lazy->f.pullback(P));
    return false;
}

bool Valuation::is_divisorial() const {
    switch (kind) {
        case ValKind::NegDeg:
            return true;
        case ValKind::Monomial:
            return mono->wu.is_rational() && mono->wv.is_rational();
        default:
            return false;
    }
}

std::optional<std::pair<QuadExt, QuadExt>> Valuation::toric_coords() const {
    if (kind == ValKind::NegDeg)
        return std::make_pair(QuadExt(Rat(-1)), QuadExt(Rat(-1)));
    return toric_xy;
}

std::string Valuation::describe() const {
    std::ostringstream os;
    switch (kind) {
        case ValKind::NegDeg:
            os << "-deg";
            break;
        case ValKind::Monomial:
            if (toric_xy)
                os << "monomial(v(x)=" << toric_xy->first.str()
                   << ", v(y)=" << toric_xy->second.str() << ")";
            else
                os << "monomial(chart " << mono->chart << ", c=" << mono->cv.str()
                   << ", w=(" << mono->wu.str() << "," << mono->wv.str() << "))";
            break;
        case ValKind::Curve:
            os << branch->describe();
            break;
        case ValKind::Lazy:
            os << "image(" << lazy->source->describe() << ")";
            break;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// The monomial walk cursor
// ---------------------------------------------------------------------------

namespace {

class MonoWalkCursor final : public WalkCursor {
  public:
    MonoWalkCursor(const MonomialKernel* k, const Endo* prefix) : k_(k) {
        if (!prefix) {
            Xn_ = k_->At; Xd_ = k_->Ct;
            Yn_ = k_->Bt; Yd_ = k_->Ct;
        } else {
            int dF = prefix->F.deg(), dG = prefix->G.deg();
            Xn_ = k_->hat(promote(prefix->F), dF);
            Xd_ = k_->Ct.pow(dF);
            Yn_ = k_->hat(promote(prefix->G), dG);
            Yd_ = k_->Ct.pow(dG);
        }
    }

    WalkDesc stage0() override {
        // v(x/y) sign decides the center on l_infty
        QuadExt d = val(Xn_, Xd_) - val(Yn_, Yd_);
        if (d.sign() > 0) return WalkDesc::finite(K());
        if (d.sign() < 0) return WalkDesc::infinity();
        auto c = residue(Xn_ * Yd_, Yn_ * Xd_);
        if (!c) return WalkDesc::generic();
        return WalkDesc::finite(*c);
    }

    void init0(const WalkDesc& common) override {
        if (common.kind == WalkDesc::Finite) {
            Un_ = Yd_;
            Ud_ = Yn_;
            Vn_ = Xn_ * Yd_ - (Xd_ * Yn_) * common.c;
            Vd_ = Xd_ * Yn_;
        } else {
            Un_ = Xd_;
            Ud_ = Xn_;
            Vn_ = Yn_ * Xd_;
            Vd_ = Yd_ * Xn_;
        }
        strip_pair(Un_, Ud_);
        strip_pair(Vn_, Vd_);
    }

    WalkDesc descriptor() override {
        QuadExt t = val(Vn_, Vd_) - val(Un_, Ud_);
        if (t.sign() > 0) return WalkDesc::finite(K());
        if (t.sign() < 0) return WalkDesc::infinity();
        auto c = residue(Vn_ * Ud_, Un_ * Vd_);
        if (!c) return WalkDesc::generic();
        return WalkDesc::finite(*c);
    }

    void step(const WalkDesc& common) override {
        if (common.kind == WalkDesc::Finite) {
            Poly2Q nVn = Vn_ * Ud_ - (Un_ * Vd_) * common.c;
            Poly2Q nVd = Vd_ * Un_;
            Vn_ = nVn;
            Vd_ = nVd;
        } else {
            Poly2Q nUn = Vn_, nUd = Vd_;
            Poly2Q nVn = Un_ * Vd_, nVd = Ud_ * Vn_;
            Un_ = nUn;
            Ud_ = nUd;
            Vn_ = nVn;
            Vd_ = nVd;
        }
        strip_pair(Un_, Ud_);
        strip_pair(Vn_, Vd_);
    }

  private:
    QuadExt val(const Poly2Q& n, const Poly2Q& d) const { return k_->mu(n) - k_->mu(d); }
    std::optional<K> residue(const Poly2Q& n, const Poly2Q& d) const {
        return proportional(k_->leading_form(n), k_->leading_form(d));
    }

    const MonomialKernel* k_;
    Poly2Q Xn_, Xd_, Yn_, Yd_;
    Poly2Q Un_, Ud_, Vn_, Vd_;
};

class NegDegCursor final : public WalkCursor {
  public:
    WalkDesc stage0() override { return WalkDesc::generic(); }
    void init0(const WalkDesc&) override { throw std::logic_error("NegDegCursor::init0"); }
    WalkDesc descriptor() override { throw std::logic_error("NegDegCursor::descriptor"); }
    void step(const WalkDesc&) override { throw std::logic_error("NegDegCursor::step"); }
};

}  // namespace

std::unique_ptr<WalkCursor> Valuation::make_cursor() const {
    switch (kind) {
        case ValKind::NegDeg:
            return std::make_unique<NegDegCursor>();
        case ValKind::Monomial:
            return std::make_unique<MonoWalkCursor>(mono.get(), nullptr);
        case ValKind::Curve:
            return branch->make_cursor(nullptr);
        case ValKind::Lazy: {
            const Valuation* src = lazy->source.get();
            if (src->kind == ValKind::Monomial)
                return std::make_unique<MonoWalkCursor>(src->mono.get(), &lazy->f);
            if (src->kind == ValKind::Curve) return src->branch->make_cursor(&lazy->f);
            throw std::logic_error("make_cursor: unsupported lazy source");
        }
    }
    throw std::logic_error("make_cursor: bad kind");
}

// ---------------------------------------------------------------------------
// The shared walk
// ---------------------------------------------------------------------------

namespace {

struct PathState {
    // data of the current point: it lies on divisor `cur`, and possibly on a
    // second divisor `vdiv`
    long b_cur = 1;
    Rat a_cur = Rat(1);
    bool has_v = false;
    long b_v = 0;
    Rat a_v;

    std::shared_ptr<BlowupTower> tw;  // optional realization
    int node = 0;

    struct NewDiv {
        long b;
        Rat alpha;
    };
    NewDiv preview() const {
        NewDiv nd;
        nd.b = b_cur + (has_v ? b_v : 0);
        if (!has_v) {
            nd.alpha = a_cur - Rat(1, b_cur * nd.b);
        } else {
            int s = (a_v > a_cur) ? 1 : -1;
            nd.alpha = a_cur + Rat(s, b_cur * nd.b);
        }
        nd.alpha.canonicalize();
        return nd;
    }
    // descend into direction d of the new divisor nd
    void commit(const NewDiv& nd, const WalkDesc& d) {
        long old_b = b_cur;
        Rat old_a = a_cur;
        if (d.kind == WalkDesc::Infinity) {
            has_v = true;
            b_v = old_b;
            a_v = old_a;
        } else if (d.kind == WalkDesc::Finite && !d.c.is_zero()) {
            has_v = false;
        }  // Finite 0 keeps the previous vdiv
        b_cur = nd.b;
        a_cur = nd.alpha;
    }

    static Direction to_dir(const WalkDesc& d) {
        if (d.kind == WalkDesc::Finite) return Direction::finite(d.c);
        return Direction::parent_satellite();
    }
};

}  // namespace

static MeetResult walk_pair(const ValPtr& a, const ValPtr& b, const WalkLimits& lim,
                            bool realize, WalkDesc* dir_of_b_at_a = nullptr) {
    MeetResult out;
    // toric fast path
    auto ta = a->toric_coords(), tb = b->toric_coords();
    if (ta && tb) {
        // legs: {v(y) = -1} and {v(x) = -1}; meet by leg logic
        auto [ax, ay] = *ta;
        auto [bx, by] = *tb;
        QuadExt mx, my;
        bool a_leg1 = (ay == QuadExt(Rat(-1)));  // leg with v(y) = -1 (toward x-pole growth)
        bool b_leg1 = (by == QuadExt(Rat(-1)));
        bool a_leg2 = (ax == QuadExt(Rat(-1)));
        bool b_leg2 = (bx == QuadExt(Rat(-1)));
        if (a_leg1 && b_leg1) {
            mx = ((ax - bx).sign() <= 0) ? ax : bx;
            my = QuadExt(Rat(-1));
        } else if (a_leg2 && b_leg2) {
            my = ((ay - by).sign() <= 0) ? ay : by;
            mx = QuadExt(Rat(-1));
        } else {
            mx = QuadExt(Rat(-1));
            my = QuadExt(Rat(-1));
        }
        out.meet = Valuation::toric(mx, my);
        QuadExt mmax = ((mx - my).sign() >= 0) ? mx : my;
        out.alpha = -mmax;
        bool eq_am = (mx == ax && my == ay);
        bool eq_bm = (mx == bx && my == by);
        if (eq_am && eq_bm) out.relation = Cmp::Equal;
        else if (eq_am) out.relation = Cmp::Less;
        else if (eq_bm) out.relation = Cmp::Greater;
        else out.relation = Cmp::Incomparable;
        return out;
    }

    auto ca = a->make_cursor();
    auto cb = b->make_cursor();
    WalkDesc d0a = ca->stage0(), d0b = cb->stage0();
    auto negd = Valuation::neg_deg();
    if (d0a.kind == WalkDesc::Generic || d0b.kind == WalkDesc::Generic || !(d0a == d0b)) {
        out.meet = negd;
        out.alpha = QuadExt(Rat(1));
        if (d0a.kind == WalkDesc::Generic && d0b.kind == WalkDesc::Generic)
            out.relation = Cmp::Equal;
        else if (d0a.kind == WalkDesc::Generic)
            out.relation = Cmp::Less;
        else if (d0b.kind == WalkDesc::Generic)
            out.relation = Cmp::Greater;
        else
            out.relation = Cmp::Incomparable;
        if (dir_of_b_at_a && out.relation == Cmp::Less) *dir_of_b_at_a = d0b;
        return out;
    }
    ca->init0(d0a);
    cb->init0(d0a);
    PathState st;
    if (realize) st.tw = std::make_shared<BlowupTower>();
    WalkDesc prev = d0a;
    // When one side takes the satellite direction toward the previous
    // divisor while the other stays at / above the current one, the first
    // may still lie *below* the current divisor; the stationary side is then
    // replaced by a synthetic cursor for the divisor approached from below
    // (it answers "satellite with the previous divisor" forever) and the
    // walk descends into the zone until the real side leaves it.
    bool synth_a = false, synth_b = false;
    for (int depth = 0; depth < lim.max_depth; ++depth) {
        PathState::NewDiv nd = st.preview();
        if (realize) st.node = st.tw->blowup(st.node, PathState::to_dir(prev));
        WalkDesc da = synth_a ? WalkDesc::infinity() : ca->descriptor();
        WalkDesc db = synth_b ? WalkDesc::infinity() : cb->descriptor();
        bool ga = (da.kind == WalkDesc::Generic), gb = (db.kind == WalkDesc::Generic);
        if (da == db && !ga) {
            if (!synth_a) ca->step(da);
            if (!synth_b) cb->step(da);
            st.commit(nd, da);
            prev = da;
            continue;
        }
        bool ia = (da.kind == WalkDesc::Infinity), ib = (db.kind == WalkDesc::Infinity);
        if (ia && !synth_a && !ib) {
            // a heads into the zone below the current divisor; b stays at or
            // above it: meet(a, b) = meet(a, v_{E_cur})
            synth_b = true;
            ca->step(da);
            st.commit(nd, da);
            prev = da;
            continue;
        }
        if (ib && !synth_b && !ia) {
            synth_a = true;
            cb->step(db);
            st.commit(nd, db);
            prev = db;
            continue;
        }
        // divergence without a fresh Infinity on either side
        out.alpha = QuadExt(nd.alpha);
        if (realize) out.meet = Valuation::divisorial(st.tw, st.node);
        if (synth_a || synth_b) {
            // the real side either equals the zone divisor (Generic) or
            // branches off the zone: in both cases the original pair relates
            // through the divisor the synthetic side stands for
            if (synth_b) out.relation = ga ? Cmp::Less : Cmp::Incomparable;
            else out.relation = gb ? Cmp::Greater : Cmp::Incomparable;
        } else {
            if (ga && gb) out.relation = Cmp::Equal;
            else if (ga) out.relation = Cmp::Less;
            else if (gb) out.relation = Cmp::Greater;
            else out.relation = Cmp::Incomparable;
        }
        if (dir_of_b_at_a && out.relation == Cmp::Less && !synth_b) *dir_of_b_at_a = db;
        return out;
    }
    throw std::runtime_error("meet: center paths did not separate within the depth budget");
}

namespace {
bool same_curve(const ValPtr& a, const ValPtr& b) {
    return a->kind == ValKind::Curve && b->kind == ValKind::Curve &&
           a->branch->same_object(*b->branch);
}
}  // namespace

QuadExt meet_alpha(const ValPtr& a, const ValPtr& b, const WalkLimits& lim) {
    if (a.get() == b.get() || same_curve(a, b)) {
        if (!a->alpha_finite())
            throw std::domain_error("meet_alpha: -infinity (curve valuation met with itself)");
        return a->alpha();
    }
    return walk_pair(a, b, lim, false).alpha;
}

MeetResult meet(const ValPtr& a, const ValPtr& b, const WalkLimits& lim) {
    if (a.get() == b.get() || same_curve(a, b)) {
        MeetResult r;
        r.meet = a;
        r.relation = Cmp::Equal;
        if (a->alpha_finite()) r.alpha = a->alpha();
        else r.alpha_neg_inf = true;
        return r;
    }
    MeetResult r = walk_pair(a, b, lim, true);
    if (r.relation == Cmp::Equal && !r.meet) r.meet = a;
    if (r.relation == Cmp::Less && !r.meet) r.meet = a;
    if (r.relation == Cmp::Greater && !r.meet) r.meet = b;
    return r;
}

Cmp compare(const ValPtr& a, const ValPtr& b, const WalkLimits& lim) {
    if (a.get() == b.get() || same_curve(a, b)) return Cmp::Equal;
    return walk_pair(a, b, lim, false).relation;
}

bool tree_equal(const ValPtr& a, const ValPtr& b) { return compare(a, b) == Cmp::Equal; }

QuadExt tree_distance(const ValPtr& a, const ValPtr& b) {
    if (!a->alpha_finite() || !b->alpha_finite())
        throw std::domain_error("tree_distance: skewness is -infinity on a curve valuation");
    QuadExt two(Rat(2));
    return two * meet_alpha(a, b) - a->alpha() - b->alpha();
}

// ---------------------------------------------------------------------------
// alpha / thinness
// ---------------------------------------------------------------------------

ValPtr realize_divisorial(const ValPtr& v, const WalkLimits& lim) {
    if (v->kind == ValKind::NegDeg) return v;
    if (v->kind == ValKind::Monomial && v->mono->wv.is_zero() && !v->toric_xy) {
        const Chart& ch = v->mono->tower->chart(v->mono->chart);
        return Valuation::divisorial(v->mono->tower, ch.udiv);
    }
    auto cur = v->make_cursor();
    WalkDesc d0 = cur->stage0();
    if (d0.kind == WalkDesc::Generic) return Valuation::neg_deg();
    cur->init0(d0);
    PathState st;
    st.tw = std::make_shared<BlowupTower>();
    WalkDesc prev = d0;
    for (int depth = 0; depth < lim.max_depth; ++depth) {
        PathState::NewDiv nd = st.preview();
        st.node = st.tw->blowup(st.node, PathState::to_dir(prev));
        WalkDesc d = cur->descriptor();
        if (d.kind == WalkDesc::Generic) return Valuation::divisorial(st.tw, st.node);
        cur->step(d);
        st.commit(nd, d);
        prev = d;
    }
    throw std::runtime_error("realize_divisorial: depth budget exhausted (irrational weights?)");
}

QuadExt Valuation::alpha() const {
    if (alpha_cache) return *alpha_cache;
    QuadExt r;
    if (kind == ValKind::Curve) throw std::domain_error("alpha: -infinity for curve valuations");
    if (auto t = toric_coords()) {
        QuadExt mmax = ((t->first - t->second).sign() >= 0) ? t->first : t->second;
        r = -mmax;
    } else {
        ValPtr d = realize_divisorial(shared_from_this());
        r = d->alpha();
    }
    alpha_cache = r;
    return r;
}

QuadExt Valuation::thinness() const {
    if (thin_cache) return *thin_cache;
    QuadExt r;
    if (kind == ValKind::Curve) throw std::domain_error("thinness: +infinity for curve valuations");
    if (auto t = toric_coords()) {
        r = t->first + t->second;
    } else {
        ValPtr d = realize_divisorial(shared_from_this());
        r = d->thinness();
    }
    thin_cache = r;
    return r;
}

// ---------------------------------------------------------------------------
// FiniteTree / retraction / directions / centers
// ---------------------------------------------------------------------------

FiniteTree::FiniteTree(std::vector<ValPtr> generators) {
    nodes_.push_back(Valuation::neg_deg());
    for (auto& g : generators) {
        bool dup = false;
        for (auto& n : nodes_)
            if (tree_equal(n, g)) {
                dup = true;
                break;
            }
        if (!dup) nodes_.push_back(g);
    }
    // close under meets
    bool changed = true;
    while (changed) {
        changed = false;
        size_t n = nodes_.size();
        for (size_t i = 1; i < n && !changed; ++i)
            for (size_t j = i + 1; j < n && !changed; ++j) {
                MeetResult m = meet(nodes_[i], nodes_[j]);
                bool dup = false;
                for (auto& nd : nodes_)
                    if (tree_equal(nd, m.meet)) {
                        dup = true;
                        break;
                    }
                if (!dup) {
                    nodes_.push_back(m.meet);
                    changed = true;
                }
            }
    }
    // parents: deepest strict ancestor
    parent_.assign(nodes_.size(), -1);
    for (size_t i = 1; i < nodes_.size(); ++i) {
        int best = 0;
        for (size_t j = 0; j < nodes_.size(); ++j) {
            if (j == i) continue;
            Cmp c = compare(nodes_[j], nodes_[i]);
            if (c == Cmp::Less) {
                if (best < 0)
                    best = (int)j;
                else if (compare(nodes_[best], nodes_[j]) == Cmp::Less)
                    best = (int)j;
            }
        }
        parent_[i] = best;
    }
}

ValPtr FiniteTree::retract(const ValPtr& v) const {
    ValPtr best = nodes_[0];
    QuadExt besta(Rat(1));
    for (auto& u : nodes_) {
        MeetResult m = meet(u, v);
        if ((m.alpha - besta).sign() < 0) {
            besta = m.alpha;
            best = m.meet;
        }
    }
    return best;
}

std::string FiniteTree::to_dot() const {
    std::ostringstream os;
    os << "graph finite_tree {\n";
    for (size_t i = 0; i < nodes_.size(); ++i) {
        os << "  n" << i << " [label=\"" << nodes_[i]->describe();
        if (nodes_[i]->alpha_finite()) {
            os << "\\nalpha=" << nodes_[i]->alpha().str();
            os << " A=" << nodes_[i]->thinness().str();
        } else {
            os << "\\nalpha=-inf";
        }
        os << "\"];\n";
        if (parent_[i] >= 0) os << "  n" << parent_[i] << " -- n" << i << ";\n";
    }
    os << "}\n";
    return os.str();
}

TangentDirection direction_at(const ValPtr& v, const ValPtr& w) {
    if (!v->is_divisorial())
        throw std::domain_error("direction_at: base valuation must be divisorial");
    if (tree_equal(v, w)) throw std::domain_error("direction_at: w equals v");
    WalkDesc dir;
    MeetResult r = walk_pair(v, w, WalkLimits{}, false, &dir);
    TangentDirection t;
    if (r.relation == Cmp::Less) {
        t.toward_root = false;
        t.point = dir;
    } else {
        // w below or incomparable: the tangent direction at v is toward -deg
        t.toward_root = true;
    }
    return t;
}

CenterResult center_of(const BlowupTower& t, const ValPtr& v) {
    CenterResult res;
    auto cur = v->make_cursor();
    WalkDesc d = cur->stage0();
    if (d.kind == WalkDesc::Generic) {
        res.generic = true;
        res.node = 0;
        return res;
    }
    cur->init0(d);
    int node = 0;
    for (int guard = 0; guard < 4096; ++guard) {
        int child = t.child_at(node, PathState::to_dir(d));
        if (child < 0) {
            res.generic = false;
            res.node = node;
            res.dir = d;
            return res;
        }
        node = child;
        d = cur->descriptor();
        if (d.kind == WalkDesc::Generic) {
            res.generic = true;
            res.node = node;
            return res;
        }
        cur->step(d);
    }
    throw std::runtime_error("center_of: runaway descent");
}

}  // namespace valinf
