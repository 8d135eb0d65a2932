// branch.cpp
// ----------
// Newton-Puiseux at infinity and the branch walk cursor.
//
// A center on l_infty gives a local germ g(u, w) at the origin of a chart at
// infinity; the Newton polygon recursion produces every branch through the
// origin as a pair u = tau^e, w = w(tau).  Each edge root is the q-th power
// of the actual leading coefficient, so a q-th root in Q or one quadratic
// extension is extracted; places needing more are reported as unresolved
// packets with their multiplicity, never dropped.

#include "valinf/branch.hpp"

#include "valinf/factor.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace valinf {

namespace {

struct RawBranch {
    int e = 1;       // ramification: u = tau^e
    PSeries w;       // w(tau), certified window
};

struct NPOut {
    std::vector<RawBranch> branches;
    std::vector<std::pair<std::string, int>> unresolved;  // reason, multiplicity
};

// q-th root of c inside Q(sqrt D) (or one fresh quadratic extension);
// nullopt when it leaves the supported tower
std::optional<QuadExt> kth_root_in_field(const QuadExt& c, int q) {
    if (q == 1) return c;
    if (q == 2) {
        if (c.is_rational()) return quad_sqrt(c.rational());
        // try (x + y sqrt(D))^2 = c in the same field
        QuadRoots r = solve_quadratic(QuadExt(Rat(1)), QuadExt(), -c, true);
        if (r.ok) return r.r1;
        return std::nullopt;
    }
    if (!c.is_rational()) return std::nullopt;
    // exact rational q-th root
    Rat v = c.rational();
    Int n = v.get_num(), d = v.get_den();
    bool neg = sgn(n) < 0;
    if (neg && q % 2 == 0) return std::nullopt;
    Int rn, rd;
    Int an = abs(n);
    if (!mpz_root(rn.get_mpz_t(), an.get_mpz_t(), q)) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), d.get_mpz_t(), q)) return std::nullopt;
    if (int_pow(rn, q) != an || int_pow(rd, q) != d) return std::nullopt;
    Rat out(neg ? -rn : rn, rd);
    out.canonicalize();
    return QuadExt(out);
}

// roots of a univariate polynomial over K with multiplicities; leftovers go
// to `unresolved_deg`
struct RootList {
    std::vector<std::pair<QuadExt, int>> roots;
    int unresolved_deg = 0;
};

RootList roots_in_field(std::vector<QuadExt> poly, long long* field) {
    RootList out;
    auto deg = [&]() {
        int d = (int)poly.size() - 1;
        while (d >= 0 && poly[d].is_zero()) --d;
        return d;
    };
    auto eval = [&](const QuadExt& z) {
        QuadExt acc;
        for (int i = deg(); i >= 0; --i) acc = acc * z + poly[i];
        return acc;
    };
    auto deflate = [&](const QuadExt& z) {
        int d = deg();
        std::vector<QuadExt> q(d);
        QuadExt carry = poly[d];
        for (int i = d - 1; i >= 0; --i) {
            q[i] = carry;
            carry = poly[i] + carry * z;
        }
        poly = q;
    };
    auto note_field = [&](const QuadExt& z) {
        if (z.D != 0) {
            if (*field == 0) *field = z.D;
            else if (*field != z.D) return false;
        }
        return true;
    };
    bool progress = true;
    while (deg() >= 1 && progress) {
        progress = false;
        int d = deg();
        if (d == 1) {
            QuadExt z = -poly[0] / poly[1];
            if (!note_field(z)) break;
            out.roots.push_back({z, 1});
            deflate(z);
            progress = true;
            continue;
        }
        if (d == 2) {
            QuadRoots r = solve_quadratic(poly[2], poly[1], poly[0], true);
            if (r.ok && note_field(r.r1)) {
                out.roots.push_back({r.r1, 1});
                deflate(r.r1);
                progress = true;
                continue;
            }
            break;
        }
        // rational-root scan when all coefficients are rational
        bool allrat = true;
        for (int i = 0; i <= d; ++i) allrat = allrat && poly[i].is_rational();
        if (!allrat) break;
        Int den(1);
        for (int i = 0; i <= d; ++i) den = lcm(den, poly[i].rational().get_den());
        std::vector<Int> ip(d + 1);
        for (int i = 0; i <= d; ++i) {
            Rat c = poly[i].rational();
            ip[i] = c.get_num() * (den / c.get_den());
        }
        Int a0 = abs(ip[0]), al = abs(ip[d]);
        if (sgn(a0) == 0) {
            out.roots.push_back({QuadExt(), 1});
            deflate(QuadExt());
            progress = true;
            continue;
        }
        bool found = false;
        for (Int p(1); p * p <= a0 * a0 && p <= a0 && !found; ++p) {
            if (a0 % p != 0) continue;
            for (const Int& num : {Int(p), Int(a0 / p)}) {
                for (Int qd(1); qd <= al && !found; ++qd) {
                    if (al % qd != 0) continue;
                    for (int s : {1, -1}) {
                        Rat cand(s * num, qd);
                        cand.canonicalize();
                        if (eval(QuadExt(cand)).is_zero()) {
                            out.roots.push_back({QuadExt(cand), 1});
                            deflate(QuadExt(cand));
                            found = true;
                            progress = true;
                            break;
                        }
                    }
                    if (found) break;
                }
                if (found) break;
            }
        }
        if (!found) break;
    }
    // merge multiplicities
    std::vector<std::pair<QuadExt, int>> merged;
    for (auto& [z, m] : out.roots) {
        bool dup = false;
        for (auto& [z2, m2] : merged)
            if (z2 == z) {
                m2 += m;
                dup = true;
                break;
            }
        if (!dup) merged.push_back({z, m});
    }
    out.roots = merged;
    out.unresolved_deg = std::max(deg(), 0);
    return out;
}

// solve w(u) for a germ with a simple root at w = 0: h(0,0) = 0,
// dh/dw(0,0) != 0; returns the series to `terms` coefficients
PSeries regular_tail(const Poly2Q& h, int terms) {
    QuadExt slope;
    {
        Poly2Q hw = h.derivative_y();
        // constant term of hw at origin
        auto it = hw.t.find({0, 0});
        if (it == hw.t.end()) throw std::logic_error("regular_tail: not a simple root");
        slope = it->second;
    }
    // w = sum a_n u^n
    Poly2Q wk;  // polynomial in u only
    for (int n = 1; n <= terms; ++n) {
        // residual = h(u, wk) mod u^(n+1); coefficient of u^n
        Poly2Q r = h.subst(Poly2Q::var_x(), wk);
        QuadExt cn;
        auto it = r.t.find({n, 0});
        if (it != r.t.end()) cn = it->second;
        if (!cn.is_zero()) {
            QuadExt an = -cn / slope;
            wk.add_term(n, 0, an);
        }
    }
    PSeries out;
    out.prec = terms + 1;
    for (auto& [m, c] : wk.t) out.add_term(m.i, c);
    return out;
}

void np_rec(const Poly2Q& g_in, int budget, int depth, long long* field, NPOut& out) {
    if (depth > 24) throw std::runtime_error("newton-puiseux: recursion depth exceeded");
    Poly2Q g = g_in;
    // branch along {w = 0} (g divisible by w): squarefree germs carry it once
    if (g.ord_y() >= 1) {
        RawBranch rb;
        rb.e = 1;
        rb.w = PSeries();  // exactly zero
        out.branches.push_back(rb);
        g = g.shift_down(0, 1);
    }
    // w-order of g(0, w)
    int k = -1;
    {
        Poly2Q g0;
        for (auto& [m, c] : g.t)
            if (m.i == 0) g0.t[m] = c;
        if (g0.zero()) throw std::logic_error("newton-puiseux: germ has a u-factor");
        k = g0.ord_y();
    }
    if (k == 0) return;  // no further branches through the origin
    if (k == 1) {
        RawBranch rb;
        rb.e = 1;
        rb.w = regular_tail(g, budget);
        out.branches.push_back(rb);
        return;
    }
    // Newton polygon: for each w-exponent j the minimal u-exponent
    std::map<int, int> min_i;
    for (auto& [m, c] : g.t) {
        auto it = min_i.find(m.j);
        if (it == min_i.end() || m.i < it->second) min_i[m.j] = m.i;
    }
    // lower-left hull from (0, k) to (m_0, 0)
    std::vector<std::pair<int, int>> pts;  // (j, i)
    for (auto& [j, i] : min_i) pts.push_back({j, i});
    std::sort(pts.begin(), pts.end());  // by j ascending
    // hull over decreasing j: start at j = k (i = 0), end at j = 0
    std::vector<std::pair<int, int>> hull;  // (j, i), j descending
    {
        std::vector<std::pair<int, int>> rev(pts.rbegin(), pts.rend());
        for (auto& p : rev) {
            while (hull.size() >= 2) {
                auto& a = hull[hull.size() - 2];
                auto& b = hull[hull.size() - 1];
                // keep hull lower-left convex: slope (di/dj) must increase
                long cross = (long)(b.second - a.second) * (p.first - a.first) -
                             (long)(p.second - a.second) * (b.first - a.first);
                if (cross >= 0) hull.pop_back();
                else break;
            }
            hull.push_back(p);
        }
    }
    for (size_t eidx = 0; eidx + 1 < hull.size(); ++eidx) {
        auto [j_hi, i_hi] = hull[eidx];
        auto [j_lo, i_lo] = hull[eidx + 1];
        if (j_hi > k) continue;   // irrelevant upper part
        if (j_hi <= j_lo) continue;
        int dj = j_hi - j_lo, di = i_lo - i_hi;
        if (di <= 0) continue;  // branches not tending to u = 0
        long gg = std::gcd((long)dj, (long)di);
        int q = (int)(dj / gg), p = (int)(di / gg);
        int L = (int)gg;
        // lattice edge polynomial phi(c) = sum_t a_(i_hi + t p, j_hi - t q) c^(L - t)
        std::vector<QuadExt> phi(L + 1);
        for (int t = 0; t <= L; ++t) {
            auto it = g.t.find({i_hi + t * p, j_hi - t * q});
            if (it != g.t.end()) phi[L - t] = it->second;
        }
        RootList roots = roots_in_field(phi, field);
        if (roots.unresolved_deg > 0)
            out.unresolved.push_back({"edge polynomial not solvable over Q + one sqrt",
                                      roots.unresolved_deg * q});
        for (auto& [cprime, mult] : roots.roots) {
            auto z = kth_root_in_field(cprime, q);
            if (!z) {
                out.unresolved.push_back({"leading coefficient needs a radical extension",
                                          mult * q});
                continue;
            }
            if (z->D != 0) {
                if (*field == 0) *field = z->D;
                else if (*field != z->D) {
                    out.unresolved.push_back({"two distinct quadratic extensions", mult * q});
                    continue;
                }
            }
            // substitute u = u1^q, w = u1^p (z + w1), divide by u1^N
            Poly2Q g1;
            for (auto& [m, co] : g.t) {
                // u^i w^j -> u1^(iq + jp) (z + w1)^j
                int base = m.i * q + m.j * p;
                // expand (z + w1)^j
                std::vector<QuadExt> bin(m.j + 1);
                QuadExt zz(Rat(1));
                // binomial coefficients
                std::vector<Int> ch(m.j + 1);
                ch[0] = 1;
                for (int t = 1; t <= m.j; ++t) ch[t] = ch[t - 1] * (m.j - t + 1) / t;
                QuadExt zpow(Rat(1));
                for (int t = m.j; t >= 0; --t) {
                    // coefficient of w1^t: C(j, t) z^(j - t)
                    QuadExt coeff = QuadExt(Rat(ch[t])) * zpow;
                    if (!coeff.is_zero()) g1.add_term(base, t, co * coeff);
                    zpow = zpow * (*z);
                }
                (void)zz;
            }
            int N = g1.ord_x();
            g1 = g1.shift_down(N, 0);
            NPOut sub;
            np_rec(g1, std::max(4, budget / q + p + 2), depth + 1, field, sub);
            for (auto& rb : sub.branches) {
                // unwind: u = u1^q, w = u1^p (z + w_child(tau)), u1 = tau^(e_c)
                RawBranch up;
                up.e = rb.e * q;
                PSeries inner = rb.w + PSeries::from_const(*z);
                up.w = inner.stretch(1) * PSeries::monomial(p * rb.e, QuadExt(Rat(1)));
                out.branches.push_back(up);
            }
            for (auto& un : sub.unresolved)
                out.unresolved.push_back({un.first, un.second * q});
        }
    }
}

struct CenterData {
    Branch::Center center;
    Poly2Q germ;
    int k;  // multiplicity of the center (w-order of the germ)
};

// germ at a center: chart_x for [1:lam:0], chart_y for [0:1:0]
Poly2Q center_germ(const Poly2Q& Q, const Branch::Center& c) {
    int d = Q.deg();
    Poly2Q g;
    if (!c.at_y_point) {
        // chart_x: x = 1/u, y = (w + lam)/u; germ = u^d Q(1/u, (w+lam)/u)
        Poly2Q wpl = Poly2Q::var_y() + Poly2Q(c.lam);
        for (auto& [m, co] : Q.t) {
            Poly2Q term{co};
            term = term * wpl.pow(m.j);
            // u exponent: d - i - j
            Poly2Q up = Poly2Q::mono(d - m.i - m.j, 0, QuadExt(Rat(1)));
            g = g + term * up;
        }
    } else {
        // chart_y: x = w/u, y = 1/u; germ = u^d Q(w/u, 1/u)
        for (auto& [m, co] : Q.t) {
            Poly2Q term = Poly2Q::mono(d - m.i - m.j, m.i, co);
            g = g + term;
        }
    }
    return g;
}

std::vector<CenterData> find_centers(const Poly2Q& Q, long long* field, NPOut& out) {
    int d = Q.deg();
    std::vector<CenterData> centers;
    // leading form evaluated as q(t) = Q_d(1, t), t = y/x
    std::vector<QuadExt> lead(d + 1);
    for (auto& [m, co] : Q.t)
        if (m.i + m.j == d) lead[m.j] = co;
    RootList rl = roots_in_field(lead, field);
    if (rl.unresolved_deg > 0)
        out.unresolved.push_back({"center needs a higher-degree extension", rl.unresolved_deg});
    for (auto& [lam, mult] : rl.roots) {
        CenterData cd;
        cd.center.at_y_point = false;
        cd.center.lam = lam;
        cd.germ = center_germ(Q, cd.center);
        cd.k = mult;
        centers.push_back(cd);
    }
    // [0:1:0] lies on the curve iff the y^d coefficient vanishes
    if (lead[d].is_zero()) {
        CenterData cd;
        cd.center.at_y_point = true;
        cd.germ = center_germ(Q, cd.center);
        int tot = 0;
        for (auto& [lam, mult] : rl.roots) tot += mult;
        cd.k = d - tot - rl.unresolved_deg;
        centers.push_back(cd);
    }
    return centers;
}

}  // namespace

// ---------------------------------------------------------------------------
// Branch
// ---------------------------------------------------------------------------

Branch::Branch(Center center, PSeries x, PSeries y, int m, Poly2 source, int packet)
    : center_(center), x_(std::move(x)), y_(std::move(y)), m_(m), source_(std::move(source)),
      packet_(packet) {
    long bx = x_.c.empty() ? 0 : -(long)x_.ord_value();
    long by = y_.c.empty() ? 0 : -(long)y_.ord_value();
    if (std::max(bx, by) != m_)
        throw std::logic_error("Branch: pole order does not match multiplicity");
}

void Branch::ensure_precision(int p) const {
    int cur = std::min(x_.prec, y_.prec);
    if (cur >= p) return;
    BranchesResult rr = branches(source_, std::max(p + 4, 2 * std::max(target_prec_, 8)));
    for (auto& cand : rr.branches) {
        if (cand->center_.at_y_point != center_.at_y_point) continue;
        if (!cand->center_.at_y_point && !(cand->center_.lam == center_.lam)) continue;
        if (cand->m_ != m_) continue;
        // compare on the old certified window
        bool match = true;
        int window = std::min({x_.prec, cand->x_.prec});
        for (auto& [k, v] : x_.c) {
            if (k < window && !(cand->x_.coeff(k) == v)) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        for (auto& [k, v] : y_.c) {
            if (k < std::min(y_.prec, cand->y_.prec) && !(cand->y_.coeff(k) == v)) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        x_ = cand->x_;
        y_ = cand->y_;
        target_prec_ = p;
        return;
    }
    throw std::runtime_error("Branch::ensure_precision: regeneration did not match");
}

ExtRat Branch::evaluate_normalized(const Poly2& P) const {
    if (P.zero()) return ExtRat::inf();
    long bezout = (long)P.deg() * std::max(source_.deg(), 1);
    int need = (int)bezout + 1;
    for (int rounds = 0; rounds < 8; ++rounds) {
        PSeries val = eval_poly_series(promote(P), x_, y_);
        if (val.ord_kind() == PSeries::OrdKind::Value) {
            long o = val.ord_value();
            Rat r(o, (long)m_);
            r.canonicalize();
            return ExtRat(r);
        }
        if (val.ord_kind() == PSeries::OrdKind::Zero) return ExtRat::inf();
        // unknown: extend unless the certified window already passes the
        // Bezout bound (then the order exceeds any finite intersection and
        // the branch lies in {P = 0})
        if (val.prec > need) return ExtRat::inf();
        ensure_precision(std::max(2 * std::min(x_.prec, y_.prec), need + 2 * (int)m_ + 4));
    }
    throw std::runtime_error("Branch::evaluate: precision extension did not converge");
}

bool Branch::evaluates_infinite(const Poly2& P) const { return evaluate_normalized(P).is_inf(); }

std::string Branch::describe() const {
    std::ostringstream os;
    os << "branch(";
    if (center_.at_y_point) os << "[0:1:0]";
    else os << "[1:" << center_.lam.str() << ":0]";
    os << ", m=" << m_ << ")";
    return os.str();
}

std::string Branch::to_json() const {
    std::ostringstream os;
    os << "{\"center\":\"" << (center_.at_y_point ? "[0:1:0]" : "[1:" + center_.lam.str() + ":0]")
       << "\",\"m\":" << m_ << ",\"packet\":" << packet_ << ",\"x\":\"" << x_.str()
       << "\",\"y\":\"" << y_.str() << "\"}";
    return os.str();
}

// ---------------------------------------------------------------------------
// branches()
// ---------------------------------------------------------------------------

int BranchesResult::total_multiplicity() const {
    int t = 0;
    for (auto& b : branches) t += b->multiplicity() * b->packet_size();
    for (auto& u : unresolved) t += u.multiplicity;
    return t;
}

BranchesResult branches(const Poly2& Qin, int precision) {
    if (Qin.deg() <= 0) throw std::domain_error("branches: polynomial must be nonconstant");
    BranchesResult out;
    Poly2Q Q = promote(Qin);
    long long field = 0;
    NPOut scratch;
    std::vector<CenterData> centers = find_centers(Q, &field, scratch);
    for (auto& un : scratch.unresolved) out.unresolved.push_back({un.first, un.second});
    int d = Qin.deg();
    for (auto& cd : centers) {
        NPOut np;
        np_rec(cd.germ, std::max(precision, 8), 0, &field, np);
        for (auto& un : np.unresolved) out.unresolved.push_back({un.first, un.second});
        for (auto& rb : np.branches) {
            PSeries X, Y;
            PSeries upole = PSeries::monomial(-rb.e, QuadExt(Rat(1)));  // 1/u = tau^-e
            if (!cd.center.at_y_point) {
                X = upole;
                Y = (rb.w + PSeries::from_const(cd.center.lam)) * upole;
            } else {
                X = rb.w * upole;
                Y = upole;
            }
            out.branches.push_back(
                std::make_shared<Branch>(cd.center, X, Y, rb.e, Qin, 1));
        }
    }
    if (out.total_multiplicity() != d)
        throw std::logic_error("branches: multiplicities do not sum to deg Q");
    return out;
}

ValPtr curve_valuation(const BranchPtr& b) { return Valuation::curve(b); }

// ---------------------------------------------------------------------------
// Branch walk cursor (with precision-extension replay)
// ---------------------------------------------------------------------------

namespace {

struct PrecisionExhausted {};

class BranchWalkCursor final : public WalkCursor {
  public:
    BranchWalkCursor(const Branch* b, const Endo* prefix)
        : branch_(b), prefix_(prefix ? std::optional<Endo>(*prefix) : std::nullopt) {
        reset();
    }

    WalkDesc stage0() override {
        return with_replay([&]() -> WalkDesc {
            QuadExt dummy;
            long vx = ordv(X_), vy = ordv(Y_);
            if (vx > vy) return WalkDesc::finite(K());
            if (vx < vy) return WalkDesc::infinity();
            // residue of x/y
            PSeries q = X_ * Y_.inverse(resprec());
            auto r = residue0(q);
            if (!r) return WalkDesc::generic();
            (void)dummy;
            return WalkDesc::finite(*r);
        });
    }

    void init0(const WalkDesc& common) override {
        history_.clear();
        history_.push_back({0, common});
        replay_init(common);
    }

    WalkDesc descriptor() override {
        return with_replay([&]() -> WalkDesc {
            long t = ordv(V_) - ordv(U_);
            if (t > 0) return WalkDesc::finite(K());
            if (t < 0) return WalkDesc::infinity();
            PSeries q = V_ * U_.inverse(resprec());
            auto r = residue0(q);
            if (!r) return WalkDesc::generic();
            return WalkDesc::finite(*r);
        });
    }

    void step(const WalkDesc& common) override {
        history_.push_back({1, common});
        with_replay([&]() -> WalkDesc {
            apply_step(common);
            return WalkDesc::generic();
        });
    }

  private:
    int resprec() const { return std::max(8, std::min(U_.prec, V_.prec)); }

    long ordv(const PSeries& s) {
        switch (s.ord_kind()) {
            case PSeries::OrdKind::Value:
                return s.ord_value();
            case PSeries::OrdKind::Zero:
                return 1L << 20;  // branch lies on the coordinate curve
            default:
                throw PrecisionExhausted{};
        }
    }

    std::optional<K> residue0(const PSeries& q) {
        switch (q.ord_kind()) {
            case PSeries::OrdKind::Value:
                break;
            case PSeries::OrdKind::Zero:
                return K();  // the quotient is exactly 0 => residue 0
            default:
                throw PrecisionExhausted{};
        }
        int o = q.ord_value();
        if (o > 0) return K();
        if (o < 0) return std::nullopt;  // unbounded: corresponds to infinity handled earlier
        K c = q.coeff(0);
        // residue exists; constant quotient would mean the walk should have
        // ended at a generic point, which branch cursors never produce
        return c;
    }

    void reset() {
        int p = 12;
        branch_->ensure_precision(p);
        load_series();
    }

    void load_series() {
        if (!prefix_) {
            X_ = branch_->xs();
            Y_ = branch_->ys();
        } else {
            X_ = eval_poly_series(promote(prefix_->F), branch_->xs(), branch_->ys());
            Y_ = eval_poly_series(promote(prefix_->G), branch_->xs(), branch_->ys());
        }
    }

    void replay_init(const WalkDesc& common) {
        if (common.kind == WalkDesc::Finite) {
            U_ = Y_.inverse(resprec());
            V_ = X_ * Y_.inverse(resprec()) - PSeries::from_const(common.c);
        } else {
            U_ = X_.inverse(resprec());
            V_ = Y_ * X_.inverse(resprec());
        }
    }

    void apply_step(const WalkDesc& common) {
        if (common.kind == WalkDesc::Finite) {
            V_ = V_ * U_.inverse(resprec()) - PSeries::from_const(common.c);
        } else {
            PSeries u = V_;
            PSeries v = U_ * V_.inverse(resprec());
            U_ = u;
            V_ = v;
        }
    }

    template <class F>
    WalkDesc with_replay(F&& f) {
        for (int round = 0; round < 10; ++round) {
            try {
                return f();
            } catch (const PrecisionExhausted&) {
                int cur = std::min(branch_->xs().prec, branch_->ys().prec);
                int target = std::max(16, 2 * std::max(cur, 8));
                branch_->ensure_precision(target);
                // rebuild the state and replay all recorded operations
                load_series();
                for (auto& [op, d] : history_) {
                    if (op == 0) replay_init(d);
                    else apply_step(d);
                }
            }
        }
        throw std::runtime_error("branch cursor: precision extension did not stabilize");
    }

    const Branch* branch_;
    std::optional<Endo> prefix_;
    PSeries X_, Y_, U_, V_;
    std::vector<std::pair<int, WalkDesc>> history_;
};

}  // namespace

std::unique_ptr<WalkCursor> Branch::make_cursor(const Endo* prefix) const {
    return std::make_unique<BranchWalkCursor>(this, prefix);
}

// ---------------------------------------------------------------------------
// Intersection numbers
// ---------------------------------------------------------------------------

Rat intersection_at_infinity(const BranchPtr& b1, const BranchPtr& b2) {
    if (b1->same_object(*b2))
        throw std::domain_error("intersection_at_infinity: identical branches");
    ValPtr v1 = curve_valuation(b1), v2 = curve_valuation(b2);
    QuadExt a = meet_alpha(v1, v2);
    if (!a.is_rational())
        throw std::domain_error("intersection_at_infinity: irrational meet skewness");
    Rat r = Rat(b1->multiplicity()) * Rat(b2->multiplicity()) * (Rat(1) - a.rational());
    r.canonicalize();
    return r;
}

BezoutAudit bezout_audit(const Poly2& Q1, const Poly2& Q2) {
    BezoutAudit out;
    out.deg_product = Q1.deg() * Q2.deg();
    if (gcd_bivariate(Q1, Q2).deg() > 0)
        throw std::domain_error("bezout_audit: polynomials share a factor");

    // affine intersections with multiplicity via a shear making both leading
    // y-coefficients constant, then the degree of Res_y
    Rat affine(-1);
    for (long lam = 0; lam <= 40; ++lam) {
        Poly2 xs = Poly2::var_x() + Poly2::var_y() * make_rat(lam);
        Poly2 A = Q1.subst(xs, Poly2::var_y());
        Poly2 B = Q2.subst(xs, Poly2::var_y());
        if (A.deg_y() != Q1.deg() || B.deg_y() != Q2.deg()) continue;
        auto ac = A.coeffs_in_y();
        auto bc = B.coeffs_in_y();
        if (ac[A.deg_y()].deg() != 0 || bc[B.deg_y()].deg() != 0) continue;
        Poly2 R = resultant_y(A, B);
        affine = Rat(std::max(R.deg_x(), 0));
        break;
    }
    if (sgn(affine) < 0) throw std::runtime_error("bezout_audit: no nondegenerate shear found");
    out.affine = affine;

    BranchesResult r1 = branches(Q1), r2 = branches(Q2);
    std::string notes;
    if (!r1.complete() || !r2.complete())
        notes += "unresolved places present; at-infinity sum may be partial. ";
    Rat at_inf(0);
    for (auto& a : r1.branches)
        for (auto& b : r2.branches) at_inf += intersection_at_infinity(a, b);
    out.at_infinity = at_inf;
    out.pass = (out.affine + out.at_infinity == Rat(out.deg_product)) && r1.complete() &&
               r2.complete();
    out.notes = notes;
    return out;
}

}  // namespace valinf
