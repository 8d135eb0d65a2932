// tower.cpp
// ---------
// Blowup tower construction and the exceptional intersection lattice.

#include "valinf/tower.hpp"

#include <algorithm>
#include <sstream>

namespace valinf {

namespace {

long ord_u_of(const Poly2Q& p) {
    if (p.zero()) throw std::domain_error("ord of zero polynomial");
    return p.ord_x();
}

void strip_common_monomials(Poly2Q& A, Poly2Q& B, Poly2Q& C) {
    // dividing all three by u^a v^b leaves x = A/C, y = B/C unchanged
    int a = std::min({A.ord_x(), B.ord_x(), C.ord_x()});
    int b = std::min({A.ord_y(), B.ord_y(), C.ord_y()});
    if (a > 0 || b > 0) {
        A = A.shift_down(a, b);
        B = B.shift_down(a, b);
        C = C.shift_down(a, b);
    }
}

}  // namespace

void BlowupTower::absorb_field(const K& c) {
    if (c.D == 0) return;
    if (field_ == 0) field_ = c.D;
    else if (field_ != c.D)
        throw std::domain_error("tower: center requires a second quadratic extension");
}

void BlowupTower::strip_common_u(Poly2Q& A, Poly2Q& B, Poly2Q& C) {
    strip_common_monomials(A, B, C);
}

int BlowupTower::add_chart(Chart ch) {
    charts_.push_back(std::move(ch));
    return (int)charts_.size() - 1;
}

BlowupTower::BlowupTower() {
    // chart_y: (u, v) = (1/y, x/y): x = v/u, y = 1/u
    Chart cy;
    cy.A = Poly2Q::var_y();
    cy.B = Poly2Q(K(1));
    cy.C = Poly2Q::var_x();
    cy.udiv = 0;
    cy.vdiv = -1;
    // chart_x: (u, v) = (1/x, y/x): x = 1/u, y = v/u
    Chart cx;
    cx.A = Poly2Q(K(1));
    cx.B = Poly2Q::var_y();
    cx.C = Poly2Q::var_x();
    cx.udiv = 0;
    cx.vdiv = -1;

    TowerNode root;
    root.id = 0;
    root.chartA = add_chart(cy);
    root.chartB = add_chart(cx);
    root.parent = -1;
    root.b = 1;
    root.ord_x = -1;
    root.ord_y = -1;
    root.ord_jac = -3;
    root.alpha = Rat(1);
    root.thinness = Rat(-2);
    nodes_.push_back(root);
    M_ = {{Rat(1)}};
    ortho_ = {{1}};  // l_infty = H in P^2
    blown_.push_back({});
}

int BlowupTower::blowup(int node_id, const Direction& dir) {
    if (node_id < 0 || node_id >= size()) throw std::domain_error("blowup: no such node");
    if (direction_blown(node_id, dir))
        throw std::domain_error("blowup: point already blown up on this model");

    const TowerNode nd = nodes_[node_id];

    // Resolve to (chart, swap, c): blow up the point p = 0, q = c of the
    // coordinates (p, q) = swap ? (v, u) : (u, v); {p = 0} is the divisor
    // whose direction is being blown.
    int chart_id;
    bool swap;
    K c;
    if (!dir.at_parent_satellite) {
        chart_id = nd.chartA;
        swap = false;
        c = dir.t;
        absorb_field(c);
    } else if (node_id == 0) {
        chart_id = nd.chartB;  // chart_x covers [1:0:0] at the origin
        swap = false;
        c = K();
    } else {
        chart_id = nd.chartB;
        swap = true;  // chartB axes are (parent, node); p must cut `node`
        c = K();
    }
    const Chart ch = charts_[chart_id];
    int pdiv = swap ? ch.vdiv : ch.udiv;
    int qdiv = swap ? ch.udiv : ch.vdiv;
    if (pdiv != node_id) throw std::logic_error("blowup: chart orientation out of sync");
    int other_div = (c.is_zero() ? qdiv : -1);

    // --- charts of the new node ---------------------------------------
    //   chartA: (p, q) = (s, c + s t)   E_new = {s=0}; {t=0} = strict{q=c}
    //   chartB: (p, q) = (s t, c + t)   E_new = {t=0}; {s=0} = strict{p=0}
    int new_id = size();
    Poly2Q S = Poly2Q::var_x(), T = Poly2Q::var_y();
    Poly2Q cpoly{c};

    auto subst_pair = [&](const Poly2Q& f, const Poly2Q& psub, const Poly2Q& qsub) {
        return swap ? f.subst(qsub, psub) : f.subst(psub, qsub);
    };

    Chart nA;
    {
        Poly2Q ps = S, qs = cpoly + S * T;
        nA.A = subst_pair(ch.A, ps, qs);
        nA.B = subst_pair(ch.B, ps, qs);
        nA.C = subst_pair(ch.C, ps, qs);
        strip_common_monomials(nA.A, nA.B, nA.C);
        nA.udiv = new_id;
        nA.vdiv = other_div;
    }
    Chart nB;
    {
        Poly2Q ps = S * T, qs = cpoly + T;
        nB.A = subst_pair(ch.A, ps, qs);
        nB.B = subst_pair(ch.B, ps, qs);
        nB.C = subst_pair(ch.C, ps, qs);
        strip_common_monomials(nB.A, nB.B, nB.C);
        nB.udiv = pdiv;
        nB.vdiv = new_id;
    }

    TowerNode nn;
    nn.id = new_id;
    nn.chartA = add_chart(nA);
    nn.chartB = add_chart(nB);
    nn.parent = node_id;
    nn.second_parent = other_div;
    nn.center_t = c;
    nn.center_at_parent_satellite = dir.at_parent_satellite;

    // --- incremental invariants ----------------------------------------
    long b_other = (other_div >= 0) ? nodes_[other_div].b : 0;
    nn.b = nd.b + b_other;
    long ord_jac_other = (other_div >= 0) ? nodes_[other_div].ord_jac : 0;
    nn.ord_jac = nd.ord_jac + ord_jac_other + 1;
    nn.thinness = Rat(1 + nn.ord_jac, nn.b);
    nn.thinness.canonicalize();
    if (other_div < 0) {
        nn.alpha = nd.alpha - Rat(1, nd.b * nn.b);
    } else {
        int s = (nodes_[other_div].alpha > nd.alpha) ? 1 : -1;
        nn.alpha = nd.alpha + Rat(s, nd.b * nn.b);
    }
    nn.alpha.canonicalize();

    // orders of x, y along the new divisor by chart pullback (E_new = {u=0}
    // in its chartA)
    {
        long oa = ord_u_of(nA.A), ob = ord_u_of(nA.B), oc = ord_u_of(nA.C);
        nn.ord_x = oa - oc;
        nn.ord_y = ob - oc;
        if (-std::min(nn.ord_x, nn.ord_y) != nn.b)
            throw std::logic_error("tower: b bookkeeping drifted from chart pullback");
    }

    // --- intersection matrix --------------------------------------------
    size_t n = nodes_.size();
    for (auto& row : M_) row.push_back(Rat(0));
    M_.push_back(std::vector<Rat>(n + 1, Rat(0)));
    M_[n][n] = Rat(-1);
    M_[n][node_id] = M_[node_id][n] = Rat(1);
    M_[node_id][node_id] -= 1;
    if (other_div >= 0) {
        M_[n][other_div] = M_[other_div][n] = Rat(1);
        M_[other_div][other_div] -= 1;
        M_[node_id][other_div] -= 1;
        M_[other_div][node_id] -= 1;
    }

    // orthogonal basis cross-check data
    for (auto& row : ortho_) row.push_back(0);
    std::vector<long> cls(ortho_[0].size(), 0);
    cls.back() = 1;  // the new total-transform class e_new
    ortho_.push_back(cls);
    ortho_[node_id].back() = -1;
    if (other_div >= 0) ortho_[other_div].back() = -1;

    nodes_.push_back(nn);
    blown_.push_back({});
    blown_[node_id].push_back({dir, new_id});

    auto key = [](int x, int y) { return std::make_pair(std::min(x, y), std::max(x, y)); };
    if (other_div >= 0) adjacency_.erase(key(node_id, other_div));
    adjacency_[key(new_id, node_id)] = nn.chartB;
    if (other_div >= 0) adjacency_[key(new_id, other_div)] = nn.chartA;
    return new_id;
}

int BlowupTower::blowup(const PointSpec& p) {
    if (p.kind == PointSpec::Free) {
        if (p.on < 0 || p.on >= size()) throw std::domain_error("blowup: center not at infinity");
        return blowup(p.on, Direction::finite(p.t));
    }
    if (p.a < 0 || p.b < 0 || p.a >= size() || p.b >= size() || p.a == p.b)
        throw std::domain_error("blowup: invalid satellite spec");
    auto key = std::make_pair(std::min(p.a, p.b), std::max(p.a, p.b));
    auto it = adjacency_.find(key);
    if (it == adjacency_.end())
        throw std::domain_error("blowup: divisors are not adjacent on this model");
    // the intersection point is covered either as a finite 0-direction of the
    // node whose chartA has the other divisor on its v-axis, or as a
    // parent-satellite direction
    for (int nid : {p.a, p.b}) {
        int other = (nid == p.a) ? p.b : p.a;
        const TowerNode& nd = nodes_[nid];
        if (charts_[nd.chartA].vdiv == other && !direction_blown(nid, Direction::finite(K())))
            return blowup(nid, Direction::finite(K()));
        if (nd.parent == other && nd.chartB == it->second)
            return blowup(nid, Direction::parent_satellite());
    }
    throw std::logic_error("blowup: adjacency map out of sync");
}

bool BlowupTower::direction_blown(int node_id, const Direction& dir) const {
    return child_at(node_id, dir) >= 0;
}

int BlowupTower::child_at(int node_id, const Direction& dir) const {
    for (const auto& [d, child] : blown_[node_id])
        if (d == dir) return child;
    return -1;
}

bool BlowupTower::adjacent(int a, int b) const {
    auto key = std::make_pair(std::min(a, b), std::max(a, b));
    return adjacency_.count(key) > 0;
}

long BlowupTower::ord_on_divisor_q(int node_id, const Poly2Q& P) const {
    if (P.zero()) throw std::domain_error("ord_on_divisor: zero polynomial (order +infinity)");
    const TowerNode& nd = nodes_[node_id];
    const Chart& ch = charts_[nd.chartA];
    int d = P.deg();
    Poly2Q acc;
    for (auto& [m, co] : P.t) {
        Poly2Q term{co};
        term = term * ch.A.pow(m.i) * ch.B.pow(m.j) * ch.C.pow(d - m.i - m.j);
        acc = acc + term;
    }
    if (acc.zero()) throw std::logic_error("ord_on_divisor: pullback vanished");
    return ord_u_of(acc) - (long)d * ord_u_of(ch.C);
}

long BlowupTower::ord_on_divisor(int node_id, const Poly2& P) const {
    return ord_on_divisor_q(node_id, promote(P));
}

std::vector<Rat> BlowupTower::dual_class(int node_id) const {
    size_t n = nodes_.size();
    std::vector<std::vector<Rat>> a(M_);
    std::vector<Rat> rhs(n, Rat(0));
    rhs[node_id] = Rat(1);
    for (size_t col = 0, row = 0; col < n && row < n; ++col) {
        size_t piv = row;
        while (piv < n && sgn(a[piv][col]) == 0) ++piv;
        if (piv == n) throw std::logic_error("dual_class: singular intersection matrix");
        std::swap(a[piv], a[row]);
        std::swap(rhs[piv], rhs[row]);
        Rat inv = Rat(1) / a[row][col];
        for (size_t j = 0; j < n; ++j) a[row][j] *= inv;
        rhs[row] *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == row || sgn(a[r][col]) == 0) continue;
            Rat k = a[r][col];
            for (size_t j = 0; j < n; ++j) a[r][j] -= k * a[row][j];
            rhs[r] -= k * rhs[row];
        }
        ++row;
    }
    for (auto& q : rhs) q.canonicalize();
    return rhs;
}

Rat BlowupTower::dual_self_intersection(int node_id) const {
    return dual_class(node_id)[node_id];
}

Rat BlowupTower::skewness_lattice(int node_id) const {
    Rat v = dual_self_intersection(node_id);
    Rat b((long)nodes_[node_id].b);
    Rat r = v / (b * b);
    r.canonicalize();
    return r;
}

Rat BlowupTower::alpha_pair(int a, int b) const {
    std::vector<Rat> ca = dual_class(a);
    Rat r = ca[b] / (Rat(nodes_[a].b) * Rat(nodes_[b].b));
    r.canonicalize();
    return r;
}

std::vector<std::vector<Rat>> BlowupTower::recompute_matrix() const {
    size_t n = nodes_.size();
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n, Rat(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            long acc = ortho_[i][0] * ortho_[j][0];
            for (size_t k = 1; k < ortho_[i].size(); ++k) acc -= ortho_[i][k] * ortho_[j][k];
            m[i][j] = Rat(acc);
        }
    return m;
}

bool BlowupTower::check_l_infty_pullback() const {
    size_t n = nodes_.size();
    Rat self(0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) self += Rat(nodes_[i].b) * Rat(nodes_[j].b) * M_[i][j];
    if (self != Rat(1)) return false;
    // (pullback . E_j) = 0 for every exceptional E_j, j >= 1, and = 1 for the
    // strict transform of a line; the latter is encoded by pairing with the
    // full pullback above
    for (size_t j = 1; j < n; ++j) {
        Rat dot(0);
        for (size_t i = 0; i < n; ++i) dot += Rat(nodes_[i].b) * M_[i][j];
        if (sgn(dot) != 0) return false;
    }
    return true;
}

std::string BlowupTower::to_json() const {
    std::ostringstream os;
    os << "{\"nodes\":[";
    for (int i = 0; i < size(); ++i) {
        const TowerNode& nd = nodes_[i];
        if (i) os << ",";
        os << "{\"id\":" << nd.id << ",\"parent\":" << nd.parent
           << ",\"second_parent\":" << nd.second_parent << ",\"b\":" << nd.b
           << ",\"ord_x\":" << nd.ord_x << ",\"ord_y\":" << nd.ord_y
           << ",\"ord_jac\":" << nd.ord_jac << ",\"alpha\":\"" << nd.alpha.get_str()
           << "\",\"thinness\":\"" << nd.thinness.get_str() << "\"";
        if (nd.parent >= 0) {
            os << ",\"center\":";
            if (nd.center_at_parent_satellite)
                os << "\"parent-satellite\"";
            else
                os << "\"t=" << nd.center_t.str() << "\"";
        }
        os << "}";
    }
    os << "]}";
    return os.str();
}

std::string BlowupTower::dual_graph_dot() const {
    std::ostringstream os;
    os << "graph dual {\n";
    for (int i = 0; i < size(); ++i) {
        const TowerNode& nd = nodes_[i];
        os << "  n" << i << " [label=\"" << (i == 0 ? "l_inf" : "E" + std::to_string(i))
           << "\\nb=" << nd.b << " a=" << nd.alpha.get_str() << " A=" << nd.thinness.get_str()
           << "\"];\n";
    }
    for (auto& [k, ch] : adjacency_) {
        (void)ch;
        os << "  n" << k.first << " -- n" << k.second << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace valinf
