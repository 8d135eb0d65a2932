// tower.hpp
// ---------
// Compactifications of the affine plane by towers of point blowups over P^2.
// Every chart stores the exact birational substitution to (x, y): three
// polynomials A, B, C in the chart coordinates (u, v) with x = A/C, y = B/C.
// Orders along divisors are computed by direct substitution and
// lowest-order extraction.  The intersection matrix of the strict-transform
// classes is maintained incrementally and can be recomputed from scratch in
// the orthogonal (H, e_1, ..., e_m) basis as an independent cross-check.
//
// Coordinate conventions.  The canonical chart of a node E has E = {u = 0},
// and the v-coordinate parameterizes the points of E; v = infinity is the
// satellite point with E's parent, covered by the node's secondary chart.
// The line at infinity (node 0) uses (u, v) = (1/y, x/y) as its canonical
// chart, so the v-parameter of a point [X:Y:0] is X/Y.

#ifndef VALINF_TOWER_HPP
#define VALINF_TOWER_HPP

#include "valinf/poly.hpp"
#include "valinf/quadext.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace valinf {

using K = QuadExt;

struct Chart {
    Poly2Q A, B, C;    // x = A/C, y = B/C in chart coordinates (u, v)
    int udiv = -1;     // node id of the divisor {u = 0} (always >= 0)
    int vdiv = -1;     // node id of the divisor {v = 0}, or -1 (not a divisor)
};

// Direction on a divisor E: a finite v-parameter in E's canonical chart, or
// the satellite point with E's parent ("infinity" direction).
struct Direction {
    bool at_parent_satellite = false;
    K t;  // meaningful when !at_parent_satellite

    static Direction finite(const K& c) { return Direction{false, c}; }
    static Direction parent_satellite() { return Direction{true, K()}; }
    bool operator==(const Direction& o) const {
        if (at_parent_satellite != o.at_parent_satellite) return false;
        return at_parent_satellite || t == o.t;
    }
};

struct PointSpec {
    enum Kind { Free, Satellite } kind;
    int on = -1;  // Free: divisor carrying the point
    K t;          // Free: v-parameter in the canonical chart of `on`
    int a = -1, b = -1;  // Satellite: the two divisors

    static PointSpec free_point(int node, const K& t) {
        PointSpec p;
        p.kind = Free;
        p.on = node;
        p.t = t;
        return p;
    }
    static PointSpec satellite(int a, int b) {
        PointSpec p;
        p.kind = Satellite;
        p.a = a;
        p.b = b;
        return p;
    }
};

struct TowerNode {
    int id = 0;
    int chartA = -1;  // canonical chart: E = {u=0}, v parameterizes E
    int chartB = -1;  // secondary chart: E = {v=0}, u-axis = parent divisor
    int parent = -1;  // divisor that carried the blown-up center (-1 for root)
    int second_parent = -1;  // other divisor through the center (satellite), or -1
    K center_t;              // v-parameter of the center on `parent`
    bool center_at_parent_satellite = false;
    long b = 1;        // -min{ord_E x, ord_E y}
    long ord_x = -1, ord_y = -1, ord_jac = -3;
    Rat alpha;         // skewness, exact (from the incremental recursion)
    Rat thinness;      // A(v_E)
};

class BlowupTower {
  public:
    BlowupTower();

    int size() const { return (int)nodes_.size(); }
    const TowerNode& node(int id) const { return nodes_.at(id); }
    const Chart& chart(int id) const { return charts_.at(id); }
    long long field() const { return field_; }

    // Blow up the point of E given by `dir`.  Returns the new node id.
    int blowup(int node_id, const Direction& dir);
    // Spec-level entry point; validates the point and dispatches.
    int blowup(const PointSpec& p);

    // ord_E(pullback of P); P must be nonzero.
    long ord_on_divisor(int node_id, const Poly2& P) const;
    long ord_on_divisor_q(int node_id, const Poly2Q& P) const;

    // exact intersection data
    const std::vector<std::vector<Rat>>& intersection_matrix() const { return M_; }
    std::vector<Rat> dual_class(int node_id) const;    // coefficients over strict basis
    Rat dual_self_intersection(int node_id) const;     // (E-check . E-check)
    Rat skewness_lattice(int node_id) const;           // from the dual class
    Rat skewness(int node_id) const { return nodes_[node_id].alpha; }
    Rat thinness(int node_id) const { return nodes_[node_id].thinness; }
    // (E-check_a . E-check_b) / (b_a b_b) = alpha of the meet of v_a, v_b
    Rat alpha_pair(int a, int b) const;

    // from-scratch recomputation of the intersection matrix in the
    // orthogonal basis; used by tests to catch bookkeeping drift
    std::vector<std::vector<Rat>> recompute_matrix() const;

    // invariant: pullback of l_infty, sum of b_E * E, has self-intersection 1
    // and intersects every strict class to 0 except via the H-duality
    bool check_l_infty_pullback() const;

    bool adjacent(int a, int b) const;
    // v-parameter directions of node `a` already blown up
    bool direction_blown(int node_id, const Direction& dir) const;
    // node born from blowing up the given direction, or -1
    int child_at(int node_id, const Direction& dir) const;

    std::string to_json() const;
    std::string dual_graph_dot() const;

  private:
    friend class SegmentWalker;
    std::vector<TowerNode> nodes_;
    std::vector<Chart> charts_;
    std::vector<std::vector<Rat>> M_;  // strict-transform intersection matrix
    // orthogonal-basis bookkeeping: class of each strict transform over
    // (H, e_1, .., e_m) with form diag(1, -1, .., -1)
    std::vector<std::vector<long>> ortho_;
    std::map<std::pair<int, int>, int> adjacency_;  // divisor pair -> chart id
    std::vector<std::vector<std::pair<Direction, int>>> blown_;  // per node: (dir, child)
    long long field_ = 0;

    void absorb_field(const K& c);
    int add_chart(Chart ch);
    static void strip_common_u(Poly2Q& A, Poly2Q& B, Poly2Q& C);
};

}  // namespace valinf

#endif  // VALINF_TOWER_HPP
