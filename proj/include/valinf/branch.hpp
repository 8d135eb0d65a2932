// branch.hpp
// ----------
// Newton-Puiseux decomposition of a plane curve at the line at infinity.
// A Branch is a truncated parameterization tau -> (x(tau), y(tau)) with
// Laurent tails of certified precision; its multiplicity m is the local
// intersection number with the line at infinity.  Branches whose
// coefficients leave Q and one quadratic extension are reported as
// unresolved places, never silently dropped.

#ifndef VALINF_BRANCH_HPP
#define VALINF_BRANCH_HPP

#include "valinf/poly.hpp"
#include "valinf/puiseux.hpp"
#include "valinf/valuation.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace valinf {

class Branch : public std::enable_shared_from_this<Branch> {
  public:
    // center of the branch on l_infty: [1 : lam : 0] in the chart_x
    // parameterization of the tower (lam = y/x at the center), or the point
    // [0 : 1 : 0] flagged by at_y_point
    struct Center {
        bool at_y_point = false;  // [0:1:0]
        K lam;                    // y/x value when !at_y_point
    };

    // Parameterization x(tau), y(tau) with min pole order giving m: for a
    // branch at infinity one of x, y has a pole of order exactly m.
    Branch(Center center, PSeries x, PSeries y, int m, Poly2 source, int packet_size = 1);

    const Center& center() const { return center_; }
    int multiplicity() const { return m_; }
    int packet_size() const { return packet_; }
    const Poly2& source() const { return source_; }
    const PSeries& xs() const { return x_; }
    const PSeries& ys() const { return y_; }

    // raw order of P along the parameterization (ord_tau of P(x(tau),y(tau)))
    // +infinity detected soundly via the Bezout bound deg(P) * deg(source)
    ExtRat evaluate_normalized(const Poly2& P) const;  // ord / m, normalized
    bool evaluates_infinite(const Poly2& P) const;

    std::unique_ptr<WalkCursor> make_cursor(const Endo* prefix) const;

    // ensure the parameterization carries at least `p` certified terms
    void ensure_precision(int p) const;

    bool same_object(const Branch& o) const { return this == &o; }
    std::string describe() const;
    std::string to_json() const;

  private:
    friend std::vector<std::shared_ptr<Branch>> branch_list_of(const Poly2&, long long*);
    Center center_;
    mutable PSeries x_, y_;
    int m_;
    Poly2 source_;  // squarefree polynomial this branch came from
    int packet_;    // number of conjugate branches this object stands for

    // regeneration handle: recompute the parameterization to higher precision
    mutable int target_prec_ = 0;
};

using BranchPtr = std::shared_ptr<Branch>;

struct BranchesResult {
    std::vector<BranchPtr> branches;
    // places that could not be resolved inside Q + one quadratic extension;
    // each carries the multiplicity it accounts for
    struct Unresolved {
        std::string reason;
        int multiplicity;
    };
    std::vector<Unresolved> unresolved;
    bool complete() const { return unresolved.empty(); }
    int total_multiplicity() const;
};

// All branches at infinity of {Q = 0}; Q nonconstant and squarefree (callers
// should pass parts of squarefree_factor).  Sum of multiplicities (including
// unresolved places) equals deg Q.
BranchesResult branches(const Poly2& Q, int precision = 24);

// curve valuation attached to a branch
ValPtr curve_valuation(const BranchPtr& b);

// (C1 . C2) local intersection at infinity:
// m1 * m2 * (1 - alpha(v_{C1} ^ v_{C2}))
Rat intersection_at_infinity(const BranchPtr& b1, const BranchPtr& b2);

// Affine + at-infinity intersection audit against Bezout.
struct BezoutAudit {
    int deg_product;         // deg Q1 * deg Q2
    Rat affine;              // affine intersections with multiplicity
    Rat at_infinity;         // sum of pairwise branch intersections at infinity
    bool pass;               // affine + at_infinity == deg_product
    std::string notes;
};
BezoutAudit bezout_audit(const Poly2& Q1, const Poly2& Q2);

}  // namespace valinf

#endif  // VALINF_BRANCH_HPP
