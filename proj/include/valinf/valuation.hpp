// valuation.hpp
// -------------
// Valuations centered at infinity, normalized by min{v(x), v(y)} = -1:
//   -deg, divisorial, quasimonomial (rational or quadratic weights), curve
//   valuations of branches at infinity, and lazy images under endomorphisms.
//
// Meets, comparisons and localization all reduce to one primitive: walking
// the shared center path of two valuations through successive blowups.  Each
// valuation exposes a WalkCursor that can (a) report the direction its
// center takes at the current exceptional divisor and (b) descend.  The walk
// itself maintains the exact b / skewness / thinness data of the divisors it
// passes, using the adjacency recursions the tower also uses, and optionally
// realizes the path on a fresh BlowupTower when the caller needs an
// evaluable valuation at the divergence point.

#ifndef VALINF_VALUATION_HPP
#define VALINF_VALUATION_HPP

#include "valinf/poly.hpp"
#include "valinf/tower.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace valinf {

class Branch;  // branches-at-infinity (puiseux.hpp / branch.hpp)

// ---------------------------------------------------------------------------
// Walk cursors
// ---------------------------------------------------------------------------

struct WalkDesc {
    enum Kind { Generic, Finite, Infinity } kind = Generic;
    K c;  // Finite only

    static WalkDesc generic() { return {Generic, K()}; }
    static WalkDesc finite(const K& c) { return {Finite, c}; }
    static WalkDesc infinity() { return {Infinity, K()}; }
    bool operator==(const WalkDesc& o) const {
        if (kind != o.kind) return false;
        return kind != Finite || c == o.c;
    }
};

class WalkCursor {
  public:
    virtual ~WalkCursor() = default;
    virtual WalkDesc stage0() = 0;
    virtual void init0(const WalkDesc& common) = 0;
    virtual WalkDesc descriptor() = 0;
    virtual void step(const WalkDesc& common) = 0;
};

// ---------------------------------------------------------------------------
// Monomial evaluation kernel
// ---------------------------------------------------------------------------

// Monomial valuation at a point of a chart: weights (wu, wv) on the chart
// coordinates translated to the center.  Divisorial valuations are the case
// wv = 0 (weight 1/b on the divisor coordinate).
struct MonomialKernel {
    std::shared_ptr<const BlowupTower> tower;
    int chart = -1;
    K cu, cv;          // center (0, c) => cu = 0; kept general
    QuadExt wu, wv;    // weights; wu > 0; wv >= 0; normalized
    Poly2Q At, Bt, Ct; // chart data translated to the center

    // value of the pullback of a polynomial (never +infinity)
    QuadExt value(const Poly2Q& P) const;
    QuadExt value(const Poly2& P) const { return value(promote(P)); }
    // weighted order of a chart germ
    QuadExt mu(const Poly2Q& germ) const;
    Poly2Q leading_form(const Poly2Q& germ) const;
    // hat-pullback of P with explicit homogenization degree d >= deg P
    Poly2Q hat(const Poly2Q& P, int d) const;
};

// ---------------------------------------------------------------------------
// Valuation
// ---------------------------------------------------------------------------

enum class ValKind { NegDeg, Monomial, Curve, Lazy };
enum class Cmp { Less, Greater, Equal, Incomparable };

class Valuation;
using ValPtr = std::shared_ptr<const Valuation>;

struct MeetResult {
    ValPtr meet;      // may be null for alpha-only computations
    QuadExt alpha;    // skewness of the meet (meaningless when alpha_neg_inf)
    bool alpha_neg_inf = false;  // meet is a curve valuation (equal curve inputs)
    Cmp relation;     // relation of (a, b)
};

class Valuation : public std::enable_shared_from_this<Valuation> {
  public:
    ValKind kind;
    std::shared_ptr<MonomialKernel> mono;  // Monomial
    std::shared_ptr<Branch> branch;        // Curve
    struct LazyData {
        Endo f;          // composed map (innermost first)
        ValPtr source;
        Rat d;           // d(f, source) normalization factor
    };
    std::shared_ptr<LazyData> lazy;

    static ValPtr neg_deg();
    static ValPtr divisorial(std::shared_ptr<const BlowupTower> t, int node);
    // monomial valuation at the point (0, c) of a chart with raw weights;
    // normalizes to min{v(x),v(y)} = -1
    static ValPtr quasimonomial(std::shared_ptr<const BlowupTower> t, int chart, const K& c,
                                const QuadExt& wu, const QuadExt& wv);
    // monomial valuation with v(x) = ax, v(y) = ay on the standard toric
    // tripod; min{ax, ay} must be -1 (or it is rescaled)
    static ValPtr toric(const QuadExt& ax, const QuadExt& ay);
    static ValPtr curve(std::shared_ptr<Branch> b);
    static ValPtr lazy_image(const Endo& f, ValPtr src);

    // exact evaluation; +infinity only for curve valuations
    ExtRat evaluate(const Poly2& P) const;
    QuadExt evaluate_q(const Poly2& P) const;  // throws if +infinity
    bool evaluates_infinite(const Poly2& P) const;

    // skewness / thinness; throws for curve valuations (alpha = -infinity)
    QuadExt alpha() const;
    QuadExt thinness() const;
    bool alpha_finite() const { return kind != ValKind::Curve; }
    bool is_divisorial() const;

    // toric fast-path detection: v(x), v(y) when the valuation lives on the
    // hull of {-deg, branch of x-axis, branch of y-axis}
    std::optional<std::pair<QuadExt, QuadExt>> toric_coords() const;

    std::unique_ptr<WalkCursor> make_cursor() const;

    std::string describe() const;

    // set for valuations constructed through toric(): (v(x), v(y))
    std::optional<std::pair<QuadExt, QuadExt>> toric_xy;
    mutable std::optional<QuadExt> alpha_cache;
    mutable std::optional<QuadExt> thin_cache;
};

// ---------------------------------------------------------------------------
// Tree operations
// ---------------------------------------------------------------------------

struct WalkLimits {
    int max_depth = 48;
};

// alpha of the meet (no tower realization; cheap)
QuadExt meet_alpha(const ValPtr& a, const ValPtr& b, const WalkLimits& lim = {});
// meet with a realized valuation
MeetResult meet(const ValPtr& a, const ValPtr& b, const WalkLimits& lim = {});
Cmp compare(const ValPtr& a, const ValPtr& b, const WalkLimits& lim = {});
bool tree_equal(const ValPtr& a, const ValPtr& b);

// d(v, w) = 2 alpha(v ^ w) - alpha(v) - alpha(w)
QuadExt tree_distance(const ValPtr& a, const ValPtr& b);

// finite subtree: the convex hull of generators plus -deg
class FiniteTree {
  public:
    explicit FiniteTree(std::vector<ValPtr> generators);
    const std::vector<ValPtr>& nodes() const { return nodes_; }
    // r_T(v): the point where the segment [-deg, v] leaves T
    ValPtr retract(const ValPtr& v) const;
    int parent_of(int i) const { return parent_[i]; }
    std::string to_dot() const;

  private:
    std::vector<ValPtr> nodes_;   // meet-closed, nodes_[0] = -deg
    std::vector<int> parent_;
};

// direction of w at a divisorial valuation v (tangent-vector computation):
// either "toward the root" or a point of E
struct TangentDirection {
    bool toward_root = false;
    WalkDesc point;  // direction on E when !toward_root
};
TangentDirection direction_at(const ValPtr& v_divisorial, const ValPtr& w);

// center of v on the top model of a tower built by the caller:
// either the generic point of a node or a (node, direction) closed point
struct CenterResult {
    bool generic = false;
    int node = -1;
    WalkDesc dir;  // closed-point direction when !generic
};
CenterResult center_of(const BlowupTower& t, const ValPtr& v);

// Realize the divisorial valuation reached by walking v's own center path to
// its end (v must be divisorial-equivalent, e.g. rational-weight
// quasimonomial); returns the tower-realized equivalent.
ValPtr realize_divisorial(const ValPtr& v, const WalkLimits& lim = {});

}  // namespace valinf

#endif  // VALINF_VALUATION_HPP
