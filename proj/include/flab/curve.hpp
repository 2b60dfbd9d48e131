#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flab/common.hpp"

namespace flab {

struct CurveEval {
    Real value;
    Real slope;
    Real curvature;
};

namespace detail {

struct Iv {
    Real lo, hi;
};
inline Iv operator+(Iv a, Iv b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Iv operator*(Iv a, Iv b) {
    Real p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}
inline Iv iv_const(Real c) { return {c, c}; }

inline Iv horner_iv(const std::vector<Real>& c, Iv x) {
    Iv r = iv_const(0);
    for (size_t i = c.size(); i-- > 0;) r = r * x + iv_const(c[i]);
    return r;
}

inline std::vector<Real> poly_derivative(const std::vector<Real>& c) {
    std::vector<Real> d;
    for (size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * Real(i));
    return d;
}

} // namespace detail

/// A strictly convex C^2 graph psi on [-3,3] with certified curvature and
/// slope bounds. The truncated graph over [-1,1] is the curve all tubes are
/// built from.
class CurveSpec {
  public:
    static constexpr Real kDomain = 3.0;

    static const CurveSpec& parabola() {
        static const CurveSpec s = CurveSpec::polynomial("parabola", {0.0, 0.0, 1.0});
        return s;
    }

    /// psi(x) = e^x: strictly convex with no symmetry, the generic test case.
    static const CurveSpec& exp_graph() {
        static const CurveSpec s = CurveSpec::make_exp();
        return s;
    }

    /// Builds a polynomial spec, certifying psi'' > 0 on [-3,3] by interval
    /// subdivision. Throws std::domain_error if positivity cannot be
    /// certified.
    static CurveSpec polynomial(std::string name, std::vector<Real> coeffs) {
        CurveSpec s;
        s.name_ = std::move(name);
        s.coeffs_ = std::move(coeffs);
        s.is_exp_ = false;
        s.certify_and_fill_bounds();
        s.vertex_ = s.compute_vertex();
        return s;
    }

    const std::string& name() const { return name_; }
    Real kappa_min() const { return kappa_min_; }
    Real lip() const { return lip_; }
    bool is_exp() const { return is_exp_; }
    const std::vector<Real>& coefficients() const { return coeffs_; }

    /// (psi, psi', psi'') at x; domain error outside [-3,3].
    CurveEval eval(Real x) const {
        if (!(x >= -kDomain && x <= kDomain))
            throw std::domain_error("CurveSpec::eval: abscissa outside [-3,3]");
        return eval_unchecked(x);
    }

    Real value_at(Real x) const { return eval_unchecked(x).value; }
    Real slope_at(Real x) const { return eval_unchecked(x).slope; }

    /// Argmin of psi on [-1,1]; unique since psi'' > 0.
    Real vertex() const { return vertex_; }

    /// Range of psi over [a,b] (subset of the domain), exact up to roundoff:
    /// psi is monotone on each side of the vertex.
    void value_range(Real a, Real b, Real& lo, Real& hi) const {
        Real va = value_at(a), vb = value_at(b);
        hi = std::max(va, vb);
        lo = std::min(va, vb);
        if (a < vertex_ && vertex_ < b) lo = std::min(lo, value_at(vertex_));
    }

    /// max |psi'| over [a,b]; psi' is increasing.
    Real max_abs_slope(Real a, Real b) const {
        return std::max(std::abs(slope_at(a)), std::abs(slope_at(b)));
    }

  private:
    CurveSpec() = default;

    static CurveSpec make_exp() {
        CurveSpec s;
        s.name_ = "exp";
        s.is_exp_ = true;
        s.kappa_min_ = std::exp(-kDomain);
        s.lip_ = std::exp(kDomain);
        s.vertex_ = -1.0; // psi' = e^x > 0 everywhere
        return s;
    }

    CurveEval eval_unchecked(Real x) const {
        if (is_exp_) {
            Real e = std::exp(x);
            return {e, e, e};
        }
        // Horner for value, first and second derivative in one sweep.
        Real p = 0, dp = 0, ddp = 0;
        for (size_t i = coeffs_.size(); i-- > 0;) {
            ddp = ddp * x + 2 * dp;
            dp = dp * x + p;
            p = p * x + coeffs_[i];
        }
        return {p, dp, ddp};
    }

    void certify_and_fill_bounds() {
        auto d1 = detail::poly_derivative(coeffs_);
        auto d2 = detail::poly_derivative(d1);
        Real kappa = std::numeric_limits<Real>::infinity();
        Real lip = 0;
        // Certify psi'' > 0 leaf by leaf; accumulate bounds from the leaves.
        struct Seg {
            Real a, b;
            int depth;
        };
        std::vector<Seg> stack{{-kDomain, kDomain, 0}};
        while (!stack.empty()) {
            Seg s = stack.back();
            stack.pop_back();
            detail::Iv x{s.a, s.b};
            detail::Iv c = detail::horner_iv(d2, x);
            if (c.hi <= 0)
                throw std::domain_error("polynomial spec: psi'' not positive on [-3,3]");
            if (c.lo > 0 && s.depth >= 10) {
                kappa = std::min(kappa, c.lo);
                detail::Iv sl = detail::horner_iv(d1, x);
                lip = std::max(lip, std::max(std::abs(sl.lo), std::abs(sl.hi)));
                continue;
            }
            if (s.depth >= 40)
                throw std::domain_error("polynomial spec: cannot certify psi'' > 0");
            Real m = 0.5 * (s.a + s.b);
            stack.push_back({s.a, m, s.depth + 1});
            stack.push_back({m, s.b, s.depth + 1});
        }
        kappa_min_ = kappa;
        lip_ = lip;
    }

    Real compute_vertex() const {
        Real a = -1.0, b = 1.0;
        if (slope_at(a) >= 0) return a;
        if (slope_at(b) <= 0) return b;
        for (int i = 0; i < 80; ++i) {
            Real m = 0.5 * (a + b);
            (slope_at(m) < 0 ? a : b) = m;
        }
        return 0.5 * (a + b);
    }

    std::string name_;
    std::vector<Real> coeffs_;
    bool is_exp_ = false;
    Real kappa_min_ = 0;
    Real lip_ = 0;
    Real vertex_ = 0;
};

enum class Branch { full, increasing, decreasing };

/// The closed delta-neighborhood of one branch of q + Gamma.
struct CurvedTube {
    Point q;
    Real delta;
    const CurveSpec* spec;
    Branch branch = Branch::full;

    /// Curve-local abscissa range of the chosen branch.
    Real lo() const { return branch == Branch::increasing ? spec->vertex() : -1.0; }
    Real hi() const { return branch == Branch::decreasing ? spec->vertex() : 1.0; }
};

inline CurvedTube make_tube(const CurveSpec& spec, Point q, Real delta,
                            Branch branch = Branch::full) {
    if (!(delta > 0) || delta > 1) throw std::domain_error("tube width must lie in (0,1]");
    if (norm(q) > 1 + 1e-12) throw std::domain_error("tube center must lie in B(1)");
    return CurvedTube{q, delta, &spec, branch};
}

inline Real geometric_tolerance(Real delta) { return delta * 1e-3; }

inline std::pair<CurvedTube, CurvedTube> monotone_split(const CurvedTube& tube) {
    if (tube.branch != Branch::full)
        throw std::invalid_argument("monotone_split: tube already split");
    CurvedTube dec = tube, inc = tube;
    dec.branch = Branch::decreasing;
    inc.branch = Branch::increasing;
    return {dec, inc};
}

namespace detail {

/// Certified threshold test for min_{u in [lo,hi]} dist(curve_q(u), rect).
/// Returns true when the minimum is <= thr, false when it is > thr + tol;
/// in the shell between, either answer is allowed and the implementation is
/// inclusive. Branch-and-bound with the arclength speed as Lipschitz bound.
inline bool curve_rect_within(const CurveSpec& spec, Point q, Rect rect, Real lo, Real hi,
                              Real thr, Real tol) {
    // Work in curve-local coordinates.
    Rect r{rect.x1 - q.x, rect.x2 - q.x, rect.y1 - q.y, rect.y2 - q.y};
    if (lo > hi) return false;

    auto curve_pt = [&](Real u) { return Point{u, spec.value_at(u)}; };

    // Quick accept: curve passes through the rectangle.
    {
        Real a = std::max(lo, r.x1), b = std::min(hi, r.x2);
        if (a <= b) {
            Real vlo, vhi;
            spec.value_range(a, b, vlo, vhi);
            if (vhi >= r.y1 && vlo <= r.y2) return true;
        }
    }
    // Feasible abscissa window: outside it the horizontal gap already
    // exceeds thr + tol.
    Real wlo = std::max(lo, r.x1 - thr - tol);
    Real whi = std::min(hi, r.x2 + thr + tol);
    if (wlo > whi) {
        // Nearest curve point is an endpoint of the domain.
        Real u = (r.x1 - thr - tol < lo) ? lo : hi;
        return r.distance(curve_pt(u)) <= thr + tol;
    }
    // Quick accept at the clamped abscissa.
    {
        Real u0 = std::clamp(0.5 * (r.x1 + r.x2), wlo, whi);
        if (r.distance(curve_pt(u0)) <= thr) return true;
    }
    // Quick reject: the vertical gap over the window exceeds thr + tol
    // (points outside the window are excluded by the horizontal gap).
    {
        Real vlo, vhi;
        spec.value_range(wlo, whi, vlo, vhi);
        if (vlo > r.y2 + thr + tol || vhi < r.y1 - thr - tol) return false;
    }
    const Real speed = std::hypot(1.0, spec.max_abs_slope(wlo, whi));
    const Real min_hw = 0.5 * tol / speed;
    struct Seg {
        Real a, b;
    };
    std::vector<Seg> stack{{wlo, whi}};
    int64_t evals = 0;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        Real m = 0.5 * (s.a + s.b);
        Real hw = 0.5 * (s.b - s.a);
        Real d = r.distance(curve_pt(m));
        if (d <= thr + 0.5 * tol) return true;
        if (d - speed * hw > thr) continue; // min over segment certainly > thr
        if (hw <= min_hw) return true;      // cannot be pruned: min <= thr + tol
        if (++evals > 200000) return true;  // budget fallback stays inclusive
        stack.push_back({s.a, m});
        stack.push_back({m, s.b});
    }
    return false;
}

/// Certified minimum distance from the curve segment to a rectangle.
/// Branch-and-bound down to scale w0, then a derivative-sign bisection
/// polish inside the surviving segments.
inline Real curve_rect_distance(const CurveSpec& spec, Point q, Rect rect, Real lo, Real hi,
                                Real w0 = 1e-5) {
    Rect r{rect.x1 - q.x, rect.x2 - q.x, rect.y1 - q.y, rect.y2 - q.y};
    auto dist_at = [&](Real u) { return r.distance(Point{u, spec.value_at(u)}); };
    if (lo >= hi) return dist_at(lo);

    const Real speed = std::hypot(1.0, spec.max_abs_slope(lo, hi));
    Real best = std::min(dist_at(lo), dist_at(hi));
    struct Seg {
        Real a, b;
    };
    std::vector<Seg> stack{{lo, hi}}, survivors;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        Real m = 0.5 * (s.a + s.b);
        Real hw = 0.5 * (s.b - s.a);
        Real d = dist_at(m);
        best = std::min(best, d);
        if (d - speed * hw > best) continue;
        if (hw <= w0) {
            survivors.push_back(s);
            continue;
        }
        stack.push_back({s.a, m});
        stack.push_back({m, s.b});
    }
    // Signed offsets give a continuous derivative of the squared distance.
    auto deriv = [&](Real u) {
        Real cx = u, cy = spec.value_at(u);
        Real ex = cx < r.x1 ? cx - r.x1 : (cx > r.x2 ? cx - r.x2 : 0.0);
        Real ey = cy < r.y1 ? cy - r.y1 : (cy > r.y2 ? cy - r.y2 : 0.0);
        return ex + ey * spec.slope_at(u);
    };
    for (const auto& s : survivors) {
        Real ga = deriv(s.a), gb = deriv(s.b);
        best = std::min(best, std::min(dist_at(s.a), dist_at(s.b)));
        if (ga <= 0 && gb >= 0) {
            Real a = s.a, b = s.b;
            for (int i = 0; i < 60; ++i) {
                Real m = 0.5 * (a + b);
                (deriv(m) <= 0 ? a : b) = m;
            }
            best = std::min(best, dist_at(0.5 * (a + b)));
        }
    }
    return best;
}

} // namespace detail

/// dist(p, Gamma_q): minimum distance from p to the translated curve graph
/// over [x_q - 1, x_q + 1]. Certified bracketing; accuracy ~1e-5 worst case
/// near degenerate geometry, machine precision in regular cases.
inline Real curve_distance(const CurveSpec& spec, Point q, Point p) {
    if (norm(q) > 1 + 1e-12) throw std::domain_error("curve_distance: q outside B(1)");
    if (std::abs(p.x) > 4 || std::abs(p.y) > 4)
        throw std::domain_error("curve_distance: p outside [-4,4]^2");
    return detail::curve_rect_distance(spec, q, Rect{p.x, p.x, p.y, p.y}, -1.0, 1.0);
}

/// Whether the closed rectangle meets the closed tube, conservative-inclusive
/// on a boundary shell of thickness <= tol (default delta * 1e-3).
inline bool tube_rect_intersects(const CurvedTube& tube, const Rect& rect,
                                 std::optional<Real> tol = std::nullopt) {
    Real t = tol ? *tol : geometric_tolerance(tube.delta);
    return detail::curve_rect_within(*tube.spec, tube.q, rect, tube.lo(), tube.hi(),
                                     tube.delta, t);
}

inline bool tube_contains_point(const CurvedTube& tube, Point p,
                                std::optional<Real> tol = std::nullopt) {
    return tube_rect_intersects(tube, Rect{p.x, p.x, p.y, p.y}, tol);
}

namespace detail {

/// Collects points of Gamma_{q1}(delta) cap Gamma_{q2}(delta) inside the
/// given box by dense sampling plus curve-anchored probes.
inline void sample_tube_intersection(const CurveSpec& spec, Point q1, Point q2, Real delta,
                                     Real xa, Real xb, Real ya, Real yb, int nx, int ny,
                                     std::vector<Point>& out) {
    if (xa > xb || ya > yb) return;
    CurvedTube t1{q1, delta, &spec, Branch::full};
    CurvedTube t2{q2, delta, &spec, Branch::full};
    auto in_both = [&](Point p) {
        return tube_contains_point(t1, p) && tube_contains_point(t2, p);
    };
    for (int i = 0; i <= nx; ++i) {
        Real x = xa + (xb - xa) * Real(i) / Real(std::max(nx, 1));
        for (int j = 0; j <= ny; ++j) {
            Real y = ya + (yb - ya) * Real(j) / Real(std::max(ny, 1));
            if (in_both({x, y})) out.push_back({x, y});
        }
        // Curve-anchored probes catch slivers thinner than the row spacing.
        for (Point qc : {q1, q2}) {
            Real u = x - qc.x;
            if (u < -1 || u > 1) continue;
            Real yc = qc.y + spec.value_at(u);
            for (int j = -6; j <= 6; ++j) {
                Point p{x, yc + Real(j) * delta / 5.0};
                if (p.y >= ya - delta && p.y <= yb + delta && in_both(p)) out.push_back(p);
            }
        }
    }
}

inline Real point_set_diameter(const std::vector<Point>& pts) {
    if (pts.size() < 2) return 0;
    // Convex hull (monotone chain) + brute pairwise max over the hull.
    std::vector<Point> p = pts;
    std::sort(p.begin(), p.end(), [](Point a, Point b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    auto cross = [](Point o, Point a, Point b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<Point> h(2 * p.size());
    size_t k = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k > 1 ? k - 1 : k);
    Real best = 0;
    for (size_t i = 0; i < h.size(); ++i)
        for (size_t j = i + 1; j < h.size(); ++j) best = std::max(best, norm(h[i] - h[j]));
    return best;
}

} // namespace detail

/// Diameter of Gamma_{q1}(delta) cap Gamma_{q2}(delta), to ~5% relative, or
/// 0 when the intersection is empty.
///
/// For x1 != x2 the vertical gap G(x) = psi1(x) - psi2(x) is strictly
/// monotone (psi' is strictly increasing), so the candidate window
/// {|G| <= (2L+3) delta} is a single interval located by bisection. Equal
/// abscissae are routed through the |y1-y2| <= (2L+1) delta criterion.
inline Real tube_intersection_diameter(const CurveSpec& spec, Point q1, Point q2,
                                       Real delta) {
    if (norm(q1) > 1 + 1e-12 || norm(q2) > 1 + 1e-12)
        throw std::domain_error("tube_intersection_diameter: centers must lie in B(1)");
    if (!(delta > 0) || delta > 1)
        throw std::domain_error("tube_intersection_diameter: width must lie in (0,1]");

    const Real L = spec.max_abs_slope(-1.0, 1.0);
    std::vector<std::pair<Real, Real>> windows; // abscissa intervals to sample

    if (q1.x == q2.x) {
        if (std::abs(q1.y - q2.y) > (2 * L + 1) * delta) return 0.0;
        windows.emplace_back(q1.x - 1, q1.x + 1);
    } else {
        Real xa = std::max(q1.x, q2.x) - 1, xb = std::min(q1.x, q2.x) + 1;
        auto G = [&](Real x) {
            Real u1 = std::clamp(x - q1.x, -1.0, 1.0);
            Real u2 = std::clamp(x - q2.x, -1.0, 1.0);
            return (q1.y + spec.value_at(u1)) - (q2.y + spec.value_at(u2));
        };
        const Real thr = (2 * L + 3) * delta;
        Real lo = xa - 2 * delta, hi = xb + 2 * delta;
        Real glo = G(lo), ghi = G(hi);
        bool up = ghi >= glo;
        Real gmin = up ? glo : ghi, gmax = up ? ghi : glo;
        if (gmin > thr || gmax < -thr) {
            // Graph neighborhoods stay apart over the common span; only
            // endpoint caps could still touch.
        } else {
            // Monotone bisection for {x : |G(x)| <= thr}.
            auto solve = [&](Real target) {
                Real a = lo, b = hi;
                for (int i = 0; i < 80; ++i) {
                    Real m = 0.5 * (a + b);
                    ((G(m) < target) == up ? a : b) = m;
                }
                return 0.5 * (a + b);
            };
            Real wl = (gmin >= -thr) ? lo : solve(-thr);
            Real wr = (gmax <= thr) ? hi : solve(thr);
            if (!up) std::swap(wl, wr);
            if (wl <= wr) windows.emplace_back(wl, wr);
        }
        // Endpoint caps of one curve inside the other tube.
        for (auto [qa, qb] : {std::pair{q1, q2}, std::pair{q2, q1}}) {
            for (Real ue : {-1.0, 1.0}) {
                Point e{qa.x + ue, qa.y + spec.value_at(ue)};
                Real d = detail::curve_rect_distance(*(&spec), qb, Rect{e.x, e.x, e.y, e.y},
                                                     -1.0, 1.0);
                if (d <= 2 * delta) windows.emplace_back(e.x - 3 * delta, e.x + 3 * delta);
            }
        }
    }
    if (windows.empty()) return 0.0;

    std::vector<Point> pts;
    for (auto [wa, wb] : windows) {
        Real xa = wa - 2 * delta, xb = wb + 2 * delta;
        Real y1lo, y1hi, y2lo, y2hi;
        auto yspan = [&](Point q, Real& ylo, Real& yhi) {
            Real a = std::clamp(xa - q.x, -1.0, 1.0), b = std::clamp(xb - q.x, -1.0, 1.0);
            spec.value_range(a, b, ylo, yhi);
            ylo += q.y;
            yhi += q.y;
        };
        yspan(q1, y1lo, y1hi);
        yspan(q2, y2lo, y2hi);
        Real ya = std::max(y1lo, y2lo) - 2 * delta, yb = std::min(y1hi, y2hi) + 2 * delta;
        int nx = 220, ny = 220;
        detail::sample_tube_intersection(spec, q1, q2, delta, xa, xb, ya, yb, nx, ny, pts);
    }
    if (pts.empty()) return 0.0;
    // Refinement pass at a resolution tied to the first estimate.
    Real d0 = detail::point_set_diameter(pts);
    Real xa = pts[0].x, xb = pts[0].x, ya = pts[0].y, yb = pts[0].y;
    for (const auto& p : pts) {
        xa = std::min(xa, p.x);
        xb = std::max(xb, p.x);
        ya = std::min(ya, p.y);
        yb = std::max(yb, p.y);
    }
    Real m = std::max(d0 * 0.02, delta * 0.05);
    std::vector<Point> fine;
    detail::sample_tube_intersection(spec, q1, q2, delta, xa - m, xb + m, ya - m, yb + m, 320,
                                     320, fine);
    Real d1 = detail::point_set_diameter(fine);
    return std::max(d0, d1);
}

} // namespace flab
