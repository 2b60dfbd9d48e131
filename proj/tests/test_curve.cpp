#include <catch_amalgamated.hpp>

#include "flab/curve.hpp"
#include "flab/dyadic.hpp"
#include "flab/rng.hpp"

using namespace flab;
using Catch::Approx;

namespace {

// Independent oracle: distance from p to the parabola graph over [-1,1] via
// Cardano on 2x^3 + (1-2py)x - px = 0 (stationarity of the squared distance).
Real parabola_distance_oracle(Point q, Point p) {
    Real px = p.x - q.x, py = p.y - q.y;
    std::vector<Real> cand{-1.0, 1.0};
    Real pcoef = (1 - 2 * py) / 2, qcoef = -px / 2; // x^3 + p x + q = 0
    Real disc = qcoef * qcoef / 4 + pcoef * pcoef * pcoef / 27;
    if (disc >= 0) {
        Real s = std::sqrt(disc);
        Real u = std::cbrt(-qcoef / 2 + s), v = std::cbrt(-qcoef / 2 - s);
        cand.push_back(u + v);
    } else {
        Real r = std::sqrt(-pcoef * pcoef * pcoef / 27);
        Real phi = std::acos(-qcoef / (2 * r));
        Real m = 2 * std::cbrt(r);
        for (int k = 0; k < 3; ++k)
            cand.push_back(m * std::cos((phi + 2 * M_PI * k) / 3));
    }
    Real best = std::numeric_limits<Real>::infinity();
    for (Real x : cand) {
        x = std::clamp(x, -1.0, 1.0);
        best = std::min(best, std::hypot(px - x, py - x * x));
    }
    return best;
}

Real hull_diameter(std::vector<Point> p) {
    if (p.size() < 2) return 0;
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

} // namespace

TEST_CASE("curve evaluation on the builtin specs", "[curve]") {
    const auto& par = CurveSpec::parabola();
    auto e0 = par.eval(0);
    REQUIRE(e0.value == Approx(0.0).margin(1e-15));
    REQUIRE(e0.slope == Approx(0.0).margin(1e-15));
    REQUIRE(e0.curvature == Approx(2.0));
    auto e1 = par.eval(1);
    REQUIRE(e1.value == Approx(1.0));
    REQUIRE(e1.slope == Approx(2.0));
    REQUIRE(e1.curvature == Approx(2.0));
    REQUIRE_THROWS_AS(par.eval(3.5), std::domain_error);

    REQUIRE(par.kappa_min() > 0);
    REQUIRE(par.kappa_min() <= 2.0);
    REQUIRE(par.lip() >= 6.0);

    const auto& ex = CurveSpec::exp_graph();
    auto ee = ex.eval(1.0);
    REQUIRE(ee.value == Approx(std::exp(1.0)));
    REQUIRE(ee.curvature >= ex.kappa_min());

    // Sampled invariants: curvature and slope bounds hold across the domain.
    for (int i = 0; i <= 600; ++i) {
        Real x = -3.0 + 6.0 * i / 600.0;
        for (const CurveSpec* s : {&par, &ex}) {
            auto ev = s->eval(x);
            REQUIRE(ev.curvature >= s->kappa_min() - 1e-12);
            REQUIRE(std::abs(ev.slope) <= s->lip() + 1e-12);
        }
    }
}

TEST_CASE("polynomial specs are certified", "[curve]") {
    auto quartic = CurveSpec::polynomial("quartic", {1.0, -0.5, 1.0, 0.0, 0.25});
    REQUIRE(quartic.kappa_min() > 0);
    // psi(x) = x^3 has psi'' changing sign: rejected.
    REQUIRE_THROWS_AS(CurveSpec::polynomial("cubic", {0, 0, 0, 1.0}), std::domain_error);
    // Concave: rejected.
    REQUIRE_THROWS_AS(CurveSpec::polynomial("cap", {0, 0, -1.0}), std::domain_error);
}

TEST_CASE("curve_distance on the parabola", "[curve]") {
    const auto& par = CurveSpec::parabola();
    REQUIRE(curve_distance(par, {0, 0}, {0, 0}) == Approx(0.0).margin(1e-9));
    REQUIRE(curve_distance(par, {0, 0}, {0, -0.1}) == Approx(0.1).epsilon(1e-9));

    // Dense-sampling / closed-form oracle on random points.
    Rng rng(33);
    for (int i = 0; i < 300; ++i) {
        Point q{rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)};
        Point p{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        Real got = curve_distance(par, q, p);
        Real want = parabola_distance_oracle(q, p);
        REQUIRE(got == Approx(want).margin(5e-5));
    }
    REQUIRE(curve_distance(par, {0, 0}, {0.5, 0}) ==
            Approx(parabola_distance_oracle({0, 0}, {0.5, 0})).margin(1e-6));

    REQUIRE_THROWS_AS(curve_distance(par, {2, 0}, {0, 0}), std::domain_error);
    REQUIRE_THROWS_AS(curve_distance(par, {0, 0}, {5, 0}), std::domain_error);
}

TEST_CASE("curve_distance on the exp graph against dense sampling", "[curve]") {
    const auto& ex = CurveSpec::exp_graph();
    Rng rng(34);
    for (int i = 0; i < 60; ++i) {
        Point q{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        Point p{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        Real got = curve_distance(ex, q, p);
        Real want = std::numeric_limits<Real>::infinity();
        for (int j = 0; j <= 200000; ++j) {
            Real u = -1.0 + 2.0 * j / 200000.0;
            want = std::min(want, std::hypot(p.x - q.x - u, p.y - q.y - std::exp(u)));
        }
        REQUIRE(got <= want + 1e-9);
        REQUIRE(got == Approx(want).margin(1e-4));
    }
}

TEST_CASE("tube-cube intersection basics", "[curve]") {
    const auto& par = CurveSpec::parabola();
    Real d = std::ldexp(1.0, -6);
    auto tube = make_tube(par, {0, 0}, d);

    auto cube_containing = [&](Real x, Real y) {
        return DyadicCube{6, {int64_t(std::floor(x / d)), int64_t(std::floor(y / d))}};
    };
    REQUIRE(tube_cube_intersects(tube, cube_containing(0, 0)));
    REQUIRE_FALSE(tube_cube_intersects(tube, cube_containing(0, 0.9)));
    REQUIRE(tube_cube_intersects(tube, cube_containing(0.5, 0.25)));
}

TEST_CASE("tube predicates: translation equivariance and monotonicity", "[curve]") {
    const auto& par = CurveSpec::parabola();
    Rng rng(51);
    const int k = 5;
    Real d = std::ldexp(1.0, -k);
    for (int i = 0; i < 200; ++i) {
        Point q{rng.uniform_int(-8, 8) * d, rng.uniform_int(-8, 8) * d};
        if (norm(q) > 1) continue;
        DyadicCube cube{k, {rng.uniform_int(-40, 40), rng.uniform_int(-40, 40)}};
        // Grid-aligned translation (kept inside B(1)).
        int64_t vx = rng.uniform_int(-3, 3), vy = rng.uniform_int(-3, 3);
        Point qv{q.x + vx * d, q.y + vy * d};
        if (norm(qv) > 1) continue;
        DyadicCube cubev{k, {cube.c.x + vx, cube.c.y + vy}};
        auto t = make_tube(par, q, d);
        auto tv = make_tube(par, qv, d);
        REQUIRE(tube_cube_intersects(t, cube) == tube_cube_intersects(tv, cubev));

        // Enlarging delta never turns an intersection off.
        if (tube_cube_intersects(t, cube)) {
            auto t2 = make_tube(par, q, 4 * d);
            REQUIRE(tube_cube_intersects(t2, cube));
        }
    }
}

TEST_CASE("monotone_split", "[curve]") {
    const auto& par = CurveSpec::parabola();
    auto tube = make_tube(par, {0, 0}, 0.25);
    auto [dec, inc] = monotone_split(tube);
    REQUIRE(dec.lo() == Approx(-1.0));
    REQUIRE(dec.hi() == Approx(0.0).margin(1e-12));
    REQUIRE(inc.lo() == Approx(0.0).margin(1e-12));
    REQUIRE(inc.hi() == Approx(1.0));
    REQUIRE_THROWS_AS(monotone_split(inc), std::invalid_argument);

    // Strictly increasing curve: the decreasing branch degenerates to the
    // left endpoint.
    const auto& ex = CurveSpec::exp_graph();
    auto [dece, ince] = monotone_split(make_tube(ex, {0, 0}, 0.25));
    REQUIRE(dece.lo() == Approx(-1.0));
    REQUIRE(dece.hi() == Approx(-1.0));
    REQUIRE(ince.lo() == Approx(-1.0));

    // Split abscissa is translation-equivariant: in world coordinates it
    // sits at q.x + vertex for every center.
    auto t2 = make_tube(par, {0.3, -0.2}, 0.25);
    auto [d2, i2] = monotone_split(t2);
    REQUIRE(t2.q.x + d2.hi() == Approx(0.3).margin(1e-12));
}

TEST_CASE("tube intersection diameter against a local brute-force grid", "[curve]") {
    const auto& par = CurveSpec::parabola();
    const Real delta = 1e-3;
    Point q1{0, 0}, q2{0.5, 0};
    Real got = tube_intersection_diameter(par, q1, q2, delta);
    REQUIRE(got >= 2e-3);
    REQUIRE(got <= 2e-2);

    // Brute-force membership on a 2001^2 local grid around the crossing
    // (psi1 = psi2 at x = 0.25).
    std::vector<Point> accepted;
    Real cx = 0.25, cy = 0.0625, half = 0.012;
    for (int i = 0; i <= 2000; ++i) {
        for (int j = 0; j <= 2000; ++j) {
            Point p{cx - half + 2 * half * i / 2000.0, cy - half + 2 * half * j / 2000.0};
            if (parabola_distance_oracle(q1, p) <= delta &&
                parabola_distance_oracle(q2, p) <= delta)
                accepted.push_back(p);
        }
    }
    REQUIRE_FALSE(accepted.empty());
    Real want = hull_diameter(accepted);
    REQUIRE(got == Approx(want).epsilon(0.05));

    // Symmetry.
    REQUIRE(tube_intersection_diameter(par, q2, q1, delta) == Approx(got).epsilon(1e-6));
}

TEST_CASE("tube intersection diameter degenerate cases", "[curve]") {
    const auto& par = CurveSpec::parabola();
    // Equal abscissae, vertical gap far above delta: empty.
    REQUIRE(tube_intersection_diameter(par, {0, 0}, {0, 1}, 1e-3) == 0.0);
    // Nearly identical tubes with huge width: bounded by one tube diameter.
    Real d = tube_intersection_diameter(par, {0, 0}, {1e-3 * 0.5, 0}, 0.5);
    REQUIRE(d > 0);
    REQUIRE(d <= 2 + 2 * 0.5);
}

TEST_CASE("crossing-tube diameter scales like delta over the center gap", "[curve][slow]") {
    const auto& par = CurveSpec::parabola();
    Rng rng(77);
    std::vector<Real> max_C;
    for (int kk = 8; kk <= 12; ++kk) {
        Real delta = std::ldexp(1.0, -kk);
        Real worst = 0;
        int done = 0;
        while (done < 210) {
            Point q1{rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)};
            Point q2{rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)};
            if (std::abs(q1.x - q2.x) < 10 * delta) continue;
            ++done;
            Real diam = tube_intersection_diameter(par, q1, q2, delta);
            if (diam > 0) worst = std::max(worst, diam * std::abs(q1.x - q2.x) / delta);
        }
        REQUIRE(std::isfinite(worst));
        max_C.push_back(worst);
    }
    Real lo = *std::min_element(max_C.begin(), max_C.end());
    Real hi = *std::max_element(max_C.begin(), max_C.end());
    REQUIRE(hi > 0);
    REQUIRE(hi / lo <= 4.0); // one global constant works across the sweep
}
