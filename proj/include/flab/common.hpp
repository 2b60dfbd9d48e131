#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace flab {

using Real = double;
using std::int64_t;
using std::uint64_t;

struct Point {
    Real x = 0;
    Real y = 0;
};

inline Real norm(Point p) { return std::hypot(p.x, p.y); }
inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }

/// Closed axis-aligned rectangle [x1,x2] x [y1,y2].
struct Rect {
    Real x1, x2, y1, y2;

    bool contains(Point p) const {
        return p.x >= x1 && p.x <= x2 && p.y >= y1 && p.y <= y2;
    }
    /// Euclidean distance from p to the rectangle (0 if inside).
    Real distance(Point p) const {
        Real dx = p.x < x1 ? x1 - p.x : (p.x > x2 ? p.x - x2 : 0.0);
        Real dy = p.y < y1 ? y1 - p.y : (p.y > y2 ? p.y - y2 : 0.0);
        return std::hypot(dx, dy);
    }
};

class budget_error : public std::runtime_error {
  public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

class resolution_error : public std::runtime_error {
  public:
    explicit resolution_error(const std::string& what) : std::runtime_error(what) {}
};

/// Global work budget in elementary operations per call. Overridable through
/// the FROSTMAN_LAB_BUDGET environment variable.
inline int64_t default_work_budget() {
    static const int64_t value = [] {
        if (const char* env = std::getenv("FROSTMAN_LAB_BUDGET")) {
            char* end = nullptr;
            double v = std::strtod(env, &end);
            if (end != env && v > 0) return static_cast<int64_t>(v);
        }
        return int64_t{1000000000};
    }();
    return value;
}

/// Exact dyadic-width check: returns k with delta == 2^-k, or throws.
inline int level_of_delta(Real delta) {
    if (!(delta > 0) || delta > 1) throw std::domain_error("delta must lie in (0,1]");
    int exp = 0;
    Real mant = std::frexp(delta, &exp); // delta = mant * 2^exp, mant in [0.5,1)
    if (mant != 0.5) throw std::domain_error("delta must be a dyadic rational 2^-k");
    int k = 1 - exp;
    if (k < 0) throw std::domain_error("delta must be a dyadic rational 2^-k");
    return k;
}

inline Real delta_of_level(int level) { return std::ldexp(1.0, -level); }

/// Least-squares slope of y against x.
inline Real fit_slope(const std::vector<Real>& x, const std::vector<Real>& y) {
    const size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("fit_slope: need >= 2 points");
    Real mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= Real(n);
    my /= Real(n);
    Real sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

} // namespace flab
