#pragma once

#include <map>
#include <optional>
#include <unordered_map>

#include "flab/common.hpp"
#include "flab/dyadic.hpp"
#include "flab/fft.hpp"

namespace flab {

/// Non-negative weights on dyadic delta-cubes with total mass <= 1.
/// Immutable after construction; duplicate cells are merged.
class DeltaMeasure {
  public:
    enum class Normalize { no, yes };

    DeltaMeasure() = default;
    DeltaMeasure(int level, std::vector<std::pair<Cell, Real>> weights,
                 Normalize normalize = Normalize::no)
        : level_(level) {
        if (level < 0) throw std::domain_error("DeltaMeasure: level must be >= 0");
        std::sort(weights.begin(), weights.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [c, w] : weights) {
            if (!(w >= 0)) throw std::domain_error("DeltaMeasure: negative weight");
            if (w == 0) continue;
            if (!w_.empty() && w_.back().first == c)
                w_.back().second += w;
            else
                w_.emplace_back(c, w);
        }
        for (const auto& [c, w] : w_) mass_ += w;
        if (normalize == Normalize::yes && mass_ > 0) {
            for (auto& [c, w] : w_) w /= mass_;
            mass_ = 1.0;
        }
        if (mass_ > 1 + 1e-9)
            throw std::domain_error("DeltaMeasure: total mass exceeds 1 (use Normalize::yes)");
    }

    int level() const { return level_; }
    Real delta() const { return delta_of_level(level_); }
    Real mass() const { return mass_; }
    int64_t size() const { return int64_t(w_.size()); }
    bool empty() const { return w_.empty(); }
    const std::vector<std::pair<Cell, Real>>& weights() const { return w_; }

    Real weight(Cell c) const {
        auto it = std::lower_bound(w_.begin(), w_.end(), c, [](const auto& a, Cell b) {
            return a.first < b;
        });
        return (it != w_.end() && it->first == c) ? it->second : 0.0;
    }

    Point midpoint(size_t i) const { return DyadicCube{level_, w_[i].first}.midpoint(); }

    CubeSet support() const {
        std::vector<Cell> cells;
        cells.reserve(w_.size());
        for (const auto& [c, w] : w_) cells.push_back(c);
        return CubeSet(level_, std::move(cells));
    }

    DeltaMeasure scaled(Real factor) const {
        if (!(factor >= 0)) throw std::domain_error("DeltaMeasure::scaled: bad factor");
        std::vector<std::pair<Cell, Real>> w = w_;
        for (auto& [c, v] : w) v *= factor;
        return DeltaMeasure(level_, std::move(w));
    }

  private:
    int level_ = 0;
    std::vector<std::pair<Cell, Real>> w_;
    Real mass_ = 0;
};

/// Cube set with positive integer weights.
class WeightedCubeSet {
  public:
    WeightedCubeSet() = default;
    WeightedCubeSet(int level, std::vector<std::pair<Cell, int64_t>> entries)
        : level_(level) {
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [c, w] : entries) {
            if (w < 1) throw std::domain_error("WeightedCubeSet: weights must be >= 1");
            if (!entries_.empty() && entries_.back().first == c)
                entries_.back().second += w;
            else
                entries_.emplace_back(c, w);
        }
        std::vector<Cell> cells;
        cells.reserve(entries_.size());
        for (const auto& [c, w] : entries_) cells.push_back(c);
        base_ = CubeSet(level, std::move(cells));
        for (const auto& [c, w] : entries_) total_ += w;
    }

    static WeightedCubeSet uniform(const CubeSet& s, int64_t w = 1) {
        std::vector<std::pair<Cell, int64_t>> e;
        e.reserve(size_t(s.size()));
        for (Cell c : s.cells()) e.emplace_back(c, w);
        return WeightedCubeSet(s.level(), std::move(e));
    }

    int level() const { return level_; }
    const CubeSet& base() const { return base_; }
    const std::vector<std::pair<Cell, int64_t>>& entries() const { return entries_; }
    int64_t total_weight() const { return total_; }
    int64_t size() const { return int64_t(entries_.size()); }

    int64_t weight(Cell c) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), c,
                                   [](const auto& a, Cell b) { return a.first < b; });
        return (it != entries_.end() && it->first == c) ? it->second : 0;
    }

  private:
    int level_ = 0;
    CubeSet base_;
    std::vector<std::pair<Cell, int64_t>> entries_;
    int64_t total_ = 0;
};

namespace detail {

/// Max aggregate per dyadic ancestor window, level by level from k down to 0.
/// Reports max_j (peak_j / scale(j)) where scale(j) is supplied by the caller
/// (j = window level).
template <class Scale>
Real dyadic_window_max(int level, const std::vector<std::pair<Cell, Real>>& atoms,
                       Scale&& scale) {
    std::unordered_map<uint64_t, Real, CellKeyHash> cur;
    cur.reserve(atoms.size() * 2);
    for (const auto& [c, w] : atoms) cur[cell_key(c)] += w;
    Real best = 0;
    for (int j = level; j >= 0; --j) {
        Real peak = 0;
        for (const auto& [k, v] : cur) peak = std::max(peak, v);
        best = std::max(best, peak / scale(j));
        if (j == 0) break;
        std::unordered_map<uint64_t, Real, CellKeyHash> up;
        up.reserve(cur.size());
        for (const auto& [k, v] : cur) {
            int64_t x = int64_t(int32_t(uint32_t(k >> 32)));
            int64_t y = int64_t(int32_t(uint32_t(k)));
            up[cell_key({x >> 1, y >> 1})] += v;
        }
        cur = std::move(up);
    }
    return best;
}

} // namespace detail

/// Least C with mu(Q) <= C r^u over all dyadic cubes Q of side r in
/// [delta, 1]. Cube-window convention; the ball constant differs by at most
/// the fixed 3x3 covering factor 9.
inline Real frostman_constant(const DeltaMeasure& mu, Real u) {
    if (!(u >= 0 && u <= 2)) throw std::domain_error("frostman_constant: u outside [0,2]");
    if (mu.empty()) return 0;
    return detail::dyadic_window_max(mu.level(), mu.weights(), [&](int j) {
        return std::pow(delta_of_level(j), u);
    });
}

/// Least C with |P cap Q|_delta <= C (r/delta)^s over dyadic windows Q of
/// side r in [delta, 1] (cube-window convention).
inline Real katz_tao_constant(const CubeSet& P, Real s) {
    if (!(s >= 0 && s <= 2)) throw std::domain_error("katz_tao_constant: s outside [0,2]");
    if (P.empty()) return 0;
    std::vector<std::pair<Cell, Real>> atoms;
    atoms.reserve(size_t(P.size()));
    for (Cell c : P.cells()) atoms.emplace_back(c, 1.0);
    int k = P.level();
    return detail::dyadic_window_max(k, atoms, [&](int j) {
        return std::pow(2.0, Real(k - j) * s);
    });
}

/// Weighted variant: sum of weights per window instead of the count.
inline Real katz_tao_constant(const WeightedCubeSet& P, Real s) {
    if (!(s >= 0 && s <= 2)) throw std::domain_error("katz_tao_constant: s outside [0,2]");
    if (P.size() == 0) return 0;
    std::vector<std::pair<Cell, Real>> atoms;
    atoms.reserve(size_t(P.size()));
    for (const auto& [c, w] : P.entries()) atoms.emplace_back(c, Real(w));
    int k = P.level();
    return detail::dyadic_window_max(k, atoms, [&](int j) {
        return std::pow(2.0, Real(k - j) * s);
    });
}

/// 1 + sum_{p != q} mu(p) mu(q) dist(p,q)^-omega with midpoint distances.
/// Small supports use the exact double sum; larger ones switch to an FFT
/// autocorrelation over difference vectors, which evaluates the same sum
/// exactly (distances depend only on the index difference).
inline Real riesz_energy_spatial(const DeltaMeasure& mu, Real omega,
                                 int64_t budget = default_work_budget()) {
    if (!(omega > 0 && omega < 2))
        throw std::domain_error("riesz_energy_spatial: omega outside (0,2)");
    const auto& w = mu.weights();
    const int64_t n = int64_t(w.size());
    if (n <= 1) return 1.0;
    const Real d = mu.delta();

    if (n * n <= std::min<int64_t>(budget, int64_t(4e8))) {
        Real sum = 0;
        for (int64_t i = 0; i < n; ++i) {
            for (int64_t j = i + 1; j < n; ++j) {
                Real dx = Real(w[size_t(i)].first.x - w[size_t(j)].first.x);
                Real dy = Real(w[size_t(i)].first.y - w[size_t(j)].first.y);
                Real dist = d * std::sqrt(dx * dx + dy * dy);
                sum += 2.0 * w[size_t(i)].second * w[size_t(j)].second *
                       std::pow(dist, -omega);
            }
        }
        return 1.0 + sum;
    }

    // Autocorrelation route: C(v) = sum_p mu(p) mu(p+v) via padded FFT.
    int64_t xa = w[0].first.x, xb = xa, ya = w[0].first.y, yb = ya;
    for (const auto& [c, v] : w) {
        xa = std::min(xa, c.x);
        xb = std::max(xb, c.x);
        ya = std::min(ya, c.y);
        yb = std::max(yb, c.y);
    }
    int64_t W = xb - xa + 1, H = yb - ya + 1;
    auto pow2_at_least = [](int64_t v) {
        int64_t n2 = 1;
        while (n2 < v) n2 <<= 1;
        return n2;
    };
    int64_t Nx = pow2_at_least(2 * W), Ny = pow2_at_least(2 * H);
    if (Nx * Ny > int64_t(1) << 26)
        throw budget_error("riesz_energy_spatial: support too large for the FFT route");
    std::vector<Complex> a(size_t(Nx * Ny), Complex(0, 0));
    for (const auto& [c, v] : w) a[size_t((c.x - xa) * Ny + (c.y - ya))] = Complex(v, 0);
    fft2(a, int(Nx), int(Ny));
    for (auto& z : a) z = Complex(std::norm(z), 0);
    fft2(a, int(Nx), int(Ny), /*inverse=*/true);
    Real sum = 0;
    for (int64_t dx = -(W - 1); dx <= W - 1; ++dx) {
        int64_t ix = (dx % Nx + Nx) % Nx;
        for (int64_t dy = -(H - 1); dy <= H - 1; ++dy) {
            if (dx == 0 && dy == 0) continue;
            int64_t iy = (dy % Ny + Ny) % Ny;
            Real corr = a[size_t(ix * Ny + iy)].real();
            if (corr <= 0) continue;
            Real dist = d * std::sqrt(Real(dx * dx + dy * dy));
            sum += corr * std::pow(dist, -omega);
        }
    }
    return 1.0 + sum;
}

namespace detail {

inline Real sinc(Real z) { return z == 0 ? 1.0 : std::sin(z) / z; }

/// Gauss-Legendre nodes/weights on [-1,1], cached per order.
inline const std::pair<std::vector<Real>, std::vector<Real>>& gauss_legendre(int order) {
    thread_local std::unordered_map<int, std::pair<std::vector<Real>, std::vector<Real>>>
        cache;
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    std::vector<Real> x(static_cast<size_t>(order)), w(static_cast<size_t>(order));
    for (int i = 0; i < order; ++i) {
        // Newton iteration from the Chebyshev initial guess.
        Real t = std::cos(M_PI * (Real(i) + 0.75) / (Real(order) + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            Real p0 = 1, p1 = 0;
            for (int j = 0; j < order; ++j) {
                Real p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - Real(j) * p2) / Real(j + 1);
            }
            Real dp = Real(order) * (t * p0 - p1) / (t * t - 1.0);
            Real step = p0 / dp;
            t -= step;
            if (std::abs(step) < 1e-16) break;
        }
        Real p0 = 1, p1 = 0;
        for (int j = 0; j < order; ++j) {
            Real p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * t * p1 - Real(j) * p2) / Real(j + 1);
        }
        Real dp = Real(order) * (t * p0 - p1) / (t * t - 1.0);
        x[size_t(i)] = t;
        w[size_t(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return cache.emplace(order, std::make_pair(std::move(x), std::move(w))).first->second;
}

/// integral of |xi|^(omega-2) over the square cell of side d centered at
/// (kx d, ky d); exact quadrature near the origin where the midpoint rule
/// is poor.
inline Real radial_cell_integral(Real omega, Real d, int64_t kx, int64_t ky) {
    if (kx == 0 && ky == 0) {
        // 8-fold symmetric polar integral over the centered square.
        const auto& [xs, ws] = gauss_legendre(32);
        Real sum = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            Real th = (xs[i] + 1.0) * (M_PI / 8.0); // [0, pi/4]
            Real rho = (d / 2) / std::cos(th);
            sum += ws[i] * (M_PI / 8.0) * std::pow(rho, omega) / omega;
        }
        return 8.0 * sum;
    }
    const auto& [xs, ws] = gauss_legendre(16);
    Real cx = Real(kx) * d, cy = Real(ky) * d, h = d / 2;
    Real sum = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        for (size_t j = 0; j < xs.size(); ++j) {
            Real x = cx + h * xs[i], y = cy + h * xs[j];
            sum += ws[i] * ws[j] * std::pow(x * x + y * y, (omega - 2) / 2);
        }
    }
    return sum * h * h;
}

} // namespace detail

/// Constant in the Fourier representation of the omega-energy in the plane:
/// I_omega = c(omega) * integral |mu^(xi)|^2 |xi|^(omega-2) dxi.
inline Real riesz_fourier_constant(Real omega) {
    return std::pow(M_PI, omega - 1) * std::tgamma(1 - omega / 2) / std::tgamma(omega / 2);
}

/// Fourier-side omega-energy of a grid measure, matched to the spatial
/// convention: the cell-spread transform is summed against exact radial
/// cell integrals, the diagonal cell self-energy is removed term by term,
/// and the off-diagonal "+1" normalization is restored.
inline Real riesz_energy_fourier(const DeltaMeasure& mu, Real omega, int threads = 1) {
    if (!(omega > 0 && omega < 2))
        throw std::domain_error("riesz_energy_fourier: omega outside (0,2)");
    if (mu.level() > 12) throw std::domain_error("riesz_energy_fourier: level > 12");
    const auto& w = mu.weights();
    if (w.size() <= 1) return 1.0;
    const Real d = mu.delta();

    int64_t xa = w[0].first.x, xb = xa, ya = w[0].first.y, yb = ya;
    Real diag = 0;
    for (const auto& [c, v] : w) {
        xa = std::min(xa, c.x);
        xb = std::max(xb, c.x);
        ya = std::min(ya, c.y);
        yb = std::max(yb, c.y);
        diag += v * v;
    }
    int64_t extent = std::max(xb - xa + 1, yb - ya + 1);
    int64_t N = 1;
    while (N < 4 * extent) N <<= 1;
    N = std::max<int64_t>(N, 16);
    if (N > 8192) throw resolution_error("riesz_energy_fourier: padded grid exceeds 8192^2");

    std::vector<Complex> a(size_t(N * N), Complex(0, 0));
    for (const auto& [c, v] : w) a[size_t((c.x - xa) * N + (c.y - ya))] = Complex(v, 0);
    fft2(a, int(N), int(N), false, threads);

    const Real T = Real(N) * d; // period; lattice spacing 1/T
    const Real dxi = 1.0 / T;
    std::vector<Real> sinc2(static_cast<size_t>(N));
    for (int64_t k = -N / 2; k < N / 2; ++k) {
        Real s = detail::sinc(M_PI * Real(k) / Real(N));
        sinc2[size_t(k + N / 2)] = s * s;
    }
    // Effective lattice kernel at small spatial offsets, accumulated in the
    // same pass: Keff(m) = sum_k sinc^4(k) W(k) cos(2 pi k.m / N). Comparing
    // c(omega) Keff(m) with the midpoint kernel |m d|^-omega measures exactly
    // how well the truncated lattice resolves near pairs.
    constexpr int kNear = 3;
    Real keff[kNear + 1][kNear + 1] = {};
    std::vector<Real> cosx[kNear + 1];
    for (int m = 0; m <= kNear; ++m) {
        cosx[m].resize(size_t(N));
        for (int64_t k = -N / 2; k < N / 2; ++k)
            cosx[m][size_t(k + N / 2)] = std::cos(2 * M_PI * Real(k * m) / Real(N));
    }
    const Real p = omega - 2;
    Real total = 0;
    for (int64_t kx = -N / 2; kx < N / 2; ++kx) {
        int64_t ix = (kx % N + N) % N;
        Real sx = sinc2[size_t(kx + N / 2)];
        for (int64_t ky = -N / 2; ky < N / 2; ++ky) {
            int64_t iy = (ky % N + N) % N;
            Real sy = sinc2[size_t(ky + N / 2)];
            Real cells2 = std::norm(a[size_t(ix * N + iy)]) * sx * sy;
            Real integrand = cells2 - diag * sx * sy;
            Real weight;
            if (std::abs(kx) <= 8 && std::abs(ky) <= 8) {
                weight = detail::radial_cell_integral(omega, dxi, kx, ky);
            } else {
                Real r2 = (kx * kx + ky * ky) * dxi * dxi;
                // Midpoint rule plus the second-order curvature term of the
                // radial cell integral: Laplacian(r^p) = p^2 r^(p-2).
                weight = std::pow(r2, p / 2) * dxi * dxi *
                         (1.0 + p * p * dxi * dxi / (24.0 * r2));
            }
            total += integrand * weight;
            Real sw = sx * sy * weight;
            for (int mx = 0; mx <= kNear; ++mx) {
                Real cxv = cosx[mx][size_t(kx + N / 2)] * sw;
                for (int my = 0; my <= kNear; ++my)
                    keff[mx][my] += cxv * cosx[my][size_t(ky + N / 2)];
            }
        }
    }
    const Real cw = riesz_fourier_constant(omega);
    Real correction = cw * total;
    // Near-field misfit estimate: pair-correlation content at offsets
    // |m|_inf <= 3 weighted by the exact kernel discrepancy there.
    Real est_err = 0;
    for (const auto& [c, v] : w) {
        for (int mx = -kNear; mx <= kNear; ++mx) {
            for (int my = -kNear; my <= kNear; ++my) {
                if (mx == 0 && my == 0) continue;
                Real u = mu.weight({c.x + mx, c.y + my});
                if (u <= 0) continue;
                Real kmid = std::pow(d * std::sqrt(Real(mx * mx + my * my)), -omega);
                Real klat = cw * keff[std::abs(mx)][std::abs(my)];
                est_err += v * u * std::abs(klat - kmid);
            }
        }
    }
    if (est_err > 0.05 * std::abs(correction))
        throw resolution_error(
            "riesz_energy_fourier: near-field tail not resolved to 5% (est_err=" +
            std::to_string(est_err) + ", correction=" + std::to_string(correction) + ")");
    return 1.0 + correction;
}

namespace detail {

/// Mollifier constants: eta(x) = c_eta exp(-1/(1-|x|^2)) on |x|<1 with
/// integral 1, plus the autocorrelation (eta*eta) at lattice offsets.
struct EtaConstants {
    Real c_eta;
    Real l2sq;       // integral of eta^2 = (eta*eta)(0)
    Real corr01;     // (eta*eta) at offset (1,0)
    Real corr11;     // (eta*eta) at offset (1,1)
};

inline Real eta_unnormalized(Real x, Real y) {
    Real r2 = x * x + y * y;
    return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
}

inline const EtaConstants& eta_constants() {
    static const EtaConstants ec = [] {
        const auto& [xs, ws] = gauss_legendre(96);
        auto integrate = [&](auto&& f) {
            Real sum = 0;
            for (size_t i = 0; i < xs.size(); ++i)
                for (size_t j = 0; j < xs.size(); ++j)
                    sum += ws[i] * ws[j] * f(xs[i], xs[j]);
            return sum; // over [-1,1]^2
        };
        Real z = integrate([](Real x, Real y) { return eta_unnormalized(x, y); });
        Real c = 1.0 / z;
        auto corr = [&](Real ox, Real oy) {
            return c * c * integrate([&](Real x, Real y) {
                       return eta_unnormalized(x, y) * eta_unnormalized(x - ox, y - oy);
                   });
        };
        return EtaConstants{c, corr(0, 0), corr(1, 0), corr(1, 1)};
    }();
    return ec;
}

} // namespace detail

/// ||(mu * sigma) * eta_delta||_{L^2}^2 for two grid measures at the same
/// level. The convolution mu*sigma is formed exactly on the shifted lattice;
/// the smoothing enters through the autocorrelation kernel
/// (eta_delta * eta_delta)(k delta) = delta^-2 (eta*eta)(k), so the result
/// carries no sampling error beyond the quadrature of the eta constants.
inline Real mollified_l2(const DeltaMeasure& mu, const DeltaMeasure& sigma, Real delta,
                         int64_t budget = default_work_budget()) {
    int k = level_of_delta(delta);
    if (mu.level() != k || sigma.level() != k)
        throw std::domain_error("mollified_l2: measures must live at level of delta");
    if (mu.empty() || sigma.empty()) return 0;
    if (mu.size() * sigma.size() > budget)
        throw budget_error("mollified_l2: |mu|*|sigma| exceeds the work budget");

    std::vector<std::pair<uint64_t, Real>> conv;
    conv.reserve(size_t(mu.size() * sigma.size()));
    for (const auto& [cm, wm] : mu.weights())
        for (const auto& [cs, ws] : sigma.weights())
            conv.emplace_back(cell_key({cm.x + cs.x, cm.y + cs.y}), wm * ws);
    std::sort(conv.begin(), conv.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Cell, Real>> atoms;
    atoms.reserve(conv.size());
    for (const auto& [key, v] : conv) {
        Cell c{int64_t(int32_t(uint32_t(key >> 32))), int64_t(int32_t(uint32_t(key)))};
        if (!atoms.empty() && atoms.back().first == c)
            atoms.back().second += v;
        else
            atoms.emplace_back(c, v);
    }

    const auto& ec = detail::eta_constants();
    // Row index over the sorted atom list (atoms sorted by (x, y)).
    auto row_range = [&](int64_t x) {
        auto lo = std::lower_bound(atoms.begin(), atoms.end(), x,
                                   [](const auto& a, int64_t v) { return a.first.x < v; });
        auto hi = std::upper_bound(atoms.begin(), atoms.end(), x,
                                   [](int64_t v, const auto& a) { return v < a.first.x; });
        return std::make_pair(lo, hi);
    };
    auto value_at = [&](int64_t x, int64_t y) -> Real {
        auto [lo, hi] = row_range(x);
        auto it = std::lower_bound(lo, hi, y, [](const auto& a, int64_t v) {
            return a.first.y < v;
        });
        return (it != hi && it->first.y == y) ? it->second : 0.0;
    };
    Real sum = 0;
    for (const auto& [c, m] : atoms) {
        Real s = ec.l2sq * m;
        s += ec.corr01 * (value_at(c.x + 1, c.y) + value_at(c.x - 1, c.y) +
                          value_at(c.x, c.y + 1) + value_at(c.x, c.y - 1));
        s += ec.corr11 * (value_at(c.x + 1, c.y + 1) + value_at(c.x + 1, c.y - 1) +
                          value_at(c.x - 1, c.y + 1) + value_at(c.x - 1, c.y - 1));
        sum += m * s;
    }
    return sum / (delta * delta);
}

/// L^2-smoothing exponent zeta(s,t); the stronger branch applies on the
/// overlap, and t > 2-s falls back to the s+1 reduction.
inline Real zeta(Real s, Real t) {
    if (!(s >= 0 && s <= 1) || !(t > 0 && t < 2))
        throw std::domain_error("zeta: (s,t) outside [0,1] x (0,2)");
    if (t <= s) return s + t;
    if (t <= 2 - s) return 2 * s + t - 1;
    return s + 1;
}

/// Incidence exponent gamma(s,t).
inline Real gamma_exponent(Real s, Real t) {
    if (!(s >= 0 && s <= 1) || !(t > 0 && t < 2))
        throw std::domain_error("gamma_exponent: (s,t) outside [0,1] x (0,2)");
    if (t <= s) return s;
    if (t <= 2 - s) return 1;
    throw std::domain_error("gamma_exponent: t > max(s, 2-s) not covered");
}

/// Known value of the convolution-energy supremum, or nullopt on the
/// unsolved wedge (t in (s,3s) for s <= 1/2; t in (s,2-s) for s >= 1/2).
inline std::optional<Real> f_known(Real s, Real t) {
    if (!(s >= 0 && s <= 1) || !(t > 0 && t < 2))
        throw std::domain_error("f_known: (s,t) outside [0,1] x (0,2)");
    if (t <= s && s > 0) return s + t;
    if (s >= 0.5 && t >= 2 - s && t <= s + 1) return s + 1;
    if (s <= 0.5 && t >= 3 * s && t <= s + 1) return t;
    if (t >= s + 1) return t;
    return std::nullopt;
}

} // namespace flab
