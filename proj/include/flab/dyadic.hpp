#pragma once

#include <algorithm>
#include <bit>
#include <span>
#include <unordered_set>
#include <vector>

#include "flab/common.hpp"
#include "flab/curve.hpp"

namespace flab {

struct Cell {
    int64_t x = 0;
    int64_t y = 0;
    friend bool operator==(Cell a, Cell b) { return a.x == b.x && a.y == b.y; }
    friend bool operator<(Cell a, Cell b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }
};

inline uint64_t cell_key(Cell c) {
    return (uint64_t(uint32_t(int32_t(c.x))) << 32) | uint64_t(uint32_t(int32_t(c.y)));
}

struct CellKeyHash {
    size_t operator()(uint64_t k) const {
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdull;
        k ^= k >> 33;
        return size_t(k);
    }
};

/// Dyadic cube of side 2^-level with integer coordinates: the cube is
/// [ix 2^-k, (ix+1) 2^-k] x [iy 2^-k, (iy+1) 2^-k] (closed for intersection
/// predicates, half-open for counting).
struct DyadicCube {
    int level;
    Cell c;

    Real side() const { return delta_of_level(level); }
    Rect rect() const {
        Real d = side();
        return {Real(c.x) * d, Real(c.x + 1) * d, Real(c.y) * d, Real(c.y + 1) * d};
    }
    Point midpoint() const {
        Real d = side();
        return {(Real(c.x) + 0.5) * d, (Real(c.y) + 0.5) * d};
    }
};

inline bool tube_cube_intersects(const CurvedTube& tube, const DyadicCube& cube) {
    if (cube.level < 0) throw std::domain_error("tube_cube_intersects: cube side > 1");
    return tube_rect_intersects(tube, cube.rect());
}

/// A finite set of dyadic cubes sharing one level. Cells are kept sorted
/// and unique; the set is immutable after construction.
class CubeSet {
  public:
    CubeSet() = default;
    CubeSet(int level, std::vector<Cell> cells) : level_(level), cells_(std::move(cells)) {
        if (level < 0) throw std::domain_error("CubeSet: level must be >= 0");
        std::sort(cells_.begin(), cells_.end());
        cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
    }

    int level() const { return level_; }
    Real delta() const { return delta_of_level(level_); }
    int64_t size() const { return int64_t(cells_.size()); }
    bool empty() const { return cells_.empty(); }
    const std::vector<Cell>& cells() const { return cells_; }
    bool contains(Cell c) const {
        return std::binary_search(cells_.begin(), cells_.end(), c);
    }
    DyadicCube cube(size_t i) const { return DyadicCube{level_, cells_[i]}; }

  private:
    int level_ = 0;
    std::vector<Cell> cells_;
};

/// |.|_delta of a cube set: number of level-k dyadic cubes meeting the set
/// (half-open convention). The set must be at resolution >= delta.
inline int64_t covering_number(const CubeSet& s, Real delta) {
    int k = level_of_delta(delta);
    if (s.level() < k)
        throw std::domain_error("covering_number: set is coarser than delta");
    int shift = s.level() - k;
    std::vector<uint64_t> keys;
    keys.reserve(s.cells().size());
    for (Cell c : s.cells()) keys.push_back(cell_key({c.x >> shift, c.y >> shift}));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return int64_t(keys.size());
}

/// |.|_delta of a point list. Points on a cell boundary belong to the cell
/// on their right/top (half-open cubes).
inline int64_t covering_number(std::span<const Point> pts, Real delta) {
    level_of_delta(delta);
    std::vector<uint64_t> keys;
    keys.reserve(pts.size());
    for (Point p : pts)
        keys.push_back(cell_key({int64_t(std::floor(p.x / delta)),
                                 int64_t(std::floor(p.y / delta))}));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return int64_t(keys.size());
}

/// Exactly the level-k cubes meeting the tube, walked column by column with
/// the certified intersection predicate. Agrees with brute-force filtering
/// of the full grid by construction of the candidate bands.
inline CubeSet cubes_on_tube(const CurvedTube& tube, Real delta) {
    int k = level_of_delta(delta);
    if (tube.delta != delta)
        throw std::domain_error("cubes_on_tube: tube width must equal the grid width");
    const CurveSpec& spec = *tube.spec;
    const Real tol = geometric_tolerance(delta);
    const Real margin = delta + 2 * tol;
    const Real lo = tube.lo(), hi = tube.hi();

    std::vector<Cell> cells;
    int64_t ix0 = int64_t(std::floor((tube.q.x + lo - margin) / delta));
    int64_t ix1 = int64_t(std::floor((tube.q.x + hi + margin) / delta));
    for (int64_t ix = ix0; ix <= ix1; ++ix) {
        Real wa = std::max(lo, Real(ix) * delta - margin - tube.q.x);
        Real wb = std::min(hi, Real(ix + 1) * delta + margin - tube.q.x);
        if (wa > wb) continue;
        Real vlo, vhi;
        spec.value_range(wa, wb, vlo, vhi);
        int64_t iy0 = int64_t(std::floor((tube.q.y + vlo - margin) / delta));
        int64_t iy1 = int64_t(std::floor((tube.q.y + vhi + margin) / delta));
        for (int64_t iy = iy0; iy <= iy1; ++iy) {
            DyadicCube cube{k, {ix, iy}};
            if (tube_rect_intersects(tube, cube.rect())) cells.push_back(cube.c);
        }
    }
    return CubeSet(k, std::move(cells));
}

namespace detail {

/// Row-major bitmap over an integer box, with word-filled range marking.
class Bitmap {
  public:
    Bitmap(int64_t x0, int64_t y0, int64_t w, int64_t h)
        : x0_(x0), y0_(y0), w_(w), h_(h), words_per_row_((w + 63) / 64),
          bits_(size_t(words_per_row_ * h), 0) {}

    void mark_run(int64_t y, int64_t xa, int64_t xb) { // inclusive range
        uint64_t* row = bits_.data() + size_t((y - y0_) * words_per_row_);
        int64_t a = xa - x0_, b = xb - x0_;
        int64_t wa = a >> 6, wb = b >> 6;
        if (wa == wb) {
            row[wa] |= (~0ull >> (63 - (b & 63))) & (~0ull << (a & 63));
            return;
        }
        row[wa] |= ~0ull << (a & 63);
        for (int64_t w = wa + 1; w < wb; ++w) row[w] = ~0ull;
        row[wb] |= ~0ull >> (63 - (b & 63));
    }

    bool test(int64_t x, int64_t y) const {
        int64_t a = x - x0_, b = y - y0_;
        return (bits_[size_t(b * words_per_row_ + (a >> 6))] >> (a & 63)) & 1;
    }

    int64_t x0() const { return x0_; }
    int64_t y0() const { return y0_; }
    int64_t width() const { return w_; }
    int64_t height() const { return h_; }

    template <class Fn>
    void for_each_set(Fn&& fn) const {
        for (int64_t y = 0; y < h_; ++y) {
            const uint64_t* row = bits_.data() + size_t(y * words_per_row_);
            for (int64_t w = 0; w < words_per_row_; ++w) {
                uint64_t word = row[w];
                while (word) {
                    int b = std::countr_zero(word);
                    word &= word - 1;
                    fn(x0_ + w * 64 + b, y0_ + y);
                }
            }
        }
    }

  private:
    int64_t x0_, y0_, w_, h_, words_per_row_;
    std::vector<uint64_t> bits_;
};

} // namespace detail

/// |E + F|_delta: the delta-covering number of the Minkowski sum, computed
/// from the exact sumset of half-open cells. Both sets must be at
/// resolution >= delta.
inline int64_t minkowski_cover(const CubeSet& E, const CubeSet& F, Real delta,
                               int64_t budget = default_work_budget()) {
    int k = level_of_delta(delta);
    if (E.level() < k || F.level() < k)
        throw std::domain_error("minkowski_cover: sets coarser than delta");
    if (E.empty() || F.empty()) return 0;
    if (E.size() * F.size() > budget)
        throw budget_error("minkowski_cover: |E|*|F| exceeds the work budget");

    const int L = std::max(E.level(), F.level());
    const int64_t se = int64_t(1) << (L - E.level());
    const int64_t sf = int64_t(1) << (L - F.level());
    const int64_t span = se + sf; // level-L cells covered per axis by one sum box

    auto bounds = [](const CubeSet& s, int64_t scale, int64_t& xa, int64_t& xb, int64_t& ya,
                     int64_t& yb) {
        xa = ya = std::numeric_limits<int64_t>::max();
        xb = yb = std::numeric_limits<int64_t>::min();
        for (Cell c : s.cells()) {
            xa = std::min(xa, c.x * scale);
            xb = std::max(xb, c.x * scale);
            ya = std::min(ya, c.y * scale);
            yb = std::max(yb, c.y * scale);
        }
    };
    int64_t exa, exb, eya, eyb, fxa, fxb, fya, fyb;
    bounds(E, se, exa, exb, eya, eyb);
    bounds(F, sf, fxa, fxb, fya, fyb);
    int64_t x0 = exa + fxa, y0 = eya + fya;
    int64_t w = (exb + fxb + span) - x0, h = (eyb + fyb + span) - y0;
    if (w * h > int64_t(4e9))
        throw budget_error("minkowski_cover: sum bitmap exceeds the memory budget");

    detail::Bitmap bm(x0, y0, w, h);
    for (Cell e : E.cells()) {
        int64_t ex = e.x * se, ey = e.y * se;
        for (Cell f : F.cells()) {
            int64_t X = ex + f.x * sf, Y = ey + f.y * sf;
            for (int64_t dy = 0; dy < span; ++dy) bm.mark_run(Y + dy, X, X + span - 1);
        }
    }
    // Count distinct level-k ancestors of the marked level-L cells.
    const int shift = L - k;
    std::vector<uint64_t> keys;
    bm.for_each_set([&](int64_t x, int64_t y) {
        keys.push_back(cell_key({x >> shift, y >> shift}));
    });
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return int64_t(keys.size());
}

/// Uniform grid-hash index over one CubeSet; all queries are read-only.
class CubeIndex {
  public:
    explicit CubeIndex(const CubeSet& s) : set_(&s) {
        keys_.reserve(size_t(s.size()) * 2);
        for (Cell c : s.cells()) keys_.insert(cell_key(c));
    }

    int level() const { return set_->level(); }
    bool contains(Cell c) const { return keys_.count(cell_key(c)) > 0; }

    /// All member cubes meeting the closed ball B(center, r).
    CubeSet ball_query(Point center, Real r) const {
        const Real d = set_->delta();
        std::vector<Cell> out;
        int64_t rows = int64_t(r / d) + 2;
        int64_t iy0 = int64_t(std::floor((center.y - r) / d)) - 1;
        int64_t iy1 = int64_t(std::floor((center.y + r) / d)) + 1;
        int64_t candidates = (iy1 - iy0 + 1) * (2 * rows + 2);
        if (candidates > set_->size() * 4) {
            // Sparse set: linear scan is cheaper and exact either way.
            for (Cell c : set_->cells())
                if (DyadicCube{set_->level(), c}.rect().distance(center) <= r)
                    out.push_back(c);
            return CubeSet(set_->level(), std::move(out));
        }
        for (int64_t iy = iy0; iy <= iy1; ++iy) {
            int64_t ix0 = int64_t(std::floor((center.x - r) / d)) - 1;
            int64_t ix1 = int64_t(std::floor((center.x + r) / d)) + 1;
            for (int64_t ix = ix0; ix <= ix1; ++ix) {
                Cell c{ix, iy};
                if (!contains(c)) continue;
                if (DyadicCube{set_->level(), c}.rect().distance(center) <= r)
                    out.push_back(c);
            }
        }
        return CubeSet(set_->level(), std::move(out));
    }

  private:
    const CubeSet* set_;
    std::unordered_set<uint64_t, CellKeyHash> keys_;
};

} // namespace flab
