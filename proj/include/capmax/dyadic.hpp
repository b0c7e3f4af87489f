#ifndef CAPMAX_DYADIC_HPP
#define CAPMAX_DYADIC_HPP

// Dyadic grids on the unit-like root cube: cube arithmetic, leaf-cell sets,
// step functions and the cube families used to discretize suprema over cubes.
//
// Leaf cells are half-open boxes [a, b) so the 2^(n*depth) cells partition the
// root exactly. Internally cells are addressed by Morton (bit-interleaved)
// index, which makes every dyadic cube a contiguous index range; row-major
// order appears only at the serialization boundary.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace capmax {

inline constexpr int kMaxDim = 3;
inline constexpr int kMaxDepth = 12;

struct GridSpec {
    int n = 1;
    int depth = 0;
    std::array<double, kMaxDim> root_origin{0.0, 0.0, 0.0};
    double root_side = 1.0;

    GridSpec() = default;
    GridSpec(int n_, int depth_, std::array<double, kMaxDim> origin = {0.0, 0.0, 0.0},
             double side = 1.0)
        : n(n_), depth(depth_), root_origin(origin), root_side(side) {
        validate();
    }

    void validate() const {
        if (n < 1 || n > kMaxDim)
            throw std::invalid_argument("GridSpec: dimension must be in [1, 3]");
        if (depth < 0 || depth > kMaxDepth)
            throw std::invalid_argument("GridSpec: depth must be in [0, 12]");
        if (!(root_side > 0.0) || !std::isfinite(root_side))
            throw std::invalid_argument("GridSpec: root_side must be positive and finite");
    }

    std::uint32_t cells_per_axis() const { return 1u << depth; }
    std::uint64_t cell_count() const { return std::uint64_t{1} << (n * depth); }
    double leaf_side() const { return root_side / double(cells_per_axis()); }
    double side_at_level(int level) const { return root_side * std::ldexp(1.0, -level); }

    bool same_grid(const GridSpec& other) const {
        if (n != other.n || depth != other.depth || root_side != other.root_side) return false;
        for (int a = 0; a < n; ++a)
            if (root_origin[std::size_t(a)] != other.root_origin[std::size_t(a)]) return false;
        return true;
    }
};

namespace detail {

// Interleave per-axis coordinates into a Morton index, axis 0 in the least
// significant bit of each group.
inline std::uint64_t morton_encode(const GridSpec& spec, const std::array<std::uint32_t, kMaxDim>& c) {
    std::uint64_t idx = 0;
    for (int b = spec.depth - 1; b >= 0; --b)
        for (int a = spec.n - 1; a >= 0; --a)
            idx = (idx << 1) | ((c[std::size_t(a)] >> b) & 1u);
    return idx;
}

inline std::array<std::uint32_t, kMaxDim> morton_decode(const GridSpec& spec, std::uint64_t idx) {
    std::array<std::uint32_t, kMaxDim> c{0, 0, 0};
    for (int b = 0; b < spec.depth; ++b)
        for (int a = 0; a < spec.n; ++a) {
            c[std::size_t(a)] |= std::uint32_t(idx & 1u) << b;
            idx >>= 1;
        }
    return c;
}

} // namespace detail

inline std::uint64_t cell_index(const GridSpec& spec, const std::array<std::uint32_t, kMaxDim>& coords) {
    return detail::morton_encode(spec, coords);
}

inline std::array<std::uint32_t, kMaxDim> cell_coords(const GridSpec& spec, std::uint64_t index) {
    return detail::morton_decode(spec, index);
}

// Row-major layout (axis 0 slowest) used by the on-disk formats.
inline std::uint64_t row_major_index(const GridSpec& spec, const std::array<std::uint32_t, kMaxDim>& c) {
    std::uint64_t idx = 0;
    for (int a = 0; a < spec.n; ++a) idx = (idx << spec.depth) | c[std::size_t(a)];
    return idx;
}

inline std::array<std::uint32_t, kMaxDim> row_major_coords(const GridSpec& spec, std::uint64_t idx) {
    std::array<std::uint32_t, kMaxDim> c{0, 0, 0};
    const std::uint64_t mask = spec.cells_per_axis() - 1;
    for (int a = spec.n - 1; a >= 0; --a) {
        c[std::size_t(a)] = std::uint32_t(idx & mask);
        idx >>= spec.depth;
    }
    return c;
}

inline std::array<double, kMaxDim> cell_center(const GridSpec& spec, std::uint64_t index) {
    auto c = cell_coords(spec, index);
    std::array<double, kMaxDim> x{0.0, 0.0, 0.0};
    const double h = spec.leaf_side();
    for (int a = 0; a < spec.n; ++a)
        x[std::size_t(a)] = spec.root_origin[std::size_t(a)] + (double(c[std::size_t(a)]) + 0.5) * h;
    return x;
}

// Node of the 2^n-ary dyadic tree. level 0 is the root.
struct DyadicCube {
    int level = 0;
    std::array<std::uint32_t, kMaxDim> coords{0, 0, 0};

    friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

inline double side(const GridSpec& spec, const DyadicCube& q) { return spec.side_at_level(q.level); }

inline void validate_cube(const GridSpec& spec, const DyadicCube& q) {
    if (q.level < 0 || q.level > spec.depth)
        throw std::invalid_argument("DyadicCube: level outside grid");
    for (int a = 0; a < spec.n; ++a)
        if (q.coords[std::size_t(a)] >= (1u << q.level))
            throw std::invalid_argument("DyadicCube: coords outside root");
}

// Contiguous Morton range [first, first + count) of the cube's leaf cells.
inline std::pair<std::uint64_t, std::uint64_t> cell_range(const GridSpec& spec, const DyadicCube& q) {
    validate_cube(spec, q);
    const int shift = spec.n * (spec.depth - q.level);
    std::uint64_t base = 0;
    for (int b = q.level - 1; b >= 0; --b)
        for (int a = spec.n - 1; a >= 0; --a)
            base = (base << 1) | ((q.coords[std::size_t(a)] >> b) & 1u);
    return {base << shift, std::uint64_t{1} << shift};
}

inline DyadicCube parent(const DyadicCube& q) {
    if (q.level == 0) throw std::invalid_argument("root cube has no parent");
    DyadicCube p;
    p.level = q.level - 1;
    for (int a = 0; a < kMaxDim; ++a) p.coords[std::size_t(a)] = q.coords[std::size_t(a)] >> 1;
    return p;
}

inline DyadicCube child(const GridSpec& spec, const DyadicCube& q, std::uint32_t which) {
    DyadicCube c;
    c.level = q.level + 1;
    for (int a = 0; a < spec.n; ++a)
        c.coords[std::size_t(a)] = (q.coords[std::size_t(a)] << 1) | ((which >> a) & 1u);
    return c;
}

// Axis-aligned cube with grid-aligned corners, in leaf units. Covers dyadic
// cubes, their half-side translates and arbitrary k*leaf_side cubes alike.
struct Cube {
    std::array<std::uint32_t, kMaxDim> lo{0, 0, 0};
    std::uint32_t size = 1; // edge length in leaf cells

    friend bool operator==(const Cube&, const Cube&) = default;
};

inline Cube to_cube(const GridSpec& spec, const DyadicCube& q) {
    validate_cube(spec, q);
    Cube c;
    c.size = 1u << (spec.depth - q.level);
    for (int a = 0; a < spec.n; ++a) c.lo[std::size_t(a)] = q.coords[std::size_t(a)] * c.size;
    return c;
}

inline bool is_dyadic(const GridSpec& spec, const Cube& c) {
    if (!std::has_single_bit(c.size)) return false;
    for (int a = 0; a < spec.n; ++a)
        if (c.lo[std::size_t(a)] % c.size != 0) return false;
    (void)spec;
    return true;
}

inline DyadicCube to_dyadic(const GridSpec& spec, const Cube& c) {
    if (!is_dyadic(spec, c)) throw std::invalid_argument("cube is not dyadic");
    DyadicCube q;
    q.level = spec.depth - std::countr_zero(c.size);
    for (int a = 0; a < spec.n; ++a) q.coords[std::size_t(a)] = c.lo[std::size_t(a)] / c.size;
    return q;
}

inline void validate_cube(const GridSpec& spec, const Cube& c) {
    if (c.size == 0) throw std::invalid_argument("Cube: size must be positive");
    for (int a = 0; a < spec.n; ++a)
        if (std::uint64_t(c.lo[std::size_t(a)]) + c.size > spec.cells_per_axis())
            throw std::invalid_argument("Cube: outside root");
}

inline double side(const GridSpec& spec, const Cube& c) { return double(c.size) * spec.leaf_side(); }

inline std::uint64_t cell_count(const GridSpec& spec, const Cube& c) {
    std::uint64_t m = 1;
    for (int a = 0; a < spec.n; ++a) m *= c.size;
    (void)spec;
    return m;
}

// Subset of leaf cells. Immutable once built. Storage covers only the word
// window that can hold bits, so a set concentrated in one dyadic cube costs
// memory proportional to the cube, not to the grid; count queries over
// Morton ranges are O(1) via a prefix table over the window.
class CellSet {
public:
    CellSet() = default;

    static CellSet empty_set(const GridSpec& spec) {
        CellSet s;
        s.spec_ = spec;
        s.finalize();
        return s;
    }

    static CellSet full_set(const GridSpec& spec) {
        return from_range(spec, 0, spec.cell_count());
    }

    template <typename It>
    static CellSet from_indices(const GridSpec& spec, It first, It last) {
        CellSet s;
        s.spec_ = spec;
        std::uint64_t lo = ~std::uint64_t{0}, hi = 0;
        for (It it = first; it != last; ++it) {
            const std::uint64_t i = std::uint64_t(*it);
            if (i >= spec.cell_count()) throw std::invalid_argument("CellSet: index out of range");
            lo = std::min(lo, i);
            hi = std::max(hi, i + 1);
        }
        if (hi > 0) {
            s.win_lo_ = lo >> 6;
            s.win_hi_ = ((hi - 1) >> 6) + 1;
            s.words_.assign(s.win_hi_ - s.win_lo_, 0);
            for (It it = first; it != last; ++it) {
                const std::uint64_t i = std::uint64_t(*it);
                s.words_[(i >> 6) - s.win_lo_] |= std::uint64_t{1} << (i & 63);
            }
        }
        s.finalize();
        return s;
    }

    static CellSet from_indices(const GridSpec& spec, const std::vector<std::uint64_t>& idx) {
        return from_indices(spec, idx.begin(), idx.end());
    }

    // Contiguous Morton range [lo, lo + count), e.g. the cells of a dyadic cube.
    static CellSet from_range(const GridSpec& spec, std::uint64_t lo, std::uint64_t count) {
        if (lo + count > spec.cell_count()) throw std::invalid_argument("CellSet: range out of grid");
        CellSet s;
        s.spec_ = spec;
        if (count > 0) {
            s.win_lo_ = lo >> 6;
            s.win_hi_ = ((lo + count - 1) >> 6) + 1;
            s.words_.assign(s.win_hi_ - s.win_lo_, 0);
            for (std::uint64_t i = lo; i < lo + count;) {
                if ((i & 63) == 0 && i + 64 <= lo + count) {
                    s.words_[(i >> 6) - s.win_lo_] = ~std::uint64_t{0};
                    i += 64;
                } else {
                    s.words_[(i >> 6) - s.win_lo_] |= std::uint64_t{1} << (i & 63);
                    ++i;
                }
            }
        }
        s.finalize();
        return s;
    }

    // Build from a predicate over Morton cell indices.
    static CellSet from_predicate(const GridSpec& spec, const std::function<bool(std::uint64_t)>& pred) {
        CellSet s;
        s.spec_ = spec;
        s.win_lo_ = 0;
        s.win_hi_ = (spec.cell_count() + 63) / 64;
        s.words_.assign(s.win_hi_, 0);
        const std::uint64_t m = spec.cell_count();
        for (std::uint64_t i = 0; i < m; ++i)
            if (pred(i)) s.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
        s.finalize();
        return s;
    }

    const GridSpec& spec() const { return spec_; }

    bool test(std::uint64_t i) const { return (word_at(i >> 6) >> (i & 63)) & 1u; }

    std::uint64_t count() const { return total_; }
    bool any() const { return total_ > 0; }

    // Population count of [lo, hi).
    std::uint64_t count(std::uint64_t lo, std::uint64_t hi) const {
        if (lo >= hi) return 0;
        lo = std::max(lo, win_lo_ * 64);
        hi = std::min(hi, win_hi_ * 64);
        if (lo >= hi) return 0;
        const std::uint64_t wl = lo >> 6, wh = (hi - 1) >> 6;
        if (wl == wh) {
            std::uint64_t w = words_[wl - win_lo_];
            w >>= (lo & 63);
            const std::uint64_t span = hi - lo;
            if (span < 64) w &= (std::uint64_t{1} << span) - 1;
            return std::uint64_t(std::popcount(w));
        }
        std::uint64_t total = prefix_[wh - win_lo_] - prefix_[wl - win_lo_ + 1];
        total += std::uint64_t(std::popcount(words_[wl - win_lo_] >> (lo & 63)));
        const std::uint64_t tail = hi & 63;
        std::uint64_t w = words_[wh - win_lo_];
        if (tail) w &= (std::uint64_t{1} << tail) - 1;
        total += std::uint64_t(std::popcount(w));
        return total;
    }

    std::vector<std::uint64_t> indices() const {
        std::vector<std::uint64_t> out;
        out.reserve(total_);
        for (std::uint64_t w = win_lo_; w < win_hi_; ++w) {
            std::uint64_t word = words_[w - win_lo_];
            while (word) {
                const int b = std::countr_zero(word);
                out.push_back(w * 64 + std::uint64_t(b));
                word &= word - 1;
            }
        }
        return out;
    }

    CellSet set_union(const CellSet& other) const {
        check_same(other);
        if (!any()) return other;
        if (!other.any()) return *this;
        return combine(other, std::min(win_lo_, other.win_lo_), std::max(win_hi_, other.win_hi_),
                       [](std::uint64_t a, std::uint64_t b) { return a | b; });
    }

    CellSet set_intersection(const CellSet& other) const {
        check_same(other);
        const std::uint64_t lo = std::max(win_lo_, other.win_lo_);
        const std::uint64_t hi = std::min(win_hi_, other.win_hi_);
        if (lo >= hi) return empty_set(spec_);
        return combine(other, lo, hi, [](std::uint64_t a, std::uint64_t b) { return a & b; });
    }

    CellSet set_difference(const CellSet& other) const {
        check_same(other);
        if (!any()) return *this;
        return combine(other, win_lo_, win_hi_,
                       [](std::uint64_t a, std::uint64_t b) { return a & ~b; });
    }

    // Complement within the root cube.
    CellSet complement() const {
        CellSet out;
        out.spec_ = spec_;
        out.win_lo_ = 0;
        out.win_hi_ = (spec_.cell_count() + 63) / 64;
        out.words_.assign(out.win_hi_, 0);
        const std::uint64_t m = spec_.cell_count();
        for (std::uint64_t w = 0; w < out.win_hi_; ++w) out.words_[w] = ~word_at(w);
        if (m % 64) out.words_[out.win_hi_ - 1] &= (std::uint64_t{1} << (m % 64)) - 1;
        out.finalize();
        return out;
    }

    bool is_subset_of(const CellSet& other) const {
        check_same(other);
        for (std::uint64_t w = win_lo_; w < win_hi_; ++w)
            if (words_[w - win_lo_] & ~other.word_at(w)) return false;
        return true;
    }

    friend bool operator==(const CellSet& a, const CellSet& b) {
        if (!a.spec_.same_grid(b.spec_) || a.total_ != b.total_) return false;
        const std::uint64_t lo = std::min(a.win_lo_, b.win_lo_);
        const std::uint64_t hi = std::max(a.win_hi_, b.win_hi_);
        for (std::uint64_t w = lo; w < hi; ++w)
            if (a.word_at(w) != b.word_at(w)) return false;
        return true;
    }

private:
    std::uint64_t word_at(std::uint64_t w) const {
        return (w >= win_lo_ && w < win_hi_) ? words_[w - win_lo_] : 0;
    }

    void check_same(const CellSet& other) const {
        if (!spec_.same_grid(other.spec_))
            throw std::invalid_argument("CellSet: mismatched grids");
    }

    template <typename Op>
    CellSet combine(const CellSet& other, std::uint64_t lo, std::uint64_t hi, Op op) const {
        CellSet out;
        out.spec_ = spec_;
        out.win_lo_ = lo;
        out.win_hi_ = hi;
        out.words_.assign(hi - lo, 0);
        for (std::uint64_t w = lo; w < hi; ++w) out.words_[w - lo] = op(word_at(w), other.word_at(w));
        out.finalize();
        return out;
    }

    // Shrink the window to the occupied words and build the prefix table.
    void finalize() {
        std::uint64_t first = win_hi_, last = win_lo_;
        for (std::uint64_t w = win_lo_; w < win_hi_; ++w)
            if (words_[w - win_lo_]) {
                if (first == win_hi_) first = w;
                last = w + 1;
            }
        if (first == win_hi_) { // empty
            words_.clear();
            win_lo_ = win_hi_ = 0;
        } else if (first != win_lo_ || last != win_hi_) {
            std::vector<std::uint64_t> tight(words_.begin() + std::ptrdiff_t(first - win_lo_),
                                             words_.begin() + std::ptrdiff_t(last - win_lo_));
            words_ = std::move(tight);
            win_lo_ = first;
            win_hi_ = last;
        }
        prefix_.assign(win_hi_ - win_lo_ + 1, 0);
        for (std::uint64_t w = win_lo_; w < win_hi_; ++w)
            prefix_[w - win_lo_ + 1] = prefix_[w - win_lo_] + std::uint64_t(std::popcount(words_[w - win_lo_]));
        total_ = prefix_.back();
    }

    GridSpec spec_{};
    std::vector<std::uint64_t> words_;
    std::vector<std::uint64_t> prefix_{0};
    std::uint64_t win_lo_ = 0, win_hi_ = 0; // word window [win_lo_, win_hi_)
    std::uint64_t total_ = 0;
};

// Non-negative step function, constant on leaf cells; doubles as a weight
// when strictly positive. Values are stored in Morton order.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(GridSpec spec, std::vector<double> values) : spec_(spec), v_(std::move(values)) {
        if (v_.size() != spec_.cell_count())
            throw std::invalid_argument("GridFunction: value count does not match grid");
        for (double x : v_)
            if (!(x >= 0.0) || !std::isfinite(x))
                throw std::invalid_argument("GridFunction: values must be finite and >= 0");
    }

    static GridFunction constant(const GridSpec& spec, double c) {
        return GridFunction(spec, std::vector<double>(spec.cell_count(), c));
    }

    const GridSpec& spec() const { return spec_; }
    std::uint64_t size() const { return v_.size(); }
    double operator[](std::uint64_t i) const { return v_[i]; }
    const std::vector<double>& values() const { return v_; }

    bool strictly_positive() const {
        return std::all_of(v_.begin(), v_.end(), [](double x) { return x > 0.0; });
    }

    double max_value() const { return v_.empty() ? 0.0 : *std::max_element(v_.begin(), v_.end()); }
    double min_value() const { return v_.empty() ? 0.0 : *std::min_element(v_.begin(), v_.end()); }

    GridFunction map(const std::function<double(double)>& fn) const {
        std::vector<double> out(v_.size());
        for (std::size_t i = 0; i < v_.size(); ++i) out[i] = fn(v_[i]);
        return GridFunction(spec_, std::move(out));
    }

    GridFunction pow(double e) const {
        return map([e](double x) { return x == 0.0 ? 0.0 : std::pow(x, e); });
    }

    GridFunction scaled(double c) const {
        return map([c](double x) { return c * x; });
    }

    GridFunction plus(const GridFunction& g) const {
        check_same(g);
        std::vector<double> out(v_.size());
        for (std::size_t i = 0; i < v_.size(); ++i) out[i] = v_[i] + g.v_[i];
        return GridFunction(spec_, std::move(out));
    }

    GridFunction times(const GridFunction& g) const {
        check_same(g);
        std::vector<double> out(v_.size());
        for (std::size_t i = 0; i < v_.size(); ++i) out[i] = v_[i] * g.v_[i];
        return GridFunction(spec_, std::move(out));
    }

    GridFunction restricted(const CellSet& E) const {
        if (!spec_.same_grid(E.spec())) throw std::invalid_argument("GridFunction: mismatched grids");
        std::vector<double> out(v_.size(), 0.0);
        for (std::uint64_t i = 0; i < v_.size(); ++i)
            if (E.test(i)) out[i] = v_[i];
        return GridFunction(spec_, std::move(out));
    }

    CellSet superlevel(double t) const { // {x : f(x) >= t}
        std::vector<std::uint64_t> idx;
        for (std::uint64_t i = 0; i < v_.size(); ++i)
            if (v_[i] >= t) idx.push_back(i);
        return CellSet::from_indices(spec_, idx);
    }

    CellSet support() const {
        std::vector<std::uint64_t> idx;
        for (std::uint64_t i = 0; i < v_.size(); ++i)
            if (v_[i] > 0.0) idx.push_back(i);
        return CellSet::from_indices(spec_, idx);
    }

    // Same step function re-sampled on a grid refined by `extra_levels`.
    GridFunction refined(int extra_levels) const {
        GridSpec fine(spec_.n, spec_.depth + extra_levels, spec_.root_origin, spec_.root_side);
        const int shift = spec_.n * extra_levels;
        std::vector<double> out(fine.cell_count());
        for (std::uint64_t i = 0; i < out.size(); ++i) out[i] = v_[i >> shift];
        return GridFunction(fine, std::move(out));
    }

private:
    void check_same(const GridFunction& g) const {
        if (!spec_.same_grid(g.spec_)) throw std::invalid_argument("GridFunction: mismatched grids");
    }

    GridSpec spec_{};
    std::vector<double> v_;
};

enum class FamilyKind { dyadic_only, shifted_dyadic, all_grid_cubes };

struct CubeFamilyPolicy {
    FamilyKind kind = FamilyKind::dyadic_only;
    std::uint64_t max_cubes = std::uint64_t{1} << 26;
};

inline const char* family_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::dyadic_only: return "dyadic";
        case FamilyKind::shifted_dyadic: return "shifted";
        case FamilyKind::all_grid_cubes: return "all";
    }
    return "?";
}

namespace detail {

template <typename Fn>
void for_each_dyadic_cube(const GridSpec& spec, Fn&& fn) {
    for (int level = 0; level <= spec.depth; ++level) {
        const std::uint32_t m = 1u << level;
        std::array<std::uint32_t, kMaxDim> c{0, 0, 0};
        while (true) {
            fn(DyadicCube{level, c});
            int a = 0;
            for (; a < spec.n; ++a) {
                if (++c[std::size_t(a)] < m) break;
                c[std::size_t(a)] = 0;
            }
            if (a == spec.n) break;
        }
    }
}

} // namespace detail

inline std::uint64_t dyadic_cube_count(const GridSpec& spec) {
    std::uint64_t total = 0;
    for (int level = 0; level <= spec.depth; ++level)
        total += std::uint64_t{1} << (spec.n * level);
    return total;
}

// Deterministic enumeration of the configured cube family: levels from the
// root down, row-major within a level, translates after their base cube.
inline std::vector<Cube> enumerate_cubes(const GridSpec& spec, const CubeFamilyPolicy& policy) {
    std::vector<Cube> out;
    const std::uint32_t cells = spec.cells_per_axis();
    auto push = [&](const Cube& c) {
        if (out.size() >= policy.max_cubes)
            throw std::runtime_error("enumerate_cubes: family exceeds max_cubes policy");
        out.push_back(c);
    };

    if (policy.kind == FamilyKind::all_grid_cubes) {
        for (std::uint32_t size = cells; size >= 1; --size) {
            std::array<std::uint32_t, kMaxDim> lo{0, 0, 0};
            while (true) {
                Cube c;
                c.lo = lo;
                c.size = size;
                push(c);
                int a = spec.n - 1;
                for (; a >= 0; --a) {
                    if (++lo[std::size_t(a)] + size <= cells) break;
                    lo[std::size_t(a)] = 0;
                }
                if (a < 0) break;
            }
            if (size == 1) break;
        }
        return out;
    }

    detail::for_each_dyadic_cube(spec, [&](const DyadicCube& q) {
        const Cube base = to_cube(spec, q);
        push(base);
        if (policy.kind == FamilyKind::shifted_dyadic && base.size >= 2) {
            const std::uint32_t half = base.size / 2;
            for (std::uint32_t mask = 1; mask < (1u << spec.n); ++mask) {
                Cube c = base;
                bool ok = true;
                for (int a = 0; a < spec.n; ++a)
                    if ((mask >> a) & 1u) {
                        c.lo[std::size_t(a)] += half;
                        if (c.lo[std::size_t(a)] + c.size > cells) { ok = false; break; }
                    }
                if (ok) push(c);
            }
        }
    });
    return out;
}

inline CellSet cells_in_cube(const GridSpec& spec, const Cube& c) {
    validate_cube(spec, c);
    if (is_dyadic(spec, c)) {
        auto [lo, cnt] = cell_range(spec, to_dyadic(spec, c));
        return CellSet::from_range(spec, lo, cnt);
    }
    std::vector<std::uint64_t> idx;
    idx.reserve(cell_count(spec, c));
    std::array<std::uint32_t, kMaxDim> p{0, 0, 0};
    while (true) {
        std::array<std::uint32_t, kMaxDim> q{0, 0, 0};
        for (int a = 0; a < spec.n; ++a) q[std::size_t(a)] = c.lo[std::size_t(a)] + p[std::size_t(a)];
        idx.push_back(cell_index(spec, q));
        int a = 0;
        for (; a < spec.n; ++a) {
            if (++p[std::size_t(a)] < c.size) break;
            p[std::size_t(a)] = 0;
        }
        if (a == spec.n) break;
    }
    return CellSet::from_indices(spec, idx);
}

inline CellSet cells_in_cube(const GridSpec& spec, const DyadicCube& q) {
    return cells_in_cube(spec, to_cube(spec, q));
}

} // namespace capmax

#endif
