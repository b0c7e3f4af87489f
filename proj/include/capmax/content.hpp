#ifndef CAPMAX_CONTENT_HPP
#define CAPMAX_CONTENT_HPP

// Exact dyadic Hausdorff content of leaf-cell sets.
//
// For a cell set E and exponent delta in (0, n], the dyadic content is the
// minimum of sum side(Q_i)^delta over all covers of E by dyadic cubes inside
// the root. On the dyadic tree this is the recursion
//
//   value(Q) = 0                          if Q does not meet E
//   value(Q) = side(Q)^delta              if Q is a leaf cell of E
//   value(Q) = min(side(Q)^delta, sum over children of value)
//
// which is exact: refining below the leaf level never pays because
// 2^(n - delta) >= 1, and cubes larger than the root never pay because
// side^delta is increasing. Each tree node is visited at most once and empty
// subtrees are pruned with an O(1) range count.

#include "capmax/dyadic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace capmax {

struct ContentParams {
    int n = 1;
    double delta = 1.0;

    ContentParams() = default;
    ContentParams(int n_, double delta_) : n(n_), delta(delta_) {
        if (n < 1 || n > kMaxDim) throw std::invalid_argument("ContentParams: bad dimension");
        if (!(delta > 0.0) || delta > double(n) || !std::isfinite(delta))
            throw std::invalid_argument("ContentParams: delta must lie in (0, n]");
    }
};

namespace detail {

// side(level)^delta for level = 0..depth, computed once per evaluation.
inline std::vector<double> level_costs(const GridSpec& spec, double delta) {
    std::vector<double> c(std::size_t(spec.depth) + 1);
    for (int l = 0; l <= spec.depth; ++l) c[std::size_t(l)] = std::pow(spec.side_at_level(l), delta);
    return c;
}

inline double content_node(const CellSet& E, const std::vector<double>& cost, int n, int depth,
                           int level, std::uint64_t lo) {
    const int shift = n * (depth - level);
    const std::uint64_t span = std::uint64_t{1} << shift;
    const std::uint64_t occupied = E.count(lo, lo + span);
    if (occupied == 0) return 0.0;
    if (level == depth) return cost[std::size_t(level)];
    const std::uint64_t child_span = span >> n;
    double children = 0.0;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k)
        children += content_node(E, cost, n, depth, level + 1, lo + k * child_span);
    return std::min(cost[std::size_t(level)], children);
}

inline void cover_node(const CellSet& E, const std::vector<double>& cost, const GridSpec& spec,
                       const DyadicCube& q, std::vector<DyadicCube>& out) {
    auto [lo, span] = cell_range(spec, q);
    if (E.count(lo, lo + span) == 0) return;
    if (q.level == spec.depth) {
        out.push_back(q);
        return;
    }
    double children = 0.0;
    for (std::uint32_t k = 0; k < (1u << spec.n); ++k) {
        const DyadicCube c = child(spec, q, k);
        auto [clo, cspan] = cell_range(spec, c);
        children += content_node(E, cost, spec.n, spec.depth, c.level, clo);
        (void)cspan;
    }
    // Tie goes to the children: deeper covers are preferred.
    if (children <= cost[std::size_t(q.level)]) {
        for (std::uint32_t k = 0; k < (1u << spec.n); ++k) cover_node(E, cost, spec, child(spec, q, k), out);
    } else {
        out.push_back(q);
    }
}

} // namespace detail

inline void check_params(const CellSet& E, const ContentParams& params) {
    if (params.n != E.spec().n) throw std::invalid_argument("content: mismatched dimension");
    ContentParams(params.n, params.delta); // re-validate range
}

inline double dyadic_content(const CellSet& E, const ContentParams& params) {
    check_params(E, params);
    if (!E.any()) return 0.0;
    const auto cost = detail::level_costs(E.spec(), params.delta);
    return detail::content_node(E, cost, E.spec().n, E.spec().depth, 0, 0);
}

inline double dyadic_content(const CellSet& E, double delta) {
    return dyadic_content(E, ContentParams(E.spec().n, delta));
}

// One cover attaining the minimum, as non-overlapping dyadic cubes.
inline std::vector<DyadicCube> optimal_cover(const CellSet& E, double delta) {
    ContentParams params(E.spec().n, delta);
    std::vector<DyadicCube> out;
    if (!E.any()) return out;
    const auto cost = detail::level_costs(E.spec(), delta);
    detail::cover_node(E, cost, E.spec(), DyadicCube{}, out);
    return out;
}

namespace detail {

inline std::uint64_t occupied_nodes(const CellSet& E, int n, int depth, int level, std::uint64_t lo) {
    const std::uint64_t span = std::uint64_t{1} << (n * (depth - level));
    if (E.count(lo, lo + span) == 0) return 0;
    if (level == depth) return 1;
    std::uint64_t total = 1;
    const std::uint64_t child_span = span >> n;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k)
        total += occupied_nodes(E, n, depth, level + 1, lo + k * child_span);
    return total;
}

// Plain recursion straight from the cover definition: either take this cube
// or cover each child separately. No memoization, no precomputed powers.
inline double brute_node(const CellSet& E, const GridSpec& spec, double delta, int level,
                         std::uint64_t lo) {
    const std::uint64_t span = std::uint64_t{1} << (spec.n * (spec.depth - level));
    if (E.count(lo, lo + span) == 0) return 0.0;
    const double own = std::pow(spec.side_at_level(level), delta);
    if (level == spec.depth) return own;
    double split = 0.0;
    const std::uint64_t child_span = span >> spec.n;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << spec.n); ++k)
        split += brute_node(E, spec, delta, level + 1, lo + k * child_span);
    return std::min(own, split);
}

} // namespace detail

// Exhaustive-cover oracle for cross-checking dyadic_content on small grids.
inline double brute_force_content(const CellSet& E, const ContentParams& params,
                                  std::uint64_t node_budget = std::uint64_t{1} << 15) {
    check_params(E, params);
    if (!E.any()) return 0.0;
    if (detail::occupied_nodes(E, E.spec().n, E.spec().depth, 0, 0) > node_budget)
        throw std::runtime_error("brute_force_content: size bound exceeded");
    return detail::brute_node(E, E.spec(), params.delta, 0, 0);
}

inline double brute_force_content(const CellSet& E, double delta,
                                  std::uint64_t node_budget = std::uint64_t{1} << 15) {
    return brute_force_content(E, ContentParams(E.spec().n, delta), node_budget);
}

// Cell set of the slab [0, root_side)^k x [0, t) x ... with thickness
// t = root_side * 2^-thickness_log2 in every remaining axis.
inline CellSet slab_cells(const GridSpec& spec, int base_dim, int thickness_log2) {
    if (base_dim < 1 || base_dim >= spec.n)
        throw std::invalid_argument("slab: base dimension must satisfy 1 <= k < n");
    if (thickness_log2 < 0 || thickness_log2 > spec.depth)
        throw std::invalid_argument("slab: thickness is not resolvable on this grid");
    const std::uint32_t limit = spec.cells_per_axis() >> thickness_log2;
    return CellSet::from_predicate(spec, [&](std::uint64_t i) {
        const auto c = cell_coords(spec, i);
        for (int a = base_dim; a < spec.n; ++a)
            if (c[std::size_t(a)] >= limit) return false;
        return true;
    });
}

// Content of a k-dimensional slab of thickness 2^-j: equals root_side^delta
// for delta <= k, and shrinks with the thickness for delta > k.
inline double slab_content_diagnostic(const GridSpec& spec, int base_dim, int thickness_log2,
                                      double delta) {
    return dyadic_content(slab_cells(spec, base_dim, thickness_log2), delta);
}

// Cover by arbitrary grid-aligned cubes, greedy by coverage per cost, capped
// by the optimal dyadic cover. Upper bound for the unrestricted content,
// used to report how far the dyadic value overshoots it.
inline double allgrid_cover_upper_bound(const CellSet& E, double delta,
                                        const CubeFamilyPolicy& policy = {FamilyKind::all_grid_cubes}) {
    ContentParams params(E.spec().n, delta);
    (void)params;
    if (!E.any()) return 0.0;
    const GridSpec& spec = E.spec();
    auto cubes = enumerate_cubes(spec, policy);
    CellSet rest = E;
    double total = 0.0;
    while (rest.any()) {
        double best_score = 0.0;
        std::size_t best = cubes.size();
        double best_cost = 0.0;
        for (std::size_t i = 0; i < cubes.size(); ++i) {
            const CellSet cells = cells_in_cube(spec, cubes[i]);
            const std::uint64_t covered = cells.set_intersection(rest).count();
            if (covered == 0) continue;
            const double cost = std::pow(side(spec, cubes[i]), delta);
            const double score = double(covered) / cost;
            if (best == cubes.size() || score > best_score) {
                best = i;
                best_score = score;
                best_cost = cost;
            }
        }
        total += best_cost;
        rest = rest.set_difference(cells_in_cube(spec, cubes[best]));
    }
    return std::min(total, dyadic_content(E, delta));
}

} // namespace capmax

#endif
