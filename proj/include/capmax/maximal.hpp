#ifndef CAPMAX_MAXIMAL_HPP
#define CAPMAX_MAXIMAL_HPP

// Capacitary Hardy-Littlewood maximal operators on dyadic grids. Per leaf
// cell x the output is the max over family cubes Q containing x of the
// capacity-normalized Choquet average
//
//   avg_C(f, Q) = choquet_integral(f, Q, C) / C(Q).
//
// The supremum over all cubes is discretized by the configured cube family;
// the dyadic family gives the exact dyadic maximal operator, the all-grid
// family a lower bound of the full one that is exact for grid-resolvable
// data. The classical operator is the same computation with volume averages.

#include "capmax/choquet.hpp"
#include "capmax/dyadic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace capmax {

struct MaximalConfig {
    Capacity capacity;
    CubeFamilyPolicy family{};
};

namespace detail {

inline void guard_family(const GridSpec& spec, const CubeFamilyPolicy& policy) {
    if (policy.kind == FamilyKind::all_grid_cubes && spec.n == 3 && spec.depth > 5)
        throw std::invalid_argument("all-grid-cube family refused for n=3 with depth > 5");
}

template <typename AverageFn>
GridFunction cube_family_max(const GridSpec& spec, const CubeFamilyPolicy& policy, AverageFn&& avg) {
    guard_family(spec, policy);
    const auto cubes = enumerate_cubes(spec, policy);
    std::vector<double> out(spec.cell_count(), 0.0);
    for (const Cube& c : cubes) {
        const double a = avg(c);
        std::array<std::uint32_t, kMaxDim> p{0, 0, 0};
        while (true) {
            std::array<std::uint32_t, kMaxDim> q{0, 0, 0};
            for (int ax = 0; ax < spec.n; ++ax) q[std::size_t(ax)] = c.lo[std::size_t(ax)] + p[std::size_t(ax)];
            const std::uint64_t i = cell_index(spec, q);
            if (a > out[i]) out[i] = a;
            int ax = 0;
            for (; ax < spec.n; ++ax) {
                if (++p[std::size_t(ax)] < c.size) break;
                p[std::size_t(ax)] = 0;
            }
            if (ax == spec.n) break;
        }
    }
    return GridFunction(spec, std::move(out));
}

} // namespace detail

inline GridFunction maximal(const GridFunction& f, const MaximalConfig& cfg) {
    const GridSpec& spec = f.spec();
    return detail::cube_family_max(spec, cfg.family, [&](const Cube& c) {
        const CellSet cells = cells_in_cube(spec, c);
        const double denom = cfg.capacity(cells);
        if (!(denom > 0.0))
            throw std::domain_error("maximal: family cube with zero capacity");
        return choquet_integral(f, cells, cfg.capacity) / denom;
    });
}

inline GridFunction maximal(const GridFunction& f, double delta,
                            const CubeFamilyPolicy& family = {}) {
    return maximal(f, MaximalConfig{Capacity::content(f.spec().n, delta), family});
}

// Volume-averaged (classical) maximal operator.
inline GridFunction lebesgue_maximal(const GridFunction& f, const CubeFamilyPolicy& family = {}) {
    const GridSpec& spec = f.spec();
    return detail::cube_family_max(spec, family, [&](const Cube& c) {
        const CellSet cells = cells_in_cube(spec, c);
        double sum = 0.0;
        for (std::uint64_t i : cells.indices()) sum += f[i];
        return sum / double(cell_count(spec, c));
    });
}

struct EmbeddingReport {
    double max_ratio = 0.0; // max over cells of lhs / rhs
    bool holds = true;
};

// Pointwise comparison  [M(|f|^{n/delta})]^{delta/n} <= (n/delta)^{delta/n} M_C f
// between the volume-averaged and content-averaged maximal functions, both
// over the same cube family.
inline EmbeddingReport compare_embedding(const GridFunction& f, double delta,
                                         const CubeFamilyPolicy& family = {},
                                         double rel_slack = 1e-9) {
    const GridSpec& spec = f.spec();
    const double q = double(spec.n) / delta;
    const GridFunction lhs_raw = lebesgue_maximal(f.pow(q), family);
    const GridFunction rhs_raw = maximal(f, delta, family);
    const double factor = std::pow(q, 1.0 / q);
    EmbeddingReport rep;
    for (std::uint64_t i = 0; i < f.size(); ++i) {
        const double lhs = std::pow(lhs_raw[i], 1.0 / q);
        const double rhs = factor * rhs_raw[i];
        if (rhs == 0.0) {
            if (lhs > 0.0) rep.holds = false;
            continue;
        }
        const double ratio = lhs / rhs;
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (ratio > 1.0 + rel_slack) rep.holds = false;
    }
    return rep;
}

} // namespace capmax

#endif
