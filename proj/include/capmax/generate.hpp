#ifndef CAPMAX_GENERATE_HPP
#define CAPMAX_GENERATE_HPP

// Dataset generators: power weights sampled at cell centers, the paired
// step-function constructions used by the verification harness, and seeded
// random step functions / cell sets / dyadic families.

#include "capmax/dyadic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace capmax {

// w(x) = |x|^alpha at cell centers, |x| the Euclidean distance from the
// grid origin. The cell touching the origin uses its (positive) center.
inline GridFunction power_weight(const GridSpec& spec, double alpha) {
    std::vector<double> v(spec.cell_count());
    for (std::uint64_t i = 0; i < v.size(); ++i) {
        const auto x = cell_center(spec, i);
        double r2 = 0.0;
        for (int a = 0; a < spec.n; ++a) {
            const double d = x[std::size_t(a)] - spec.root_origin[std::size_t(a)];
            r2 += d * d;
        }
        v[i] = std::pow(std::sqrt(r2), alpha);
    }
    return GridFunction(spec, std::move(v));
}

struct FunctionPair {
    GridFunction f;
    GridFunction w;
};

// Unit cube divided into m^n congruent subcubes E_k (row-major order of the
// m-grid), f = sum 2^(k-1) 1_{E_k} and w = sum 2^-(k-1) 1_{E_k}, so that
// f * w == 1 cell-wise.
inline FunctionPair counterexample1_pair(const GridSpec& spec, std::uint32_t m) {
    if (m == 0 || (m & (m - 1)) != 0) throw std::invalid_argument("counterexample1: m must be a power of two");
    const std::uint32_t cells = spec.cells_per_axis();
    if (m > cells) throw std::invalid_argument("counterexample1: m exceeds grid resolution");
    const std::uint32_t per = cells / m;
    std::vector<double> f(spec.cell_count()), w(spec.cell_count());
    for (std::uint64_t i = 0; i < f.size(); ++i) {
        const auto c = cell_coords(spec, i);
        std::uint64_t k = 0; // row-major index of the containing m-subcube
        for (int a = 0; a < spec.n; ++a) k = k * m + c[std::size_t(a)] / per;
        f[i] = std::ldexp(1.0, int(k));
        w[i] = std::ldexp(1.0, -int(k));
    }
    return {GridFunction(spec, std::move(f)), GridFunction(spec, std::move(w))};
}

// Horizontal slabs of thickness 2^-k stacked along the last axis,
// f = 2^k and w = 2^-k on the k-th slab (k = 1..K); the leftover sliver at
// the top keeps w = 2^-K and f = 0.
inline FunctionPair counterexample3_pair(const GridSpec& spec, int K) {
    if (spec.n < 2) throw std::invalid_argument("counterexample3: needs n >= 2");
    if (K < 1 || K > spec.depth)
        throw std::invalid_argument("counterexample3: slab thickness not resolvable");
    const std::uint32_t cells = spec.cells_per_axis();
    std::vector<double> f(spec.cell_count()), w(spec.cell_count());
    for (std::uint64_t i = 0; i < f.size(); ++i) {
        const auto c = cell_coords(spec, i);
        const std::uint32_t y = c[std::size_t(spec.n - 1)];
        // slab k spans y in [cells - cells/2^(k-1), cells - cells/2^k)
        int k = 1;
        std::uint32_t hi = cells / 2;
        while (k < K && y >= hi) {
            hi += (cells - hi) / 2;
            ++k;
        }
        if (y < hi) {
            f[i] = std::ldexp(1.0, k);
            w[i] = std::ldexp(1.0, -k);
        } else { // residual sliver above the last resolved slab
            f[i] = 0.0;
            w[i] = std::ldexp(1.0, -K);
        }
    }
    return {GridFunction(spec, std::move(f)), GridFunction(spec, std::move(w))};
}

// Cell set of the k-th slab of the construction above.
inline CellSet counterexample3_slab(const GridSpec& spec, int k) {
    const std::uint32_t cells = spec.cells_per_axis();
    const std::uint32_t lo = cells - (cells >> (k - 1));
    const std::uint32_t hi = cells - (cells >> k);
    return CellSet::from_predicate(spec, [&](std::uint64_t i) {
        const std::uint32_t y = cell_coords(spec, i)[std::size_t(spec.n - 1)];
        return y >= lo && y < hi;
    });
}

// Random step function with values 2^j on a seeded grid; levels controls the
// dynamic range. zero_fraction of the cells vanish.
inline GridFunction random_step_function(const GridSpec& spec, std::uint64_t seed, int levels = 4,
                                         double zero_fraction = 0.25) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, levels - 1);
    std::vector<double> v(spec.cell_count());
    for (auto& x : v) x = (u(rng) < zero_fraction) ? 0.0 : std::ldexp(1.0, pick(rng) - levels / 2);
    return GridFunction(spec, std::move(v));
}

inline GridFunction random_weight(const GridSpec& spec, std::uint64_t seed, int levels = 4) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, levels - 1);
    std::vector<double> v(spec.cell_count());
    for (auto& x : v) x = std::ldexp(1.0, pick(rng) - levels / 2);
    return GridFunction(spec, std::move(v));
}

// Positive weight taking two random dyadic values on a random cell split.
inline GridFunction random_two_level_weight(const GridSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double a = std::ldexp(1.0, int(rng() % 5) - 2);
    double b = std::ldexp(1.0, int(rng() % 5) - 2);
    if (a == b) b *= 2.0;
    std::vector<double> v(spec.cell_count());
    for (auto& x : v) x = (rng() & 1) ? a : b;
    return GridFunction(spec, std::move(v));
}

inline CellSet random_cell_set(const GridSpec& spec, std::uint64_t seed, double density = 0.4,
                               bool ensure_nonempty = true) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::uint64_t> idx;
    for (std::uint64_t i = 0; i < spec.cell_count(); ++i)
        if (u(rng) < density) idx.push_back(i);
    if (idx.empty() && ensure_nonempty) idx.push_back(rng() % spec.cell_count());
    return CellSet::from_indices(spec, idx);
}

// Random antichain of dyadic cubes: descend from the root, stopping at each
// node with probability stop_p (or at the leaf level), keeping each stopped
// cube with probability keep_p.
inline std::vector<DyadicCube> random_dyadic_antichain(const GridSpec& spec, std::uint64_t seed,
                                                       double stop_p = 0.35, double keep_p = 0.7) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<DyadicCube> out;
    std::vector<DyadicCube> stack{DyadicCube{}};
    while (!stack.empty()) {
        DyadicCube q = stack.back();
        stack.pop_back();
        if (q.level == spec.depth || u(rng) < stop_p) {
            if (u(rng) < keep_p) out.push_back(q);
        } else {
            for (std::uint32_t k = 0; k < (1u << spec.n); ++k) stack.push_back(child(spec, q, k));
        }
    }
    return out;
}

} // namespace capmax

#endif
