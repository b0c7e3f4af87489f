#ifndef CAPMAX_DECOMP_HPP
#define CAPMAX_DECOMP_HPP

// Constructive coverings and stopping-time decompositions: the
// Calderon-Zygmund subdivision with content averages, the sparse covering
// iteration built on exact optimal dyadic covers, the greedy weighted
// packing subfamily, and the level-set cover that composes them.

#include "capmax/choquet.hpp"
#include "capmax/content.hpp"
#include "capmax/dyadic.hpp"

#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace capmax {

struct CubeDiagnostics {
    DyadicCube cube{};
    double content = 0.0;  // H(Q)
    double measure = 0.0;  // integral of the driving function over Q
    double average = 0.0;  // measure / content
};

struct Decomposition {
    std::vector<DyadicCube> selected; // pairwise non-overlapping
    CellSet residual;
    std::vector<CubeDiagnostics> diagnostics;
};

namespace detail {

inline double cube_average(const GridFunction& w, const GridSpec& spec, const DyadicCube& q,
                           double delta, double& content_out, double& measure_out) {
    const CellSet cells = cells_in_cube(spec, q);
    content_out = dyadic_content(cells, delta);
    measure_out = choquet_integral(w, cells, Capacity::content(spec.n, delta));
    return measure_out / content_out;
}

inline void cz_recurse(const GridFunction& w, const GridSpec& spec, const DyadicCube& q,
                       double lambda, double delta, Decomposition& out) {
    for (std::uint32_t k = 0; k < (1u << spec.n); ++k) {
        const DyadicCube c = child(spec, q, k);
        double content = 0.0, measure = 0.0;
        const double avg = cube_average(w, spec, c, delta, content, measure);
        if (avg > lambda) {
            out.selected.push_back(c);
            out.diagnostics.push_back({c, content, measure, avg});
        } else if (c.level < spec.depth) {
            cz_recurse(w, spec, c, lambda, delta, out);
        }
    }
}

} // namespace detail

// Stopping-time subdivision of Q: descend through the dyadic children and
// select a cube the first time its content average of w exceeds lambda.
// Selected cubes then satisfy lambda < avg <= 2^delta * lambda, and every
// unselected leaf cell has value <= lambda (the leaf average is the value).
inline Decomposition cz_decompose(const GridFunction& w, const DyadicCube& q, double lambda,
                                  double delta) {
    const GridSpec& spec = w.spec();
    validate_cube(spec, q);
    if (!w.strictly_positive()) throw std::invalid_argument("cz_decompose: weight must be positive");
    double content = 0.0, measure = 0.0;
    const double root_avg = detail::cube_average(w, spec, q, delta, content, measure);
    if (!(lambda > root_avg))
        throw std::invalid_argument("cz_decompose: lambda must exceed the average over Q");
    Decomposition out{.selected = {}, .residual = CellSet::empty_set(spec), .diagnostics = {}};
    if (q.level < spec.depth) detail::cz_recurse(w, spec, q, lambda, delta, out);
    CellSet covered = CellSet::empty_set(spec);
    for (const DyadicCube& s : out.selected) covered = covered.set_union(cells_in_cube(spec, s));
    out.residual = cells_in_cube(spec, q).set_difference(covered);
    return out;
}

// Sparse cover of a nonempty cell set: repeatedly take an exact optimal
// dyadic cover, keep the cubes that carry at least a third of their content
// inside E, and recurse on the part of E inside the remaining cubes. Kept
// cubes are non-overlapping across rounds; the output satisfies
//   sum H(Q_j) <= 2 H(E)  and  H(Q_j) <= 3 H(Q_j inter E)
// with E covered exactly (empty residual at grid scale).
inline Decomposition sparse_cover(const CellSet& E, double delta) {
    if (!E.any()) throw std::invalid_argument("sparse_cover: empty set");
    const GridSpec& spec = E.spec();
    Decomposition out{.selected = {}, .residual = CellSet::empty_set(spec), .diagnostics = {}};
    CellSet remaining = E;
    while (remaining.any()) {
        CellSet next = CellSet::empty_set(spec);
        for (const DyadicCube& q : optimal_cover(remaining, delta)) {
            const CellSet cells = cells_in_cube(spec, q);
            const CellSet inside = cells.set_intersection(E);
            const double hq = dyadic_content(cells, delta);
            const double hqe = dyadic_content(inside, delta);
            if (hqe == 0.0) continue; // cannot happen for covers of nonempty sets
            if (hq <= 3.0 * hqe) {
                out.selected.push_back(q);
                out.diagnostics.push_back({q, hq, hqe, hqe / hq});
            } else {
                next = next.set_union(inside);
            }
        }
        remaining = next;
    }
    return out;
}

// Greedy packing subfamily of a non-overlapping dyadic family: a cube is
// admitted iff afterwards every dyadic ancestor Q still satisfies
//   sum over admitted cubes inside Q of w_H <= 2 w_H(Q).
// Returns the indices of the admitted cubes, in input order.
inline std::vector<std::size_t> packed_subfamily(std::span<const DyadicCube> cubes,
                                                 const GridFunction& w, double delta) {
    const GridSpec& spec = w.spec();
    // reject overlapping input
    for (std::size_t i = 0; i < cubes.size(); ++i)
        for (std::size_t j = i + 1; j < cubes.size(); ++j) {
            auto [alo, acnt] = cell_range(spec, cubes[i]);
            auto [blo, bcnt] = cell_range(spec, cubes[j]);
            if (alo < blo + bcnt && blo < alo + acnt)
                throw std::invalid_argument("packed_subfamily: cubes overlap");
        }

    std::map<std::pair<int, std::uint64_t>, double> admitted_mass; // (level, range lo) -> mass
    auto whq_cache = std::map<std::pair<int, std::uint64_t>, double>{};
    auto wh = [&](const DyadicCube& q) {
        auto [lo, cnt] = cell_range(spec, q);
        (void)cnt;
        auto key = std::make_pair(q.level, lo);
        auto it = whq_cache.find(key);
        if (it != whq_cache.end()) return it->second;
        const double v = weighted_content(cells_in_cube(spec, q), w, delta);
        whq_cache.emplace(key, v);
        return v;
    };

    std::vector<std::size_t> admitted;
    for (std::size_t i = 0; i < cubes.size(); ++i) {
        const double mass = wh(cubes[i]);
        bool ok = true;
        DyadicCube a = cubes[i];
        while (a.level > 0) {
            a = parent(a);
            auto [lo, cnt] = cell_range(spec, a);
            (void)cnt;
            const double used = admitted_mass.count({a.level, lo}) ? admitted_mass[{a.level, lo}] : 0.0;
            if (used + mass > 2.0 * wh(a)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        admitted.push_back(i);
        DyadicCube b = cubes[i];
        while (b.level > 0) {
            b = parent(b);
            auto [lo, cnt] = cell_range(spec, b);
            (void)cnt;
            admitted_mass[{b.level, lo}] += mass;
        }
    }
    return admitted;
}

struct LevelSetCover {
    Decomposition decomposition;
    double covered_mass = 0.0; // sum over cubes of the integral of w
    double set_mass = 0.0;     // integral of w over E
    double ratio = 0.0;
};

// Splits E along the dyadic bands of w, sparse-covers each band and merges
// the kept cubes into one non-overlapping family (maximal cubes win).
// Reports sum_j int_{Q_j} w dH / int_E w dH.
inline LevelSetCover level_set_cover(const CellSet& E, const GridFunction& w, double delta,
                                     double p) {
    (void)p; // recorded by callers; the construction itself does not use p
    if (!E.any()) throw std::invalid_argument("level_set_cover: empty set");
    const GridSpec& spec = w.spec();
    if (!spec.same_grid(E.spec())) throw std::invalid_argument("level_set_cover: mismatched grids");
    if (!w.strictly_positive())
        throw std::invalid_argument("level_set_cover: weight must be positive");

    // dyadic bands 2^(k-1) < w <= 2^k restricted to E
    std::vector<DyadicCube> pool;
    for (int k = int(std::floor(std::log2(w.min_value()))); ; ++k) {
        const double lo = std::ldexp(1.0, k - 1), hi = std::ldexp(1.0, k);
        std::vector<std::uint64_t> idx;
        for (std::uint64_t i = 0; i < w.size(); ++i)
            if (E.test(i) && w[i] > lo && w[i] <= hi) idx.push_back(i);
        if (!idx.empty()) {
            const CellSet band = CellSet::from_indices(spec, idx);
            for (const DyadicCube& q : sparse_cover(band, delta).selected) pool.push_back(q);
        }
        if (hi >= w.max_value()) break;
    }

    // keep the maximal cubes of the pool
    LevelSetCover out{.decomposition = {{}, CellSet::empty_set(spec), {}},
                      .covered_mass = 0.0,
                      .set_mass = 0.0,
                      .ratio = 0.0};
    for (std::size_t i = 0; i < pool.size(); ++i) {
        auto [ilo, icnt] = cell_range(spec, pool[i]);
        bool maximal = true;
        for (std::size_t j = 0; j < pool.size(); ++j) {
            if (i == j) continue;
            auto [jlo, jcnt] = cell_range(spec, pool[j]);
            const bool inside_j = jlo <= ilo && ilo + icnt <= jlo + jcnt;
            if (inside_j && (jcnt > icnt || (jcnt == icnt && j < i))) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.decomposition.selected.push_back(pool[i]);
    }

    const Capacity C = Capacity::content(spec.n, delta);
    for (const DyadicCube& q : out.decomposition.selected) {
        const CellSet cells = cells_in_cube(spec, q);
        const double mass = choquet_integral(w, cells, C);
        out.covered_mass += mass;
        out.decomposition.diagnostics.push_back(
            {q, dyadic_content(cells, delta), mass, mass / dyadic_content(cells, delta)});
    }
    out.set_mass = choquet_integral(w, E, C);
    out.ratio = out.covered_mass / out.set_mass;
    return out;
}

} // namespace capmax

#endif
