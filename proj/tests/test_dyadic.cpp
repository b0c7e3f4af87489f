#include <catch2/catch_amalgamated.hpp>

#include "capmax/dyadic.hpp"

#include <random>
#include <set>

using namespace capmax;

TEST_CASE("grid spec validation") {
    CHECK_NOTHROW(GridSpec(1, 0));
    CHECK_NOTHROW(GridSpec(3, 12));
    CHECK_THROWS(GridSpec(0, 3));
    CHECK_THROWS(GridSpec(4, 3));
    CHECK_THROWS(GridSpec(2, 13));
    CHECK_THROWS(GridSpec(2, 3, {0, 0, 0}, -1.0));

    GridSpec s(2, 3);
    CHECK(s.cell_count() == 64);
    CHECK(s.cells_per_axis() == 8);
    CHECK(s.leaf_side() == Catch::Approx(1.0 / 8));
}

TEST_CASE("morton and row-major indexing round-trip") {
    std::mt19937_64 rng(1);
    for (int n = 1; n <= 3; ++n) {
        GridSpec spec(n, 4);
        std::set<std::uint64_t> seen;
        for (std::uint64_t i = 0; i < spec.cell_count(); ++i) {
            auto c = cell_coords(spec, i);
            CHECK(cell_index(spec, c) == i);
            const std::uint64_t rm = row_major_index(spec, c);
            CHECK(row_major_coords(spec, rm) == c);
            seen.insert(rm);
        }
        CHECK(seen.size() == spec.cell_count()); // bijection
    }
}

TEST_CASE("dyadic cube ranges are contiguous and nested") {
    GridSpec spec(2, 3);
    auto [rlo, rcount] = cell_range(spec, DyadicCube{0, {0, 0, 0}});
    CHECK(rlo == 0);
    CHECK(rcount == spec.cell_count());

    DyadicCube q{2, {1, 2, 0}};
    auto [lo, count] = cell_range(spec, q);
    CHECK(count == 4);
    // the children partition the parent range
    std::uint64_t sum = 0;
    for (std::uint32_t k = 0; k < 4; ++k) {
        auto [clo, ccount] = cell_range(spec, child(spec, q, k));
        CHECK(clo >= lo);
        CHECK(clo + ccount <= lo + count);
        sum += ccount;
    }
    CHECK(sum == count);
    CHECK(parent(child(spec, q, 3)) == q);
}

TEST_CASE("cell set counting over ranges") {
    GridSpec spec(2, 3);
    std::mt19937_64 rng(7);
    std::vector<std::uint64_t> idx;
    for (std::uint64_t i = 0; i < spec.cell_count(); ++i)
        if (rng() & 1) idx.push_back(i);
    CellSet s = CellSet::from_indices(spec, idx);
    CHECK(s.count() == idx.size());
    for (int trial = 0; trial < 200; ++trial) {
        std::uint64_t a = rng() % (spec.cell_count() + 1);
        std::uint64_t b = rng() % (spec.cell_count() + 1);
        if (a > b) std::swap(a, b);
        std::uint64_t expect = 0;
        for (std::uint64_t i = a; i < b; ++i)
            if (s.test(i)) ++expect;
        CHECK(s.count(a, b) == expect);
    }
}

TEST_CASE("cell set algebra") {
    GridSpec spec(1, 3);
    CellSet a = CellSet::from_indices(spec, std::vector<std::uint64_t>{0, 1, 2});
    CellSet b = CellSet::from_indices(spec, std::vector<std::uint64_t>{2, 3});
    CHECK(a.set_union(b).count() == 4);
    CHECK(a.set_intersection(b).count() == 1);
    CHECK(a.set_difference(b).count() == 2);
    CHECK(a.complement().count() == 5);
    CHECK(a.set_intersection(b).is_subset_of(a));
    CHECK_THROWS(a.set_union(CellSet::full_set(GridSpec(1, 2))));
}

TEST_CASE("family enumeration counts") {
    CHECK(enumerate_cubes(GridSpec(1, 2), {FamilyKind::dyadic_only}).size() == 7);
    CHECK(enumerate_cubes(GridSpec(1, 1), {FamilyKind::all_grid_cubes}).size() == 3);
    CHECK(enumerate_cubes(GridSpec(2, 1), {FamilyKind::dyadic_only}).size() == 5);
    // n=1, L=2, all grid cubes: sizes 1..4 -> 4+3+2+1
    CHECK(enumerate_cubes(GridSpec(1, 2), {FamilyKind::all_grid_cubes}).size() == 10);

    // shifted family contains the dyadic one
    GridSpec spec(2, 2);
    auto dy = enumerate_cubes(spec, {FamilyKind::dyadic_only});
    auto sh = enumerate_cubes(spec, {FamilyKind::shifted_dyadic});
    CHECK(sh.size() > dy.size());
    for (const Cube& c : sh) CHECK_NOTHROW(validate_cube(spec, c));

    CubeFamilyPolicy tight{FamilyKind::dyadic_only, 3};
    CHECK_THROWS(enumerate_cubes(GridSpec(1, 2), tight));
}

TEST_CASE("cells in cube") {
    GridSpec spec(1, 2);
    // grid cube [1/4, 3/4) -> cells with coords 1, 2
    Cube c{{1, 0, 0}, 2};
    CellSet s = cells_in_cube(spec, c);
    CHECK(s.count() == 2);
    CHECK(s.test(cell_index(spec, {1, 0, 0})));
    CHECK(s.test(cell_index(spec, {2, 0, 0})));

    CHECK(cells_in_cube(spec, DyadicCube{0, {0, 0, 0}}).count() == 4);
    CHECK(cells_in_cube(spec, DyadicCube{2, {3, 0, 0}}).count() == 1);
    CHECK_THROWS(cells_in_cube(spec, Cube{{3, 0, 0}, 2}));
}

TEST_CASE("nesting and partition laws") {
    // any two dyadic cubes are nested or disjoint, and children partition
    GridSpec spec(2, 3);
    auto cubes = enumerate_cubes(spec, {FamilyKind::dyadic_only});
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const Cube& a = cubes[rng() % cubes.size()];
        const Cube& b = cubes[rng() % cubes.size()];
        CellSet sa = cells_in_cube(spec, a), sb = cells_in_cube(spec, b);
        const std::uint64_t inter = sa.set_intersection(sb).count();
        CHECK((inter == 0 || inter == sa.count() || inter == sb.count()));
    }
    for (int level = 0; level < spec.depth; ++level) {
        DyadicCube q{level, {0, 0, 0}};
        CellSet whole = cells_in_cube(spec, q);
        CellSet acc = CellSet::empty_set(spec);
        for (std::uint32_t k = 0; k < 4; ++k) {
            CellSet cs = cells_in_cube(spec, child(spec, q, k));
            CHECK(acc.set_intersection(cs).count() == 0);
            acc = acc.set_union(cs);
        }
        CHECK(acc == whole);
    }
}

TEST_CASE("cells in cube matches the coordinate predicate") {
    std::mt19937_64 rng(21);
    for (int n = 1; n <= 3; ++n) {
        GridSpec spec(n, 3);
        for (int trial = 0; trial < 30; ++trial) {
            Cube c;
            c.size = 1 + std::uint32_t(rng() % spec.cells_per_axis());
            for (int a = 0; a < n; ++a)
                c.lo[std::size_t(a)] = std::uint32_t(rng() % (spec.cells_per_axis() - c.size + 1));
            const CellSet got = cells_in_cube(spec, c);
            const CellSet want = CellSet::from_predicate(spec, [&](std::uint64_t i) {
                const auto coords = cell_coords(spec, i);
                for (int a = 0; a < n; ++a) {
                    const std::uint32_t x = coords[std::size_t(a)];
                    if (x < c.lo[std::size_t(a)] || x >= c.lo[std::size_t(a)] + c.size) return false;
                }
                return true;
            });
            CHECK(got == want);
        }
    }
}

TEST_CASE("grid function basics") {
    GridSpec spec(1, 2);
    CHECK_THROWS(GridFunction(spec, {1.0, -0.5, 0.0, 2.0}));
    GridFunction f(spec, {0.0, 1.0, 2.0, 1.0});
    CHECK(f.superlevel(1.0).count() == 3);
    CHECK(f.superlevel(1.5).count() == 1);
    CHECK(f.support().count() == 3);
    CHECK_FALSE(f.strictly_positive());
    CHECK(f.pow(2.0)[2] == Catch::Approx(4.0));

    GridFunction g = f.refined(2);
    CHECK(g.spec().depth == 4);
    CHECK(g.size() == 16);
    CHECK(g[0] == 0.0);
    CHECK(g[4] == 1.0); // refined cells inherit the parent value
}
