#include <catch2/catch_amalgamated.hpp>

#include "capmax/generate.hpp"
#include "capmax/weights.hpp"

#include <cmath>
#include <random>

using namespace capmax;

TEST_CASE("ap constant of the unit weight is one") {
    for (int n = 1; n <= 2; ++n) {
        GridSpec spec(n, 3);
        GridFunction one = GridFunction::constant(spec, 1.0);
        for (double delta : {0.5, 1.0}) {
            CHECK(ap_constant(one, 2.0, delta).value == Catch::Approx(1.0).epsilon(1e-12));
            CHECK(a1_constant(one, delta).value == Catch::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("ap constant two-cell example") {
    // n=1, L=1, delta=1, p=2, w = (2,1): root term (3/2)(3/4) = 9/8
    GridSpec spec(1, 1);
    GridFunction w(spec, {2.0, 1.0});
    const auto est = ap_constant(w, 2.0, 1.0);
    CHECK(est.value == Catch::Approx(9.0 / 8.0).epsilon(1e-12));
    CHECK(est.argmax.size == 2); // the root

    // a1 at delta = 1/2: max(2/2, (1 + (1/2)^(1/2))/1)
    const auto a1 = a1_constant(w, 0.5);
    CHECK(a1.value == Catch::Approx(1.0 + std::pow(0.5, 0.5)).epsilon(1e-12));
}

TEST_CASE("power weight oracle") {
    CHECK(power_weight_oracle(0.0, 2.0, 0.5));
    CHECK(power_weight_oracle(0.0, 1.0, 0.5));
    CHECK_FALSE(power_weight_oracle(-0.5, 2.0, 0.5)); // alpha = -delta
    CHECK(power_weight_oracle(0.25, 2.0, 0.5));       // alpha = delta(p-1)/2
    CHECK_FALSE(power_weight_oracle(0.5, 2.0, 0.5));  // alpha = delta(p-1)
    CHECK(power_weight_oracle(-0.25, 1.0, 0.5));
    CHECK_FALSE(power_weight_oracle(0.1, 1.0, 0.5)); // p=1 needs alpha <= 0
    CHECK_THROWS(power_weight_oracle(0.0, 0.5, 0.5));
}

TEST_CASE("ap estimates: scale invariance, duality, monotonicity in p") {
    std::mt19937_64 rng(3);
    GridSpec spec(1, 4);
    for (int trial = 0; trial < 25; ++trial) {
        GridFunction w = random_weight(spec, rng());
        const double delta = 0.6;

        const double base = ap_constant(w, 2.5, delta).value;
        CHECK(ap_constant(w.scaled(3.7), 2.5, delta).value == Catch::Approx(base).epsilon(1e-10));

        // duality: [w]_{A_p}^{1/(p-1)} = [w^{-1/(p-1)}]_{A_{p'}}
        const double p = 3.0, pp = p / (p - 1.0);
        const double lhs = std::pow(ap_constant(w, p, delta).value, 1.0 / (p - 1.0));
        const double rhs = ap_constant(w.pow(-1.0 / (p - 1.0)), pp, delta).value;
        CHECK(lhs == Catch::Approx(rhs).epsilon(1e-10));

        // non-increasing in p
        double prev = ap_constant(w, 1.5, delta).value;
        for (double q : {2.0, 3.0, 5.0}) {
            const double cur = ap_constant(w, q, delta).value;
            CHECK(cur <= prev * (1 + 1e-10));
            prev = cur;
        }
    }
}

TEST_CASE("a1 identity on every dyadic cube") {
    // w_H(Q) * ||w^-1||_inf(Q) <= [w]_A1 * H(Q)
    std::mt19937_64 rng(5);
    GridSpec spec(1, 4);
    for (int trial = 0; trial < 25; ++trial) {
        GridFunction w = random_weight(spec, rng());
        const double delta = 0.5;
        const double a1 = a1_constant(w, delta).value;
        for (const Cube& c : enumerate_cubes(spec, {FamilyKind::dyadic_only})) {
            const CellSet cells = cells_in_cube(spec, c);
            double wmin = std::numeric_limits<double>::infinity();
            for (auto i : cells.indices()) wmin = std::min(wmin, w[i]);
            const double lhs = weighted_content(cells, w, delta) / wmin;
            CHECK(lhs <= a1 * dyadic_content(cells, delta) * (1 + 1e-10));
        }
    }
}

TEST_CASE("doubling check never violates") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        GridSpec spec(1, 4);
        GridFunction w = random_weight(spec, rng());
        for (double p : {1.0, 2.0}) {
            const double worst = doubling_check(w, p, 0.5, 60, rng());
            CHECK(worst <= 1.0 + 1e-10);
        }
    }
    // hand value: w == 1, E = half of Q, delta = n = 1, p = 2:
    // lhs (1/2)^2 vs rhs 4 * (1/2) -> ratio 1/8
    GridSpec spec(1, 1);
    GridFunction one = GridFunction::constant(spec, 1.0);
    const double worst = doubling_check(one, 2.0, 1.0, 400, 11);
    CHECK(worst <= 1.0 + 1e-12);
}

TEST_CASE("reverse hoelder") {
    GridSpec spec(1, 1);
    GridFunction one = GridFunction::constant(spec, 1.0);
    auto rhi = reverse_holder(one, 1.0);
    CHECK(rhi.found);
    CHECK(rhi.gamma == Catch::Approx(0.5)); // largest grid point
    CHECK(rhi.K == Catch::Approx(1.0).epsilon(1e-12));

    // two-valued example at gamma = 1:
    // ((4+1)/2)^(1/2) / (3/2) = 1.0540926...
    GridFunction w(spec, {2.0, 1.0});
    auto scan = reverse_holder(w, 1.0, {}, std::vector<double>{1.0}, 8.0);
    REQUIRE(scan.scan.size() == 1);
    CHECK(scan.scan[0].second == Catch::Approx(std::sqrt(2.5) / 1.5).epsilon(1e-12));

    // power weight inside the class keeps K bounded across a sweep
    std::vector<GridFunction> sweep;
    for (int L : {4, 6, 8}) sweep.push_back(power_weight(GridSpec(1, L), -0.25));
    auto est = reverse_holder(std::span<const GridFunction>(sweep.data(), sweep.size()), 0.5);
    CHECK(est.found);
    CHECK(est.K < 8.0);

    CHECK_THROWS(reverse_holder(one, 1.0, {}, std::vector<double>{}));
}

TEST_CASE("a1 estimate of in-class power weights is stable") {
    std::vector<double> vals;
    std::vector<int> levels{4, 6, 8};
    for (int L : levels) vals.push_back(a1_constant(power_weight(GridSpec(1, L), -0.25), 0.5).value);
    CHECK(classify_trend(vals, levels).verdict == TrendVerdict::stable);
}

TEST_CASE("self improvement") {
    GridSpec spec(1, 3);
    GridFunction one = GridFunction::constant(spec, 1.0);
    auto si = self_improve(one, 2.0, 1.0);
    CHECK(si.q < 2.0);
    CHECK(si.q == Catch::Approx(1.0 + 1.0 / 1.5)); // gamma = 1/2 from the default grid
    CHECK(si.estimate.value == Catch::Approx(1.0).epsilon(1e-12));

    // gamma = 1 turns p = 2 into q = 3/2
    auto si3 = self_improve(std::span<const GridFunction>(&one, 1), 2.0, 1.0, {},
                            std::vector<double>{1.0});
    CHECK(si3.q == Catch::Approx(1.5));

    // w = |x|^{delta/2}, p = 2: q must leave alpha inside (-delta, delta(q-1))
    const double delta = 0.5;
    std::vector<GridFunction> sweep;
    for (int L : {6, 8}) sweep.push_back(power_weight(GridSpec(1, L), delta / 2));
    auto si2 = self_improve(std::span<const GridFunction>(sweep.data(), sweep.size()), 2.0, delta);
    CHECK(si2.q < 2.0);
    CHECK(power_weight_oracle(delta / 2, si2.q, delta));
}

TEST_CASE("delta embedding") {
    GridSpec spec(1, 4);
    GridFunction one = GridFunction::constant(spec, 1.0);
    auto emb = delta_embedding(one, 2.0, 0.5, 1.0);
    CHECK(emb.p_prime == Catch::Approx((2.0 * 0.5 + 0.5) / 1.0));
    CHECK(emb.at_beta.value == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(emb.ratio_vs_delta == Catch::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS(delta_embedding(one, 2.0, 1.0, 0.5));

    // p = 1 case maps to p' = 1
    auto emb1 = delta_embedding(one, 1.0, 0.5, 1.0);
    CHECK(emb1.p_prime == Catch::Approx(1.0));
    CHECK(emb1.at_beta.p == Catch::Approx(1.0));
}

TEST_CASE("trend classification") {
    TrendThresholds th;
    CHECK(classify_trend({1.0, 1.01, 1.02}).verdict == TrendVerdict::stable);
    CHECK(classify_trend({1.0, 1.3, 1.7}).verdict == TrendVerdict::divergent);
    CHECK(classify_trend({1.0, 1.15, 1.3}).verdict == TrendVerdict::indeterminate);
    // per-level compounding: a 2-level step may grow by up to 1.05^2
    CHECK(classify_trend({1.0, 1.09}, {0, 2}, th).verdict == TrendVerdict::stable);
    CHECK(classify_trend({1.0, 1.09}, {0, 1}, th).verdict == TrendVerdict::indeterminate);
    CHECK_THROWS(classify_trend({1.0}));
    CHECK_THROWS(classify_trend({1.0, 2.0}, std::vector<int>{3, 3}));
}

TEST_CASE("power weight sampling") {
    GridSpec spec(1, 3);
    GridFunction w0 = power_weight(spec, 0.0);
    for (std::uint64_t i = 0; i < w0.size(); ++i) CHECK(w0[i] == 1.0);
    GridFunction w = power_weight(spec, -0.5);
    CHECK(w.strictly_positive());
    CHECK(w[cell_index(spec, {0, 0, 0})] == Catch::Approx(std::pow(1.0 / 16.0, -0.5)));
}
