// Acceptance checklist. Each criterion prints one PASS/FAIL line; the exit
// code is the number of failures. Pass a list of criterion numbers to run a
// subset, e.g. `acceptance 1 2 10`.

#include "capmax/factorize.hpp"
#include "capmax/verify.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

using namespace capmax;

namespace {

constexpr double kExactTol = 1e-12;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }

    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

bool close(double a, double b, double rel = kExactTol) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

void parallel_for(std::uint64_t count, const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
    const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads == 1 || count < 1024) {
        fn(0, count);
        return;
    }
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t lo = t * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(fn, lo, hi);
    }
    for (auto& th : pool) th.join();
}

// ---- 1: dyadic_content == brute_force_content ----------------------------

Outcome criterion1() {
    Outcome out;
    std::uint64_t checked = 0;

    // n = 1: exhaustive over all subsets up to depth 4
    const double deltas1[5] = {0.2, 0.4, 0.6, 0.8, 1.0};
    for (int L = 1; L <= 4; ++L) {
        GridSpec spec(1, L);
        const std::uint64_t sets = std::uint64_t{1} << spec.cell_count();
        for (std::uint64_t mask = 0; mask < sets; ++mask) {
            std::vector<std::uint64_t> idx;
            for (std::uint64_t i = 0; i < spec.cell_count(); ++i)
                if ((mask >> i) & 1u) idx.push_back(i);
            const CellSet E = CellSet::from_indices(spec, idx);
            for (double d : deltas1) {
                const double a = dyadic_content(E, d);
                const double b = brute_force_content(E, d);
                if (!close(a, b)) out.fail("n=1 mismatch");
                ++checked;
            }
        }
    }

    // n = 2: 10,000 sampled subsets across depths 1..3
    const double deltas2[5] = {0.4, 0.8, 1.2, 1.6, 2.0};
    std::mt19937_64 rng(20240809);
    for (int s = 0; s < 10000; ++s) {
        const int L = 1 + int(rng() % 3);
        GridSpec spec(2, L);
        std::vector<std::uint64_t> idx;
        for (std::uint64_t i = 0; i < spec.cell_count(); ++i)
            if (rng() & 1) idx.push_back(i);
        const CellSet E = CellSet::from_indices(spec, idx);
        const double d = deltas2[s % 5];
        if (!close(dyadic_content(E, d), brute_force_content(E, d))) out.fail("n=2 mismatch");
        ++checked;
    }
    out.note(std::to_string(checked) + " comparisons");
    return out;
}

// ---- 2: H(Q) = side(Q)^delta for every dyadic cube -----------------------

Outcome criterion2() {
    Outcome out;
    std::uint64_t checked = 0;
    for (int n = 1; n <= 3; ++n) {
        double deltas[5];
        for (int i = 0; i < 5; ++i) deltas[i] = double(n) * (i + 1) / 5.0;
        for (int L = 0; L <= 8; ++L) {
            GridSpec spec(n, L);
            for (int level = 0; level <= L; ++level) {
                const std::uint64_t cubes = std::uint64_t{1} << (n * level);
                const std::uint64_t span = std::uint64_t{1} << (n * (L - level));
                std::atomic<std::uint64_t> bad{0};
                parallel_for(cubes, [&](std::uint64_t lo, std::uint64_t hi) {
                    std::uint64_t local_bad = 0;
                    for (std::uint64_t k = lo; k < hi; ++k) {
                        const CellSet cells = CellSet::from_range(spec, k * span, span);
                        for (double d : deltas) {
                            const double got = dyadic_content(cells, d);
                            const double want = std::pow(spec.side_at_level(level), d);
                            if (!close(got, want)) ++local_bad;
                        }
                    }
                    bad += local_bad;
                });
                if (bad > 0)
                    out.fail("mismatch at n=" + std::to_string(n) + " L=" + std::to_string(L));
                checked += cubes * 5;
            }
        }
    }
    out.note(std::to_string(checked) + " cube contents");
    return out;
}

// ---- 3, 4, 5: counterexamples --------------------------------------------

Outcome criterion3() {
    Outcome out;
    for (double delta : {0.5, 1.0, 1.5}) {
        const auto rep = counterexample_1({2, 4, 8, 16}, 2, delta);
        if (!rep.pass.value_or(false))
            out.fail("delta=" + std::to_string(delta));
        else
            out.note("slope(d=" + std::to_string(delta).substr(0, 4) + ")=" +
                     std::to_string(rep.value("slope")).substr(0, 6));
    }
    return out;
}

Outcome criterion4() {
    Outcome out;
    for (double beta : {0.5, 1.0}) {
        const auto rep = counterexample_2({2, 4, 8, 16, 32}, 0.5, beta);
        if (!rep.pass.value_or(false))
            out.fail("beta=" + std::to_string(beta));
        else
            out.note("slope(b=" + std::to_string(beta).substr(0, 4) + ")=" +
                     std::to_string(rep.value("slope")).substr(0, 6));
    }
    return out;
}

Outcome criterion5() {
    Outcome out;
    int runs = 0;
    for (double delta : {0.5, 1.0})
        for (int K = 1; K <= 5; ++K) {
            const auto rep = counterexample_3(K, 2, delta, 6);
            if (!rep.pass.value_or(false))
                out.fail("delta=" + std::to_string(delta) + " K=" + std::to_string(K));
            ++runs;
        }
    out.note(std::to_string(runs) + " runs");
    return out;
}

// ---- 6: Calderon-Zygmund bounds ------------------------------------------

Outcome criterion6() {
    Outcome out;
    std::mt19937_64 rng(6001);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + int(rng() % 2);
        const int L = n == 1 ? 3 + int(rng() % 4) : 2 + int(rng() % 2);
        GridSpec spec(n, L);
        const GridFunction w = random_weight(spec, rng(), 5);
        const double delta = 0.25 + (double(n) - 0.25) * u(rng);
        const CellSet root = CellSet::full_set(spec);
        const double avg = weighted_content(root, w, delta) / dyadic_content(root, delta);
        const double lambda = avg * (1.02 + 3.0 * u(rng));
        const auto dec = cz_decompose(w, DyadicCube{}, lambda, delta);
        for (const auto& d : dec.diagnostics)
            if (!(d.average > lambda) ||
                !(d.average <= std::pow(2.0, delta) * lambda * (1 + 1e-12)))
                ++violations;
        for (std::uint64_t i : dec.residual.indices())
            if (!(w[i] <= lambda * (1 + 1e-12))) ++violations;
    }
    if (violations) out.fail(std::to_string(violations) + " violations");
    out.note("200 decompositions");
    return out;
}

// ---- 7: sparse cover bounds ----------------------------------------------

Outcome criterion7() {
    Outcome out;
    std::mt19937_64 rng(7001);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + int(rng() % 2);
        const int L = n == 1 ? 2 + int(rng() % 4) : 2 + int(rng() % 2);
        GridSpec spec(n, L);
        const double delta = 0.25 + (double(n) - 0.25) * u(rng);
        const CellSet E = random_cell_set(spec, rng(), 0.1 + 0.7 * u(rng));
        const auto dec = sparse_cover(E, delta);
        double total = 0.0;
        CellSet acc = CellSet::empty_set(spec);
        for (const auto& q : dec.selected) {
            const CellSet cells = cells_in_cube(spec, q);
            const double hq = dyadic_content(cells, delta);
            const double hqE = dyadic_content(cells.set_intersection(E), delta);
            if (!(hq <= 3.0 * hqE * (1 + 1e-12))) ++violations;
            acc = acc.set_union(cells);
            total += hq;
        }
        if (!E.is_subset_of(acc)) ++violations;
        if (!(total <= 2.0 * dyadic_content(E, delta) * (1 + 1e-12))) ++violations;
    }
    if (violations) out.fail(std::to_string(violations) + " violations");
    out.note("500 covers");
    return out;
}

// ---- 8: packing conditions ------------------------------------------------

Outcome criterion8() {
    Outcome out;
    std::mt19937_64 rng(8001);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0, runs = 0;
    while (runs < 200) {
        const int n = 1 + int(rng() % 2);
        GridSpec spec(n, n == 1 ? 4 : 3);
        const double delta = 0.25 + (double(n) - 0.25) * u(rng);
        const GridFunction w = random_weight(spec, rng(), 4);
        const auto family = random_dyadic_antichain(spec, rng());
        if (family.empty()) continue;
        ++runs;
        const auto admitted = packed_subfamily(family, w, delta);

        // condition (i), exhaustively over all dyadic cubes
        for (const Cube& qc : enumerate_cubes(spec, {FamilyKind::dyadic_only})) {
            auto [qlo, qcnt] = cell_range(spec, to_dyadic(spec, qc));
            double mass = 0.0;
            for (std::size_t ai : admitted) {
                auto [alo, acnt] = cell_range(spec, family[ai]);
                if (qlo <= alo && alo + acnt <= qlo + qcnt)
                    mass += weighted_content(cells_in_cube(spec, family[ai]), w, delta);
            }
            if (!(mass <= 2.0 * weighted_content(cells_in_cube(spec, qc), w, delta) * (1 + 1e-12)))
                ++violations;
        }

        // covering bound (ii)
        CellSet all = CellSet::empty_set(spec);
        double admitted_mass = 0.0;
        for (const auto& q : family) all = all.set_union(cells_in_cube(spec, q));
        for (std::size_t ai : admitted)
            admitted_mass += weighted_content(cells_in_cube(spec, family[ai]), w, delta);
        if (!(weighted_content(all, w, delta) <= 2.0 * admitted_mass * (1 + 1e-12))) ++violations;
    }
    if (violations) out.fail(std::to_string(violations) + " violations");
    out.note("200 families");
    return out;
}

// ---- 9: 1/4 lower bound of the integral sandwich --------------------------

Outcome criterion9() {
    Outcome out;
    std::mt19937_64 rng(9001);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + int(rng() % 2);
        const int L = n == 1 ? 3 + int(rng() % 3) : 2 + int(rng() % 2);
        GridSpec spec(n, L);
        const GridFunction f = random_step_function(spec, rng(), 5);
        const GridFunction w = random_weight(spec, rng(), 5);
        const double delta = 0.25 + (double(n) - 0.25) * u(rng);
        const double product = choquet_integral(f.times(w), Capacity::content(n, delta));
        const double iterated = choquet_integral(f, Capacity::weighted(delta, w));
        if (!(0.25 * product <= iterated * (1 + 1e-9) + 1e-300)) ++violations;
    }
    if (violations) out.fail(std::to_string(violations) + " violations");
    out.note("500 pairs");
    return out;
}

// ---- 10: power-weight dichotomy -------------------------------------------

Outcome criterion10() {
    Outcome out;
    int matched = 0;
    for (double delta : {0.5, 1.0})
        for (double alpha : {-delta, -delta / 2, 0.0, delta / 2, delta, 2 * delta}) {
            const auto rep = power_weight_trend(alpha, 2.0, delta, {4, 6, 8});
            if (rep.pass.value_or(false))
                ++matched;
            else
                out.fail("alpha=" + std::to_string(alpha) + " delta=" + std::to_string(delta) +
                         " -> " + rep.verdict);
        }
    out.note(std::to_string(matched) + "/12 matched");
    return out;
}

// ---- 11: Jones factorization ----------------------------------------------

Outcome criterion11() {
    Outcome out;
    const double delta = 0.5, p = 2.0;
    const double pq = p * p / (p - 1.0);

    // Seed g = w^{-1/4}; near a power singularity it reaches the fixed-point
    // profile at desk resolutions where the flat default seed still drifts.
    auto run_pair = [&](const GridFunction& w_lo, const GridFunction& w_hi,
                        const std::string& tag) {
        double a1w0[2], a1w1[2];
        int lvl[2];
        const GridFunction* ws[2] = {&w_lo, &w_hi};
        for (int k = 0; k < 2; ++k) {
            const auto res =
                jones_factorize(*ws[k], p, delta, ws[k]->pow(-0.25), std::nullopt, 400, 5e-10);
            for (std::uint64_t i = 0; i < ws[k]->size(); ++i) {
                const double back = res.w0[i] * std::pow(res.w1[i], 1.0 - p);
                if (!close(back, (*ws[k])[i], 1e-10)) {
                    out.fail(tag + ": reconstruction");
                    break;
                }
            }
            const double phi_norm = lp_norm(res.phi, pq, delta);
            if (!(res.tail_norm < 1e-8 * phi_norm)) out.fail(tag + ": tail");
            a1w0[k] = res.a1_w0.value;
            a1w1[k] = res.a1_w1.value;
            lvl[k] = ws[k]->spec().depth;
        }
        const std::vector<int> lvls{lvl[0], lvl[1]};
        if (classify_trend({a1w0[0], a1w0[1]}, lvls).verdict != TrendVerdict::stable)
            out.fail(tag + ": a1(w0) growth " + std::to_string(a1w0[1] / a1w0[0]));
        if (classify_trend({a1w1[0], a1w1[1]}, lvls).verdict != TrendVerdict::stable)
            out.fail(tag + ": a1(w1) growth " + std::to_string(a1w1[1] / a1w1[0]));
    };

    run_pair(GridFunction::constant(GridSpec(1, 8), 1.0),
             GridFunction::constant(GridSpec(1, 10), 1.0), "unit");
    run_pair(power_weight(GridSpec(1, 8), delta / 2), power_weight(GridSpec(1, 10), delta / 2),
             "power");
    std::mt19937_64 rng(11001);
    for (int s = 0; s < 3; ++s) {
        const GridFunction w = random_two_level_weight(GridSpec(1, 4), rng());
        run_pair(w, w.refined(2), "random#" + std::to_string(s));
    }

    // synthesis inequality on 100 random pairs
    int holds = 0;
    GridSpec spec(1, 4);
    for (int s = 0; s < 100; ++s) {
        const GridFunction w0 = random_two_level_weight(spec, rng());
        const GridFunction w1 = random_two_level_weight(spec, rng());
        if (jones_synthesize(w0, w1, p, delta).holds) ++holds;
    }
    if (holds != 100) out.fail("synthesis " + std::to_string(holds) + "/100");
    out.note("5 factorizations, 100 syntheses");
    return out;
}

// ---- 12: maximal operator properties ---------------------------------------

Outcome criterion12() {
    Outcome out;
    std::mt19937_64 rng(12001);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + int(rng() % 2);
        const int L = n == 1 ? 2 + int(rng() % 3) : 1 + int(rng() % 2);
        GridSpec spec(n, L);
        const double delta = 0.25 + (double(n) - 0.25) * u(rng);
        const FamilyKind kind = (rng() % 2) ? FamilyKind::dyadic_only : FamilyKind::shifted_dyadic;
        const MaximalConfig cfg =
            (rng() % 3 == 0)
                ? MaximalConfig{Capacity::weighted(delta, random_weight(spec, rng(), 3)), {kind}}
                : MaximalConfig{Capacity::content(n, delta), {kind}};
        const GridFunction f = random_step_function(spec, rng(), 4);
        const GridFunction g = random_step_function(spec, rng(), 4);

        const GridFunction mf = maximal(f, cfg);
        const GridFunction mg = maximal(g, cfg);
        const GridFunction msum = maximal(f.plus(g), cfg);
        const GridFunction mbig =
            maximal(f, MaximalConfig{cfg.capacity, {FamilyKind::all_grid_cubes}});
        for (std::uint64_t i = 0; i < f.size(); ++i) {
            if (!(msum[i] <= (mf[i] + mg[i]) * (1 + 1e-9) + 1e-300)) ++violations; // sublinear
            if (!(f[i] <= mf[i] * (1 + 1e-12) + 1e-300)) ++violations;             // f <= Mf
            if (!(mf[i] <= msum[i] * (1 + 1e-12) + 1e-300)) ++violations;          // monotone in f
            if (!(mf[i] <= mbig[i] * (1 + 1e-12) + 1e-300)) ++violations;          // family monotone
        }
    }
    if (violations) out.fail(std::to_string(violations) + " violations");

    int emb_bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + int(rng() % 2);
        GridSpec spec(n, n == 1 ? 4 : 2);
        const double delta = 0.25 + (double(n) - 0.25) * u(rng);
        const GridFunction f = random_step_function(spec, rng(), 4);
        if (!compare_embedding(f, delta).holds) ++emb_bad;
    }
    if (emb_bad) out.fail(std::to_string(emb_bad) + " embedding violations");
    out.note("1000 property trials, 100 embedding trials");
    return out;
}

// ---- 13: self-improvement --------------------------------------------------

Outcome criterion13() {
    Outcome out;
    const double delta = 0.5, p = 2.0, alpha = delta / 2;
    std::vector<GridFunction> sweep;
    for (int L : {8, 10}) sweep.push_back(power_weight(GridSpec(1, L), alpha));
    const auto si =
        self_improve(std::span<const GridFunction>(sweep.data(), sweep.size()), p, delta);
    if (!(si.q < p)) out.fail("q >= p");
    if (!power_weight_oracle(alpha, si.q, delta)) out.fail("oracle inconsistent at q");
    std::vector<double> vals;
    std::vector<int> levels{8, 10, 12};
    for (int L : levels)
        vals.push_back(ap_constant(power_weight(GridSpec(1, L), alpha), si.q, delta).value);
    const auto trend = classify_trend(vals, levels);
    if (trend.verdict != TrendVerdict::stable) out.fail("A_q estimate not stable");
    out.note("q=" + std::to_string(si.q).substr(0, 6) + " gamma=" + std::to_string(si.rhi.gamma));
    return out;
}

// ---- 14: monotonicity in the content dimension -----------------------------

Outcome criterion14() {
    Outcome out;
    const double delta = 0.5, p = 2.0;
    const double betas[2] = {delta + 0.25, 1.0}; // n = 1
    std::mt19937_64 rng(14001);

    // ten random stable weights: refinement sweeps keep every estimate flat
    for (int s = 0; s < 10; ++s) {
        const GridFunction w = random_two_level_weight(GridSpec(1, 4), rng());
        std::vector<int> levels{4, 6, 8};
        std::vector<double> base, emb0, emb1;
        for (int k = 0; k < 3; ++k) {
            const GridFunction wk = k == 0 ? w : w.refined(2 * k);
            base.push_back(ap_constant(wk, p, delta).value);
            emb0.push_back(delta_embedding(wk, p, delta, betas[0]).at_beta.value);
            emb1.push_back(delta_embedding(wk, p, delta, betas[1]).at_beta.value);
        }
        const bool base_stable = classify_trend(base, levels).verdict == TrendVerdict::stable;
        const bool emb_stable = classify_trend(emb0, levels).verdict == TrendVerdict::stable &&
                                classify_trend(emb1, levels).verdict == TrendVerdict::stable;
        if (base_stable && !emb_stable) out.fail("embedded constant unstable for stable base");
    }

    // witness |x|^lambda with lambda in (-beta, -delta): stable at beta,
    // divergent at delta
    const double lambda = -0.6;
    std::vector<int> levels{8, 10, 12};
    std::vector<double> at_delta;
    for (int L : levels)
        at_delta.push_back(ap_constant(power_weight(GridSpec(1, L), lambda), p, delta).value);
    if (classify_trend(at_delta, levels).verdict != TrendVerdict::divergent)
        out.fail("witness not divergent at delta");
    for (double beta : betas) {
        const double pp = (p * delta + beta - delta) / beta;
        std::vector<double> at_beta;
        for (int L : levels)
            at_beta.push_back(ap_constant(power_weight(GridSpec(1, L), lambda), pp, beta).value);
        if (classify_trend(at_beta, levels).verdict != TrendVerdict::stable)
            out.fail("witness not stable at beta=" + std::to_string(beta));
    }
    out.note("10 random weights + witness lambda=-0.6");
    return out;
}

struct Criterion {
    int id;
    const char* name;
    Outcome (*fn)();
};

const Criterion kCriteria[] = {
    {1, "content oracle equivalence", criterion1},
    {2, "cube content exactness", criterion2},
    {3, "counterexample 1", criterion3},
    {4, "counterexample 2", criterion4},
    {5, "counterexample 3", criterion5},
    {6, "calderon-zygmund bounds", criterion6},
    {7, "sparse cover bounds", criterion7},
    {8, "packing conditions", criterion8},
    {9, "integral sandwich lower bound", criterion9},
    {10, "power-weight dichotomy", criterion10},
    {11, "jones factorization", criterion11},
    {12, "maximal operator properties", criterion12},
    {13, "self-improvement", criterion13},
    {14, "dimension monotonicity", criterion14},
};

} // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failures = 0;
    for (const Criterion& c : kCriteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.fn();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double sec =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d  %-32s %s  (%.1fs)%s%s\n", c.id, c.name,
                    out.pass ? "PASS" : "FAIL", sec, out.detail.empty() ? "" : "  ",
                    out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
