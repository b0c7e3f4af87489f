#ifndef CAPMAX_WEIGHTS_HPP
#define CAPMAX_WEIGHTS_HPP

// Muckenhoupt-type weight constants against dyadic Hausdorff content:
// A_p product estimates over a finite cube family, the A_1 maximal-quotient
// estimate, the power-weight membership rule, doubling checks, reverse
// Hoelder search, self-improvement and embeddings across content dimensions.
//
// Every "[w]" reported here is a supremum over a declared finite family and
// hence a lower bound of the true constant, exact over that family.
// Membership of a weight in a class is operationalized as stability of the
// estimate under a resolution sweep; the trend thresholds live in
// TrendThresholds.

#include "capmax/choquet.hpp"
#include "capmax/dyadic.hpp"
#include "capmax/maximal.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace capmax {

struct ApEstimate {
    double p = 2.0;
    double delta = 1.0;
    double value = 0.0;
    CubeFamilyPolicy family{};
    Cube argmax{};
};

namespace detail {

inline double content_average(const GridFunction& g, const CellSet& cells, double content_of_cube,
                              double delta) {
    return choquet_integral(g, cells, Capacity::content(g.spec().n, delta)) / content_of_cube;
}

} // namespace detail

// [w]_{A_p} over the family: max over cubes Q of
//   avg_Q(w) * avg_Q(w^{-1/(p-1)})^(p-1),
// all averages Choquet-integral-over-content.
inline ApEstimate ap_constant(const GridFunction& w, double p, double delta,
                              const CubeFamilyPolicy& family = {}) {
    if (!(p > 1.0)) throw std::invalid_argument("ap_constant: requires p > 1");
    if (!w.strictly_positive()) throw std::invalid_argument("ap_constant: weight must be positive");
    detail::guard_family(w.spec(), family);
    const GridSpec& spec = w.spec();
    const GridFunction sigma = w.pow(-1.0 / (p - 1.0));
    ApEstimate est;
    est.p = p;
    est.delta = delta;
    est.family = family;
    for (const Cube& c : enumerate_cubes(spec, family)) {
        const CellSet cells = cells_in_cube(spec, c);
        const double hc = dyadic_content(cells, delta);
        const double a = detail::content_average(w, cells, hc, delta);
        const double b = detail::content_average(sigma, cells, hc, delta);
        const double v = a * std::pow(b, p - 1.0);
        if (v > est.value) {
            est.value = v;
            est.argmax = c;
        }
    }
    return est;
}

// [w]_{A_1} over the family: max over cells of M(w)/w with the maximal
// operator restricted to the same family.
inline ApEstimate a1_constant(const GridFunction& w, double delta,
                              const CubeFamilyPolicy& family = {}) {
    if (!w.strictly_positive()) throw std::invalid_argument("a1_constant: weight must be positive");
    const GridFunction m = maximal(w, delta, family);
    ApEstimate est;
    est.p = 1.0;
    est.delta = delta;
    est.family = family;
    std::uint64_t arg = 0;
    for (std::uint64_t i = 0; i < w.size(); ++i) {
        const double v = m[i] / w[i];
        if (v > est.value) {
            est.value = v;
            arg = i;
        }
    }
    const auto c = cell_coords(w.spec(), arg);
    est.argmax = Cube{c, 1};
    return est;
}

// Membership rule for |x|^alpha: in A_{p,delta} iff alpha in
// (-delta, delta(p-1)) for p > 1, and iff alpha in (-delta, 0] for p = 1.
inline bool power_weight_oracle(double alpha, double p, double delta) {
    if (!(p >= 1.0)) throw std::invalid_argument("power_weight_oracle: p must be >= 1");
    if (p == 1.0) return alpha > -delta && alpha <= 0.0;
    return alpha > -delta && alpha < delta * (p - 1.0);
}

// Checks, over sampled dyadic cubes Q and subsets E of Q (including
// ancestor/descendant dilate pairs), the doubling inequality
//   [H(E)/H(Q)]^p <= 2^p [w] w_H(E) / w_H(Q)
// with the family-estimated constant. Returns the worst LHS/RHS ratio
// (<= 1 means no violation).
inline double doubling_check(const GridFunction& w, double p, double delta, int samples,
                             std::uint64_t seed, const CubeFamilyPolicy& family = {}) {
    const GridSpec& spec = w.spec();
    const double wp = (p > 1.0) ? ap_constant(w, p, delta, family).value
                                : a1_constant(w, delta, family).value;
    std::mt19937_64 rng(seed);
    auto cubes = enumerate_cubes(spec, {FamilyKind::dyadic_only});
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Cube qc = cubes[rng() % cubes.size()];
        const CellSet qcells = cells_in_cube(spec, qc);
        // random subset, or with some probability a dyadic subcube (dilate pair)
        CellSet e = CellSet::empty_set(spec);
        if (rng() % 3 == 0) {
            const DyadicCube q = to_dyadic(spec, qc);
            DyadicCube sub = q;
            while (sub.level < spec.depth && (rng() & 1)) sub = child(spec, sub, std::uint32_t(rng() & ((1u << spec.n) - 1)));
            e = cells_in_cube(spec, sub);
        } else {
            std::vector<std::uint64_t> idx;
            for (std::uint64_t i : qcells.indices())
                if (rng() & 1) idx.push_back(i);
            if (idx.empty()) continue;
            e = CellSet::from_indices(spec, idx);
        }
        if (!e.any()) continue;
        const double hq = dyadic_content(qcells, delta);
        const double he = dyadic_content(e, delta);
        const double wq = weighted_content(qcells, w, delta);
        const double we = weighted_content(e, w, delta);
        const double lhs = std::pow(he / hq, p);
        const double rhs = std::pow(2.0, p) * wp * we / wq;
        worst = std::max(worst, lhs / rhs);
    }
    return worst;
}

struct RhiEstimate {
    double gamma = 0.0;
    double K = 1.0;
    CubeFamilyPolicy family{};
    bool found = false;
    std::vector<std::pair<double, double>> scan; // (gamma, K(gamma)) over the grid
};

inline std::vector<double> default_gamma_grid() {
    std::vector<double> g;
    for (int k = 1; k <= 10; ++k) g.push_back(std::ldexp(1.0, -k));
    return g;
}

// Reverse Hoelder search: K(gamma) is the max over family cubes of
//   [avg_Q(w^{1+gamma})]^{1/(1+gamma)} / avg_Q(w),
// evaluated on every weight of the resolution sweep; returns the largest
// gamma in the grid whose K stays below the cap on all sweep members.
inline RhiEstimate reverse_holder(std::span<const GridFunction> sweep, double delta,
                                  const CubeFamilyPolicy& family = {},
                                  std::vector<double> gamma_grid = default_gamma_grid(),
                                  double cap = 8.0) {
    if (sweep.empty()) throw std::invalid_argument("reverse_holder: empty sweep");
    if (gamma_grid.empty()) throw std::invalid_argument("reverse_holder: empty gamma grid");
    RhiEstimate out;
    out.family = family;
    std::sort(gamma_grid.begin(), gamma_grid.end());
    for (double gamma : gamma_grid) {
        double K = 0.0;
        for (const GridFunction& w : sweep) {
            if (!w.strictly_positive())
                throw std::invalid_argument("reverse_holder: weight must be positive");
            const GridSpec& spec = w.spec();
            const GridFunction wg = w.pow(1.0 + gamma);
            for (const Cube& c : enumerate_cubes(spec, family)) {
                const CellSet cells = cells_in_cube(spec, c);
                const double hc = dyadic_content(cells, delta);
                const double lhs =
                    std::pow(detail::content_average(wg, cells, hc, delta), 1.0 / (1.0 + gamma));
                const double rhs = detail::content_average(w, cells, hc, delta);
                K = std::max(K, lhs / rhs);
            }
        }
        out.scan.emplace_back(gamma, K);
        if (K <= cap) {
            out.gamma = gamma;
            out.K = K;
            out.found = true;
        }
    }
    return out;
}

inline RhiEstimate reverse_holder(const GridFunction& w, double delta,
                                  const CubeFamilyPolicy& family = {},
                                  std::vector<double> gamma_grid = default_gamma_grid(),
                                  double cap = 8.0) {
    return reverse_holder(std::span<const GridFunction>(&w, 1), delta, family,
                          std::move(gamma_grid), cap);
}

struct SelfImproveResult {
    double q = 0.0;
    ApEstimate estimate{};
    RhiEstimate rhi{};
};

// Openness of the class: run the reverse Hoelder search on
// sigma = w^{-1/(p-1)} to find gamma, then q = 1 + (p-1)/(1+gamma) < p and
// the weight is re-estimated in the smaller class A_q.
inline SelfImproveResult self_improve(std::span<const GridFunction> sweep, double p, double delta,
                                      const CubeFamilyPolicy& family = {},
                                      std::vector<double> gamma_grid = default_gamma_grid(),
                                      double cap = 8.0) {
    if (!(p > 1.0)) throw std::invalid_argument("self_improve: requires p > 1");
    if (sweep.empty()) throw std::invalid_argument("self_improve: empty sweep");
    std::vector<GridFunction> sigma;
    sigma.reserve(sweep.size());
    for (const GridFunction& w : sweep) sigma.push_back(w.pow(-1.0 / (p - 1.0)));
    SelfImproveResult out;
    out.rhi = reverse_holder(std::span<const GridFunction>(sigma.data(), sigma.size()), delta,
                             family, std::move(gamma_grid), cap);
    if (!out.rhi.found) throw std::runtime_error("self_improve: no stable gamma in the grid");
    out.q = 1.0 + (p - 1.0) / (1.0 + out.rhi.gamma);
    out.estimate = ap_constant(sweep.back(), out.q, delta, family);
    return out;
}

inline SelfImproveResult self_improve(const GridFunction& w, double p, double delta,
                                      const CubeFamilyPolicy& family = {}) {
    return self_improve(std::span<const GridFunction>(&w, 1), p, delta, family);
}

struct EmbeddingEstimate {
    double p_prime = 0.0;
    double beta = 0.0;
    ApEstimate at_beta{};
    double ratio_vs_delta = 0.0; // estimate at (p', beta) / estimate at (p, delta)
};

// Strict monotonicity in the content dimension: a weight in A_{p,delta}
// lands in A_{p',beta} with p' = (p*delta + beta - delta)/beta for
// beta > delta. Returns the estimate at (p', beta) and its ratio against
// the (p, delta) estimate.
inline EmbeddingEstimate delta_embedding(const GridFunction& w, double p, double delta, double beta,
                                         const CubeFamilyPolicy& family = {}) {
    if (!(beta > delta)) throw std::invalid_argument("delta_embedding: requires beta > delta");
    if (!(p >= 1.0)) throw std::invalid_argument("delta_embedding: requires p >= 1");
    EmbeddingEstimate out;
    out.beta = beta;
    out.p_prime = (p * delta + beta - delta) / beta;
    const double base =
        (p > 1.0) ? ap_constant(w, p, delta, family).value : a1_constant(w, delta, family).value;
    out.at_beta = (out.p_prime > 1.0) ? ap_constant(w, out.p_prime, beta, family)
                                      : a1_constant(w, beta, family);
    out.ratio_vs_delta = out.at_beta.value / base;
    return out;
}

// Trend classification of an estimate sequence across a resolution sweep.
// "Stable" means the estimate grows by less than stable_cap per resolution
// level (compounded across a sweep step spanning several levels);
// "divergent" means the sequence is not stable and some sweep step jumps by
// at least divergent_floor.
enum class TrendVerdict { stable, divergent, indeterminate };

struct TrendThresholds {
    double stable_cap = 1.05;     // per resolution level
    double divergent_floor = 1.25; // per sweep step
};

struct TrendResult {
    std::vector<double> values;
    std::vector<int> levels;
    double max_step = 0.0;
    TrendVerdict verdict = TrendVerdict::indeterminate;
};

inline TrendResult classify_trend(std::vector<double> values, std::vector<int> levels,
                                  TrendThresholds th = {}) {
    if (values.size() < 2) throw std::invalid_argument("classify_trend: need at least two values");
    if (levels.size() != values.size())
        throw std::invalid_argument("classify_trend: one resolution level per value");
    TrendResult r;
    r.values = std::move(values);
    r.levels = std::move(levels);
    bool all_small = true;
    for (std::size_t i = 1; i < r.values.size(); ++i) {
        const double g = r.values[i] / r.values[i - 1];
        const int dl = r.levels[i] - r.levels[i - 1];
        if (dl <= 0) throw std::invalid_argument("classify_trend: levels must increase");
        r.max_step = std::max(r.max_step, g);
        if (!(g < std::pow(th.stable_cap, dl))) all_small = false;
    }
    if (all_small)
        r.verdict = TrendVerdict::stable;
    else if (r.max_step >= th.divergent_floor)
        r.verdict = TrendVerdict::divergent;
    else
        r.verdict = TrendVerdict::indeterminate;
    return r;
}

inline TrendResult classify_trend(std::vector<double> values, TrendThresholds th = {}) {
    std::vector<int> levels(values.size());
    for (std::size_t i = 0; i < levels.size(); ++i) levels[i] = int(i);
    return classify_trend(std::move(values), std::move(levels), th);
}

inline const char* verdict_name(TrendVerdict v) {
    switch (v) {
        case TrendVerdict::stable: return "stable";
        case TrendVerdict::divergent: return "divergent";
        case TrendVerdict::indeterminate: return "indeterminate";
    }
    return "?";
}

} // namespace capmax

#endif
