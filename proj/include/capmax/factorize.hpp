#ifndef CAPMAX_FACTORIZE_HPP
#define CAPMAX_FACTORIZE_HPP

// Constructive factorization of A_p-type weights into A_1 factors via the
// geometric series of the quasi-linear operator T3 = T1 + T2,
//
//   T1 f = [M(|f|^q w^{-1/p})]^{1/q} w^{1/(pq)},
//   T2 f = [M(|f|^p w^{1/p})]^{1/p} w^{-1/p^2},    q = p/(p-1),
//
// phi = sum_k A^{-k} T3^k g. The factors are w0 = phi^p w^{1/p} and
// w1 = phi^q w^{-1/p}, so w0 * w1^{1-p} = w cell-wise by exponent algebra.
// The synthesis direction multiplies two A_1 weights back together and
// checks the product estimate against [w0] [w1]^{p-1}.

#include "capmax/choquet.hpp"
#include "capmax/dyadic.hpp"
#include "capmax/maximal.hpp"
#include "capmax/weights.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace capmax {

struct TOperators {
    GridFunction t1, t2, t3;
};

inline TOperators t_operators(const GridFunction& f, const GridFunction& w, double p, double delta,
                              const CubeFamilyPolicy& family = {}) {
    if (!(p > 1.0)) throw std::invalid_argument("t_operators: requires p > 1");
    if (!w.strictly_positive()) throw std::invalid_argument("t_operators: weight must be positive");
    const double q = p / (p - 1.0);
    const GridFunction m1 = maximal(f.pow(q).times(w.pow(-1.0 / p)), delta, family);
    const GridFunction m2 = maximal(f.pow(p).times(w.pow(1.0 / p)), delta, family);
    GridFunction t1 = m1.pow(1.0 / q).times(w.pow(1.0 / (p * q)));
    GridFunction t2 = m2.pow(1.0 / p).times(w.pow(-1.0 / (p * p)));
    GridFunction t3 = t1.plus(t2);
    return {std::move(t1), std::move(t2), std::move(t3)};
}

struct FactorizationResult {
    GridFunction w0, w1, phi;
    double A = 0.0;
    int terms = 0;
    double tail_norm = 0.0; // estimated pq-norm of the dropped tail
    ApEstimate a1_w0{}, a1_w1{};
};

namespace detail {

inline double pq_norm(const GridFunction& f, double pq, double delta) {
    return lp_norm(f, pq, delta);
}

} // namespace detail

// Probes the growth of the T3 orbit of g and returns 2x the largest
// observed norm ratio, the scale that makes the series decay geometrically.
inline double probe_series_scale(const GridFunction& g, const GridFunction& w, double p,
                                 double delta, const CubeFamilyPolicy& family = {},
                                 int probes = 3) {
    const double pq = p * p / (p - 1.0);
    GridFunction it = g;
    double norm = detail::pq_norm(it, pq, delta);
    double worst = 0.0;
    for (int k = 0; k < probes; ++k) {
        it = t_operators(it, w, p, delta, family).t3;
        const double next = detail::pq_norm(it, pq, delta);
        worst = std::max(worst, next / norm);
        norm = next;
    }
    return 2.0 * worst;
}

inline FactorizationResult jones_factorize(const GridFunction& w, double p, double delta,
                                           std::optional<GridFunction> g = std::nullopt,
                                           std::optional<double> A = std::nullopt,
                                           int max_terms = 64, double tol = 1e-9,
                                           const CubeFamilyPolicy& family = {}) {
    if (!w.strictly_positive())
        throw std::invalid_argument("jones_factorize: weight must be positive");
    const GridSpec& spec = w.spec();

    if (p == 1.0) { // trivial split
        FactorizationResult out{w, GridFunction::constant(spec, 1.0), GridFunction::constant(spec, 1.0),
                                0.0, 1, 0.0, {}, {}};
        out.a1_w0 = a1_constant(w, delta, family);
        out.a1_w1 = a1_constant(out.w1, delta, family);
        return out;
    }
    if (!(p > 1.0)) throw std::invalid_argument("jones_factorize: requires p >= 1");

    const double q = p / (p - 1.0);
    const double pq = p * q;
    GridFunction seed = g ? *g : GridFunction::constant(spec, 1.0);
    if (!seed.strictly_positive())
        throw std::invalid_argument("jones_factorize: seed g must be positive");
    const double scale = A ? *A : probe_series_scale(seed, w, p, delta, family);

    GridFunction phi = seed;          // k = 0 term
    GridFunction term = seed;         // A^-k T3^k g
    double term_norm = detail::pq_norm(term, pq, delta);
    double prev_norm = term_norm;
    int terms = 1;
    double ratio = 0.0;
    for (; terms <= max_terms; ++terms) {
        term = t_operators(term, w, p, delta, family).t3.scaled(1.0 / scale);
        term_norm = detail::pq_norm(term, pq, delta);
        ratio = term_norm / prev_norm;
        prev_norm = term_norm;
        phi = phi.plus(term);
        if (term_norm < tol * detail::pq_norm(phi, pq, delta)) break;
    }
    if (terms > max_terms)
        throw std::runtime_error("jones_factorize: series did not decay; increase A");

    FactorizationResult out{phi.pow(p).times(w.pow(1.0 / p)),  // w0
                            phi.pow(q).times(w.pow(-1.0 / p)), // w1
                            phi,
                            scale,
                            terms + 1,
                            0.0,
                            {},
                            {}};
    out.tail_norm = (ratio < 1.0) ? term_norm * ratio / (1.0 - ratio) : term_norm;
    out.a1_w0 = a1_constant(out.w0, delta, family);
    out.a1_w1 = a1_constant(out.w1, delta, family);
    return out;
}

struct SynthesisResult {
    GridFunction w;
    ApEstimate estimate{};
    double bound = 0.0; // a1(w0) * a1(w1)^(p-1)
    bool holds = false;
};

inline SynthesisResult jones_synthesize(const GridFunction& w0, const GridFunction& w1, double p,
                                        double delta, const CubeFamilyPolicy& family = {}) {
    if (!(p > 1.0)) throw std::invalid_argument("jones_synthesize: requires p > 1");
    if (!w0.strictly_positive() || !w1.strictly_positive())
        throw std::invalid_argument("jones_synthesize: weights must be positive");
    GridFunction w = w0.times(w1.pow(1.0 - p));
    SynthesisResult out{std::move(w), {}, 0.0, false};
    out.estimate = ap_constant(out.w, p, delta, family);
    const double a0 = a1_constant(w0, delta, family).value;
    const double a1 = a1_constant(w1, delta, family).value;
    out.bound = a0 * std::pow(a1, p - 1.0);
    out.holds = out.estimate.value <= out.bound * (1.0 + 1e-9);
    return out;
}

} // namespace capmax

#endif
