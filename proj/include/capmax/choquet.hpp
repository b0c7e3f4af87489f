#ifndef CAPMAX_CHOQUET_HPP
#define CAPMAX_CHOQUET_HPP

// Layer-cake Choquet integrals of step functions. With distinct positive
// values v_1 < ... < v_k of f on E and v_0 = 0,
//
//   integral = sum_i (v_i - v_{i-1}) * C({f * 1_E >= v_i}),
//
// which is the exact value of int_0^inf C({f > t}) dt for step data. The
// only approximations anywhere downstream are grid resolution and cube
// family truncation; the integral itself is a finite sum.

#include "capmax/content.hpp"
#include "capmax/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace capmax {

class Capacity;

double choquet_integral(const GridFunction& f, const CellSet& E, const Capacity& C);

// Monotone, finitely subadditive set function on leaf-cell sets: plain
// dyadic content, a weighted content induced by a weight, or Lebesgue
// volume (for the classical maximal operator).
class Capacity {
public:
    enum class Kind { content, weighted_content, volume };

    static Capacity content(const ContentParams& params) {
        Capacity c;
        c.kind_ = Kind::content;
        c.params_ = params;
        return c;
    }

    static Capacity content(int n, double delta) { return content(ContentParams(n, delta)); }

    static Capacity weighted(const ContentParams& params, GridFunction w) {
        if (!w.strictly_positive())
            throw std::invalid_argument("Capacity: weight must be strictly positive");
        Capacity c;
        c.kind_ = Kind::weighted_content;
        c.params_ = params;
        c.weight_ = std::make_shared<GridFunction>(std::move(w));
        return c;
    }

    static Capacity weighted(double delta, GridFunction w) {
        const int n = w.spec().n;
        return weighted(ContentParams(n, delta), std::move(w));
    }

    static Capacity volume() {
        Capacity c;
        c.kind_ = Kind::volume;
        return c;
    }

    Kind kind() const { return kind_; }
    double delta() const { return params_.delta; }
    const GridFunction* weight() const { return weight_.get(); }

    double operator()(const CellSet& E) const {
        switch (kind_) {
            case Kind::content:
                return dyadic_content(E, params_);
            case Kind::weighted_content:
                return choquet_integral(*weight_, E, content(params_));
            case Kind::volume: {
                const double v = std::pow(E.spec().leaf_side(), E.spec().n);
                return double(E.count()) * v;
            }
        }
        return 0.0;
    }

private:
    Kind kind_ = Kind::content;
    ContentParams params_{};
    std::shared_ptr<const GridFunction> weight_;
};

namespace detail {

// Distinct positive values of f on E, descending, paired with the cells that
// attain at least that value (prefixes of the value-sorted cell order).
struct LayerStack {
    std::vector<double> thresholds;           // descending
    std::vector<std::uint64_t> order;         // cells sorted by value, descending
    std::vector<std::size_t> prefix_len;      // cells with value >= thresholds[i]
};

inline LayerStack layers_of(const GridFunction& f, const CellSet& E) {
    LayerStack ls;
    for (std::uint64_t i = 0; i < f.size(); ++i)
        if (E.test(i) && f[i] > 0.0) ls.order.push_back(i);
    std::sort(ls.order.begin(), ls.order.end(),
              [&](std::uint64_t a, std::uint64_t b) { return f[a] > f[b]; });
    for (std::size_t i = 0; i < ls.order.size(); ++i) {
        const double v = f[ls.order[i]];
        if (ls.thresholds.empty() || v < ls.thresholds.back()) {
            ls.thresholds.push_back(v);
            ls.prefix_len.push_back(i + 1);
        } else {
            ls.prefix_len.back() = i + 1;
        }
    }
    return ls;
}

} // namespace detail

inline double choquet_integral(const GridFunction& f, const CellSet& E, const Capacity& C) {
    if (!f.spec().same_grid(E.spec())) throw std::invalid_argument("choquet: mismatched grids");
    const auto ls = detail::layers_of(f, E);
    if (ls.thresholds.empty()) return 0.0;
    // Walk layers from the top value down, growing the superlevel set.
    std::vector<std::uint64_t> cells;
    cells.reserve(ls.order.size());
    double integral = 0.0;
    for (std::size_t i = 0; i < ls.thresholds.size(); ++i) {
        cells.assign(ls.order.begin(), ls.order.begin() + std::ptrdiff_t(ls.prefix_len[i]));
        const CellSet S = CellSet::from_indices(f.spec(), cells);
        const double lower = (i + 1 < ls.thresholds.size()) ? ls.thresholds[i + 1] : 0.0;
        integral += (ls.thresholds[i] - lower) * C(S);
    }
    return integral;
}

inline double choquet_integral(const GridFunction& f, const Capacity& C) {
    return choquet_integral(f, CellSet::full_set(f.spec()), C);
}

// w_H(F) = integral of w over F against the content capacity. The induced
// set function is itself a capacity.
inline double weighted_content(const CellSet& F, const GridFunction& w, double delta) {
    if (!w.spec().same_grid(F.spec())) throw std::invalid_argument("weighted_content: mismatched grids");
    return choquet_integral(w, F, Capacity::content(F.spec().n, delta));
}

inline constexpr double kInfinityP = std::numeric_limits<double>::infinity();

// L^p norm with respect to (optionally weighted) content: the Choquet
// integral of f^p * w, raised to 1/p. p = infinity reduces to the maximum
// over E, since any nonempty cell set has positive content.
inline double lp_norm(const GridFunction& f, double p, double delta,
                      const std::optional<GridFunction>& w = std::nullopt,
                      const std::optional<CellSet>& E = std::nullopt) {
    const CellSet domain = E ? *E : CellSet::full_set(f.spec());
    if (p == kInfinityP) {
        double m = 0.0;
        for (std::uint64_t i = 0; i < f.size(); ++i)
            if (domain.test(i)) m = std::max(m, f[i]);
        return m;
    }
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    GridFunction g = f.pow(p);
    if (w) g = g.times(*w);
    return std::pow(choquet_integral(g, domain, Capacity::content(f.spec().n, delta)), 1.0 / p);
}

// Weak L^p quasi-norm: sup over t > 0 of t * C({f > t})^(1/p). For a step
// function the sup is the max over its distinct values v of
// v * C({f >= v})^(1/p).
inline double weak_lp_norm(const GridFunction& f, double p, double delta,
                           const std::optional<GridFunction>& w = std::nullopt,
                           const std::optional<CellSet>& E = std::nullopt) {
    if (!(p >= 1.0) || p == kInfinityP)
        throw std::invalid_argument("weak_lp_norm: p must be finite and >= 1");
    const CellSet domain = E ? *E : CellSet::full_set(f.spec());
    const Capacity C = w ? Capacity::weighted(ContentParams(f.spec().n, delta), *w)
                         : Capacity::content(f.spec().n, delta);
    const auto ls = detail::layers_of(f, domain);
    double best = 0.0;
    std::vector<std::uint64_t> cells;
    for (std::size_t i = 0; i < ls.thresholds.size(); ++i) {
        cells.assign(ls.order.begin(), ls.order.begin() + std::ptrdiff_t(ls.prefix_len[i]));
        const CellSet S = CellSet::from_indices(f.spec(), cells);
        best = std::max(best, ls.thresholds[i] * std::pow(C(S), 1.0 / p));
    }
    return best;
}

} // namespace capmax

#endif
