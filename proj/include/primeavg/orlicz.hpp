#pragma once

/**
 * @file orlicz.hpp
 * @brief Decreasing rearrangements of step functions on a probability space
 * and the L(log L)^2(log log L) norm int_0^1 f*(t) phi(1/t) dt.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "primeavg/quadrature.hpp"

namespace primeavg {

/// phi(t) = log^2(1 + t) log(1 + log t), t >= 1.
inline double phi_weight(double t)
{
    if (!(t >= 1.0)) throw std::domain_error("phi_weight needs t >= 1");
    const double l = std::log1p(t);
    return l * l * std::log1p(std::log(t));
}

/// log+ t = max{0, log t}.
inline double log_plus(double t) { return t > 1.0 ? std::log(t) : 0.0; }

/**
 * Right-continuous nonincreasing step function on [0, 1):
 * f*(t) = values[k] for t in [edges[k], edges[k+1]), and 0 from total_measure() on.
 */
class StepRearrangement {
public:
    StepRearrangement() : edges_{0.0} {}

    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& measures() const { return measures_; }
    const std::vector<double>& edges() const { return edges_; }
    std::size_t steps() const { return values_.size(); }
    double total_measure() const { return edges_.back(); }

    double operator()(double t) const
    {
        if (t < 0.0) throw std::domain_error("rearrangement is defined on t >= 0");
        const auto it = std::upper_bound(edges_.begin(), edges_.end(), t);
        const auto k = static_cast<std::size_t>(it - edges_.begin());
        return k == 0 || k > values_.size() ? 0.0 : values_[k - 1];
    }

    /// mu{|f| > s}.
    double distribution(double s) const
    {
        double m = 0.0;
        for (std::size_t k = 0; k < values_.size(); ++k)
            if (values_[k] > s) m += measures_[k];
        return m;
    }

    StepRearrangement scaled(double c) const
    {
        if (!(c > 0.0)) throw std::domain_error("scale factor must be positive");
        StepRearrangement r = *this;
        for (auto& v : r.values_) v *= c;
        return r;
    }

private:
    friend StepRearrangement decreasing_rearrangement(std::vector<std::pair<double, double>>);
    std::vector<double> values_;
    std::vector<double> measures_;
    std::vector<double> edges_;
};

/// Builds f* from (magnitude, measure) pairs of a simple function. Equal
/// magnitudes merge; zero magnitudes contribute nothing.
inline StepRearrangement decreasing_rearrangement(std::vector<std::pair<double, double>> parts)
{
    double total = 0.0;
    for (const auto& [v, m] : parts) {
        if (!std::isfinite(v) || v < 0.0) throw std::domain_error("magnitudes must be finite and nonnegative");
        if (!(m > 0.0) || !std::isfinite(m)) throw std::domain_error("measures must be positive");
        total += m;
    }
    if (total > 1.0 + 1e-12) throw std::domain_error("total measure exceeds 1");
    std::stable_sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    StepRearrangement r;
    for (const auto& [v, m] : parts) {
        if (v == 0.0) continue;
        if (!r.values_.empty() && r.values_.back() == v) {
            r.measures_.back() += m;
            r.edges_.back() += m;
            continue;
        }
        r.values_.push_back(v);
        r.measures_.push_back(m);
        r.edges_.push_back(r.edges_.back() + m);
    }
    if (r.edges_.back() > 1.0) r.edges_.back() = 1.0;
    return r;
}

namespace detail {

/// phi(e^u) e^{-u}: the integrand after t = e^{-u}.
inline double orlicz_integrand(double u)
{
    const double l = u + std::log1p(std::exp(-u));  // log(1 + e^u)
    return l * l * std::log1p(u) * std::exp(-u);
}

/// Past this u the remaining tail is below 1e-20.
inline constexpr double orlicz_u_cap = 64.0;

}  // namespace detail

/// int_a^b phi(1/t) dt for 0 <= a < b <= 1.
inline double phi_inverse_integral(double a, double b)
{
    if (!(a >= 0.0 && a <= b && b <= 1.0)) throw std::domain_error("need 0 <= a <= b <= 1");
    if (a == b) return 0.0;
    const double lo = -std::log(b);
    const double hi = a == 0.0 ? std::max(lo, 0.0) + detail::orlicz_u_cap : -std::log(a);
    // split at u = 1 where log(1 + u) has its strongest curvature relative to the panel
    double acc = 0.0;
    double start = lo;
    for (double cut : {1.0, 8.0, 24.0}) {
        if (cut <= start || cut >= hi) continue;
        acc += integrate_adaptive(detail::orlicz_integrand, start, cut, 1e-14);
        start = cut;
    }
    return acc + integrate_adaptive(detail::orlicz_integrand, start, hi, 1e-14);
}

/// int_0^1 f*(t) phi(1/t) dt.
inline double orlicz_norm(const StepRearrangement& r)
{
    double acc = 0.0;
    for (std::size_t k = 0; k < r.steps(); ++k)
        acc += r.values()[k] * phi_inverse_integral(r.edges()[k], r.edges()[k + 1]);
    return acc;
}

struct DyadicLayer {
    unsigned j = 0;
    double value = 0.0;    // a_j = f*(2^{-j})
    double measure = 0.0;  // 2^{-j}
};

/// a_j = f*(2^{-j}) for j = 1..j_max.
inline std::vector<DyadicLayer> dyadic_layers(const StepRearrangement& r, unsigned j_max = 60)
{
    std::vector<DyadicLayer> out;
    for (unsigned j = 1; j <= j_max; ++j) {
        const double m = std::ldexp(1.0, -static_cast<int>(j));
        out.push_back({j, r(m), m});
    }
    return out;
}

/// sum_j a_j 1_{[2^{-j-1}, 2^{-j})}(t): the step minorant of f* built from the layers.
inline double layer_minorant(const std::vector<DyadicLayer>& layers, double t)
{
    for (const auto& L : layers)
        if (t >= 0.5 * L.measure && t < L.measure) return L.value;
    return 0.0;
}

/// (1/8) sum_j a_j 2^{-j} log^2(e 2^j) log(j + 1).
inline double layer_lower_bound(const std::vector<DyadicLayer>& layers)
{
    double acc = 0.0;
    for (const auto& L : layers) {
        const double g = 1.0 + static_cast<double>(L.j) * std::log(2.0);
        acc += L.value * L.measure * g * g * std::log(static_cast<double>(L.j) + 1.0);
    }
    return acc / 8.0;
}

}  // namespace primeavg
