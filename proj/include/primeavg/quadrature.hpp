#pragma once

// Gauss-Legendre rules (nodes by Newton iteration on the Legendre
// recurrence) and a bisecting adaptive integrator built on them.

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace primeavg {

struct QuadratureRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

inline QuadratureRule make_gauss_legendre(int n)
{
    if (n < 1) throw std::domain_error("Gauss-Legendre order must be positive");
    QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

/// Cached rule of order n; the reference stays valid for the process lifetime.
inline const QuadratureRule& gauss_legendre(int n)
{
    static std::mutex mu;
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<QuadratureRule>(make_gauss_legendre(n));
    return *slot;
}

template <class F>
double integrate_fixed(F&& f, double a, double b, const QuadratureRule& rule)
{
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

namespace detail {

template <class F>
double adaptive_step(F& f, double a, double b, double whole, double tol, int depth,
                     const QuadratureRule& rule)
{
    const double m = 0.5 * (a + b);
    const double left = integrate_fixed(f, a, m, rule);
    const double right = integrate_fixed(f, m, b, rule);
    if (std::abs(left + right - whole) <= tol || depth <= 0) return left + right;
    return adaptive_step(f, a, m, left, 0.5 * tol, depth - 1, rule) +
           adaptive_step(f, m, b, right, 0.5 * tol, depth - 1, rule);
}

}  // namespace detail

/// Adaptive bisection with an order-n rule on every panel.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double tol = 1e-12, int order = 64,
                          int max_depth = 40)
{
    if (a == b) return 0.0;
    const auto& rule = gauss_legendre(order);
    const double whole = integrate_fixed(f, a, b, rule);
    return detail::adaptive_step(f, a, b, whole, tol, max_depth, rule);
}

}  // namespace primeavg
