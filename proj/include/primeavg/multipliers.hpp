#pragma once

/**
 * @file multipliers.hpp
 * @brief Fourier multipliers on the circle: averaging kernels, the weighted
 * prime multiplier, smooth cutoffs, rational arcs and their approximants.
 *
 * Conventions. Frequencies live on T = [0, 1) and e(x) = exp(2 pi i x).
 * Multipliers use the + sign, K^(xi) = sum_n w_n e(xi n), so the operator
 * with multiplier K^ is the correlation f -> sum_n w_n f(x + n).
 * A MultiplierGrid samples a multiplier at xi = j/G, j in [0, G).
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "primeavg/characters.hpp"
#include "primeavg/errors.hpp"
#include "primeavg/fft.hpp"
#include "primeavg/gauss.hpp"
#include "primeavg/ntheory.hpp"
#include "primeavg/quadrature.hpp"

namespace primeavg {

/// x - round(x), in [-1/2, 1/2].
inline double wrap_unit(double x) { return x - std::nearbyint(x); }

/// e(x) with the argument reduced mod 1 first.
inline cplx unit_phase(double x)
{
    const double angle = 2.0 * std::numbers::pi * wrap_unit(x);
    return {std::cos(angle), std::sin(angle)};
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

/// Finitely supported nonnegative weights; weights[n] sits at site n.
struct Kernel {
    std::vector<double> weights;

    std::size_t support() const { return weights.empty() ? 0 : weights.size() - 1; }

    double total_mass() const
    {
        long double acc = 0.0L;
        for (double w : weights) acc += w;
        return static_cast<double>(acc);
    }
};

/// n^beta - (n-1)^beta without cancellation for large n.
inline double power_increment(std::uint64_t n, double beta)
{
    if (n == 0) return 0.0;
    if (n == 1) return 1.0;
    const double x = static_cast<double>(n);
    return -std::pow(x, beta) * std::expm1(beta * std::log1p(-1.0 / x));
}

/// Weight (n^beta - (n-1)^beta)/(beta N) at sites 1..N.
inline Kernel kernel_M_beta(std::uint64_t N, double beta)
{
    if (!(beta >= 0.5 && beta <= 1.0)) throw std::domain_error("kernel exponent must lie in [1/2, 1]");
    if (N > max_fft_length) throw capacity_error("kernel length too large");
    Kernel k;
    if (N == 0) return k;
    k.weights.assign(N + 1, 0.0);
    const double scale = 1.0 / (beta * static_cast<double>(N));
    for (std::uint64_t n = 1; n <= N; ++n)
        k.weights[n] = beta == 1.0 ? 1.0 / static_cast<double>(N) : power_increment(n, beta) * scale;
    return k;
}

inline Kernel kernel_M(std::uint64_t N) { return kernel_M_beta(N, 1.0); }

/// Unit mass at site n.
inline Kernel unit_mass(std::uint64_t n)
{
    Kernel k;
    k.weights.assign(n + 1, 0.0);
    k.weights[n] = 1.0;
    return k;
}

/// K^(xi) by direct summation; the rotating phase is resynchronized every
/// 256 steps so rounding does not accumulate.
inline cplx fourier_kernel(const Kernel& k, double xi)
{
    const double t = wrap_unit(xi);
    const cplx step = unit_phase(t);
    cplx z{1.0, 0.0};
    cplx acc{0.0, 0.0};
    for (std::size_t n = 1; n < k.weights.size(); ++n) {
        z = (n % 256 == 0) ? unit_phase(wrap_unit(static_cast<double>(n) * t)) : z * step;
        acc += k.weights[n] * z;
    }
    return acc;
}

/// M_N^(xi) = e((N+1)xi/2) sin(pi N xi) / (N sin(pi xi)).
inline cplx fourier_M(std::uint64_t N, double xi)
{
    if (N == 0) return {0.0, 0.0};
    const double t = wrap_unit(xi);
    if (t == 0.0) return {1.0, 0.0};
    const double nd = static_cast<double>(N);
    const double ratio = std::sin(2.0 * std::numbers::pi * wrap_unit(0.5 * nd * t)) /
                         (nd * std::sin(std::numbers::pi * t));
    return unit_phase(wrap_unit((nd + 1.0) * t * 0.5)) * ratio;
}

/// Samples of a 1-periodic multiplier at xi = j/G.
struct MultiplierGrid {
    std::vector<cplx> values;

    std::size_t resolution() const { return values.size(); }

    cplx at(std::int64_t j) const
    {
        const auto g = static_cast<std::int64_t>(values.size());
        auto r = j % g;
        return values[static_cast<std::size_t>(r < 0 ? r + g : r)];
    }

    double frequency(std::size_t j) const
    {
        return static_cast<double>(j) / static_cast<double>(values.size());
    }
};

namespace detail {

inline void check_grid(std::size_t G)
{
    if (!is_power_of_two(G)) throw std::domain_error("grid resolution must be a power of two");
    if (G > max_fft_length) throw capacity_error("grid resolution too large");
}

/// Folds site weights mod G and returns the + sign transform on the grid.
inline MultiplierGrid folded_transform(const std::vector<double>& folded)
{
    std::vector<cplx> c(folded.begin(), folded.end());
    return MultiplierGrid{fft_backward(c)};
}

}  // namespace detail

inline MultiplierGrid fourier_kernel_grid(const Kernel& k, std::size_t G)
{
    detail::check_grid(G);
    std::vector<double> folded(G, 0.0);
    for (std::size_t n = 0; n < k.weights.size(); ++n) folded[n & (G - 1)] += k.weights[n];
    return detail::folded_transform(folded);
}

// ---------------------------------------------------------------------------
// Weighted prime multiplier
// ---------------------------------------------------------------------------

/// m_N(xi) = theta(N)^{-1} sum_{p <= N} e(xi p) log p.
inline cplx prime_multiplier(std::uint64_t N, double xi, const PrimeTable& table)
{
    if (N < 2) throw std::domain_error("prime multiplier needs N >= 2");
    const double theta = table.theta(N);
    const double t = wrap_unit(xi);
    cplx acc{0.0, 0.0};
    for (const auto p : table.primes()) {
        if (p > N) break;
        acc += std::log(static_cast<double>(p)) * unit_phase(static_cast<double>(p) * t);
    }
    return acc / theta;
}

inline cplx prime_multiplier(std::uint64_t N, double xi)
{
    return prime_multiplier(N, xi, shared_prime_table(N));
}

inline MultiplierGrid prime_multiplier_grid(std::uint64_t N, std::size_t G, const PrimeTable& table)
{
    if (N < 2) throw std::domain_error("prime multiplier needs N >= 2");
    detail::check_grid(G);
    const double theta = table.theta(N);
    std::vector<double> folded(G, 0.0);
    for (const auto p : table.primes()) {
        if (p > N) break;
        folded[p & (G - 1)] += std::log(static_cast<double>(p)) / theta;
    }
    return detail::folded_transform(folded);
}

inline MultiplierGrid prime_multiplier_grid(std::uint64_t N, std::size_t G)
{
    return prime_multiplier_grid(N, G, shared_prime_table(N));
}

// ---------------------------------------------------------------------------
// Smooth cutoff
// ---------------------------------------------------------------------------

namespace detail {

/// Normalized CDF of the bump exp(-1/(1 - u^2)) on [-1, 1], tabulated at
/// cell boundaries and completed inside a cell by a fixed 20-point rule.
class bump_cdf {
public:
    static const bump_cdf& instance()
    {
        static const bump_cdf table;
        return table;
    }

    double operator()(double v) const
    {
        if (v <= -1.0) return 0.0;
        if (v >= 1.0) return 1.0;
        const double pos = (v + 1.0) / width_;
        auto cell = static_cast<std::size_t>(pos);
        if (cell >= cells_) cell = cells_ - 1;
        const double left = -1.0 + width_ * static_cast<double>(cell);
        return (cumulative_[cell] + integrate_fixed(density, left, v, rule())) / total_;
    }

private:
    static constexpr std::size_t cells_ = 512;

    static double density(double u)
    {
        const double d = 1.0 - u * u;
        return d <= 0.0 ? 0.0 : std::exp(-1.0 / d);
    }

    static const QuadratureRule& rule() { return gauss_legendre(20); }

    bump_cdf() : width_(2.0 / cells_), cumulative_(cells_ + 1, 0.0)
    {
        for (std::size_t c = 0; c < cells_; ++c) {
            const double a = -1.0 + width_ * static_cast<double>(c);
            cumulative_[c + 1] = cumulative_[c] + integrate_fixed(density, a, a + width_, rule());
        }
        total_ = cumulative_[cells_];
    }

    double width_;
    std::vector<double> cumulative_;
    double total_ = 1.0;
};

}  // namespace detail

/// Smooth even cutoff: 1 on |xi| <= 1/4, 0 on |xi| >= 1/2. It is the
/// indicator of [-3/8, 3/8] convolved with a normalized bump on [-1/8, 1/8].
inline double eta(double xi)
{
    const double a = std::abs(xi);
    if (a <= 0.25) return 1.0;
    if (a >= 0.5) return 0.0;
    return 1.0 - detail::bump_cdf::instance()(8.0 * (a - 0.375));
}

/// eta(2^{4s} xi).
inline double eta_s(unsigned s, double xi) { return eta(std::ldexp(xi, 4 * static_cast<int>(s))); }

/// Half-width of the support of eta_s.
inline double eta_s_radius(unsigned s) { return std::ldexp(0.5, -4 * static_cast<int>(s)); }

// ---------------------------------------------------------------------------
// Rational arcs
// ---------------------------------------------------------------------------

struct RationalPoint {
    std::uint64_t a = 1;
    std::uint64_t q = 1;
    unsigned s = 0;

    double value() const { return static_cast<double>(a) / static_cast<double>(q); }
    friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
};

/// q square-free, or 4 | q with q/4 square-free.
inline bool admissible_denominator(std::uint64_t q)
{
    return is_squarefree(q) || (q % 4 == 0 && is_squarefree(q / 4));
}

inline constexpr unsigned max_arc_level = 12;

/// Level 0 is the single point 1/1; level s >= 1 holds a/q with
/// 2^s <= q < 2^{s+1}, q admissible, a in A_q.
inline std::vector<RationalPoint> enumerate_arcs(unsigned s)
{
    if (s > max_arc_level) throw capacity_error("arc level above " + std::to_string(max_arc_level));
    if (s == 0) return {RationalPoint{1, 1, 0}};
    std::vector<RationalPoint> out;
    for (std::uint64_t q = std::uint64_t{1} << s; q < (std::uint64_t{2} << s); ++q) {
        if (!admissible_denominator(q)) continue;
        for (std::uint64_t a = 1; a <= q; ++a)
            if (std::gcd(a, q) == 1) out.push_back({a, q, s});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Major-arc approximants
// ---------------------------------------------------------------------------

/// Character and real zero used for the exceptional correction at modulus q.
struct ExceptionalTerm {
    DirichletCharacter chi;
    double beta;
};

using ExceptionalTerms = std::map<std::uint64_t, ExceptionalTerm>;

/// Exceptional data from a scan result; empty unless the result is found
/// (a positive scan or an explicit injection).
inline ExceptionalTerms exceptional_terms(std::uint64_t q, const ExceptionalZeroResult& r)
{
    ExceptionalTerms out;
    if (!r.found) return out;
    auto chars = enumerate_quadratic_characters(q);
    if (r.character_index >= chars.size()) throw std::domain_error("character index out of range");
    out.emplace(q, ExceptionalTerm{std::move(chars[r.character_index]), r.beta});
    return out;
}

/// Synthetic exceptional zero beta for the quadratic character number
/// `character_index` mod q. Nothing else creates exceptional terms.
inline ExceptionalTerms inject_exceptional(std::uint64_t q, double beta, std::size_t character_index = 0)
{
    return exceptional_terms(q, inject_exceptional_zero(q, beta, character_index));
}

struct ApproximantSpec {
    RationalPoint point;
    std::uint64_t N = 1;
    std::optional<ExceptionalTerm> exceptional;
};

/// G(1_q, a) M_N^(theta), minus G(chi_q, a) M_N^beta^(theta) when an
/// exceptional term is present.
inline cplx approximant_hat(const ApproximantSpec& approx, double theta)
{
    const auto& p = approx.point;
    if (p.q == 0 || p.a == 0 || p.a > p.q || std::gcd(p.a, p.q) != 1)
        throw std::domain_error("approximant needs a in A_q");
    cplx v = ramanujan_gauss_principal(p.q, static_cast<std::int64_t>(p.a)) * fourier_M(approx.N, theta);
    if (approx.exceptional) {
        const auto& ex = *approx.exceptional;
        if (ex.chi.modulus() != p.q) throw std::domain_error("exceptional character modulus mismatch");
        v -= gauss_sum_bruteforce(ex.chi, static_cast<std::int64_t>(p.a)) *
             fourier_kernel(kernel_M_beta(approx.N, ex.beta), theta);
    }
    return v;
}

/**
 * Sum over arcs of L^{a,q}_N(xi - a/q) eta_s(xi - a/q) at scale N, for one
 * level s or a range of levels. Kernels and Gauss sums needed by the
 * exceptional terms are computed once per model.
 */
class MajorArcModel {
public:
    explicit MajorArcModel(std::uint64_t N, ExceptionalTerms exceptional = {})
        : N_(N), exceptional_(std::move(exceptional))
    {
        if (N == 0) throw std::domain_error("scale must be positive");
        for (const auto& [q, term] : exceptional_) {
            if (term.chi.modulus() != q) throw std::domain_error("exceptional character modulus mismatch");
            kernels_.emplace(q, kernel_M_beta(N_, term.beta));
        }
    }

    std::uint64_t scale() const { return N_; }
    const ExceptionalTerms& exceptional() const { return exceptional_; }

    cplx approximant(const RationalPoint& p, double theta) const
    {
        cplx v = ramanujan_gauss_principal(p.q, static_cast<std::int64_t>(p.a)) * fourier_M(N_, theta);
        if (auto it = exceptional_.find(p.q); it != exceptional_.end())
            v -= gauss_sum_bruteforce(it->second.chi, static_cast<std::int64_t>(p.a)) *
                 fourier_kernel(kernels_.at(p.q), theta);
        return v;
    }

    /// Level-s term at xi. For s >= 1 only the nearest a/q per denominator
    /// can reach the eta_s support, since 1/(2q) exceeds its radius.
    cplx level(unsigned s, double xi) const
    {
        if (s == 0) {
            const double theta = wrap_unit(xi);
            return approximant({1, 1, 0}, theta) * eta(theta);
        }
        if (s > max_arc_level) throw capacity_error("arc level too large");
        const double radius = eta_s_radius(s);
        cplx acc{0.0, 0.0};
        const double x = xi - std::floor(xi);
        for (std::uint64_t q = std::uint64_t{1} << s; q < (std::uint64_t{2} << s); ++q) {
            if (!admissible_denominator(q)) continue;
            auto a = static_cast<std::uint64_t>(std::llround(x * static_cast<double>(q))) % q;
            if (a == 0) a = q;
            if (std::gcd(a, q) != 1) continue;
            const double theta = wrap_unit(x - static_cast<double>(a) / static_cast<double>(q));
            if (std::abs(theta) >= radius) continue;
            acc += approximant({a, q, s}, theta) * eta_s(s, theta);
        }
        return acc;
    }

    cplx levels(unsigned s_lo, unsigned s_hi, double xi) const
    {
        cplx acc{0.0, 0.0};
        for (unsigned s = s_lo; s <= s_hi; ++s) acc += level(s, xi);
        return acc;
    }

    /// Adds the level-s term into `grid` by visiting each arc's window.
    void accumulate_level(unsigned s, MultiplierGrid& grid) const
    {
        const std::size_t G = grid.resolution();
        detail::check_grid(G);
        const double radius = eta_s_radius(s);
        const double g = static_cast<double>(G);
        for (const auto& p : enumerate_arcs(s)) {
            const double c = p.value();
            const auto lo = static_cast<std::int64_t>(std::ceil((c - radius) * g));
            const auto hi = static_cast<std::int64_t>(std::floor((c + radius) * g));
            for (std::int64_t j = lo; j <= hi; ++j) {
                const double theta = wrap_unit(static_cast<double>(j) / g - c);
                if (std::abs(theta) >= radius) continue;
                const double w = eta_s(s, theta);
                if (w == 0.0) continue;
                auto idx = j % static_cast<std::int64_t>(G);
                if (idx < 0) idx += static_cast<std::int64_t>(G);
                grid.values[static_cast<std::size_t>(idx)] += approximant(p, theta) * w;
            }
        }
    }

    MultiplierGrid levels_grid(unsigned s_lo, unsigned s_hi, std::size_t G) const
    {
        detail::check_grid(G);
        MultiplierGrid grid{std::vector<cplx>(G, cplx{0.0, 0.0})};
        for (unsigned s = s_lo; s <= s_hi; ++s) accumulate_level(s, grid);
        return grid;
    }

private:
    std::uint64_t N_;
    ExceptionalTerms exceptional_;
    std::map<std::uint64_t, Kernel> kernels_;
};

inline constexpr unsigned default_s_max = 6;
inline constexpr unsigned max_scale_exponent = 24;

namespace detail {

inline std::uint64_t dyadic(unsigned n)
{
    if (n > max_scale_exponent) throw capacity_error("scale exponent above 24");
    return std::uint64_t{1} << n;
}

inline unsigned pi_level_cap(unsigned n, double t)
{
    if (!(t > 0.0)) throw std::domain_error("t must be positive");
    if (!(static_cast<double>(n) > t)) throw std::domain_error("Pi_n^t requires n > t");
    return static_cast<unsigned>(std::floor(std::sqrt(t)));
}

}  // namespace detail

inline cplx nu_n_s(unsigned n, unsigned s, double xi, const ExceptionalTerms& ex = {})
{
    return MajorArcModel(detail::dyadic(n), ex).level(s, xi);
}

inline cplx nu_n(unsigned n, double xi, unsigned s_max = default_s_max, const ExceptionalTerms& ex = {})
{
    return MajorArcModel(detail::dyadic(n), ex).levels(0, s_max, xi);
}

/// Sum of the levels 0 <= s <= sqrt(t); requires n > t.
inline cplx pi_n_t(unsigned n, double t, double xi, const ExceptionalTerms& ex = {})
{
    const unsigned cap = detail::pi_level_cap(n, t);
    return MajorArcModel(detail::dyadic(n), ex).levels(0, cap, xi);
}

inline MultiplierGrid nu_n_s_grid(unsigned n, unsigned s, std::size_t G, const ExceptionalTerms& ex = {})
{
    return MajorArcModel(detail::dyadic(n), ex).levels_grid(s, s, G);
}

inline MultiplierGrid nu_n_grid(unsigned n, std::size_t G, unsigned s_max = default_s_max,
                                const ExceptionalTerms& ex = {})
{
    return MajorArcModel(detail::dyadic(n), ex).levels_grid(0, s_max, G);
}

inline MultiplierGrid pi_n_t_grid(unsigned n, double t, std::size_t G, const ExceptionalTerms& ex = {})
{
    const unsigned cap = detail::pi_level_cap(n, t);
    return MajorArcModel(detail::dyadic(n), ex).levels_grid(0, cap, G);
}

// ---------------------------------------------------------------------------
// Error measurements
// ---------------------------------------------------------------------------

/// max over the grid of |m_{2^n} - nu_n|.
inline double approximation_error(unsigned n, std::size_t G, unsigned s_max = default_s_max,
                                  const ExceptionalTerms& ex = {})
{
    detail::check_grid(G);
    if (std::ldexp(1.0, static_cast<int>(n)) > static_cast<double>(G) * static_cast<double>(G))
        throw std::domain_error("grid resolution below 2^{n/2}");
    const auto N = detail::dyadic(n);
    const auto m = prime_multiplier_grid(N, G);
    const auto v = nu_n_grid(n, G, s_max, ex);
    double sup = 0.0;
    for (std::size_t j = 0; j < G; ++j) sup = std::max(sup, std::abs(m.values[j] - v.values[j]));
    return sup;
}

/// |m_N(xi) - L^{a,q}_N(xi - a/q)|, defined when q <= Q and |xi - a/q| <= Q/N.
inline double major_arc_error(std::uint64_t N, double Q, std::uint64_t a, std::uint64_t q, double xi,
                              const ExceptionalTerms& ex = {})
{
    if (N < 2) throw std::domain_error("major_arc_error needs N >= 2");
    if (q == 0 || static_cast<double>(q) > Q) throw std::domain_error("major_arc_error needs 1 <= q <= Q");
    if (a == 0 || a > q || std::gcd(a, q) != 1) throw std::domain_error("major_arc_error needs a in A_q");
    const double theta = wrap_unit(xi - static_cast<double>(a) / static_cast<double>(q));
    if (std::abs(theta) > Q / static_cast<double>(N))
        throw std::domain_error("major_arc_error needs |xi - a/q| <= Q/N");
    MajorArcModel model(N, ex);
    return std::abs(prime_multiplier(N, xi) - model.approximant({a, q, 0}, theta));
}

// ---------------------------------------------------------------------------
// Bound ratios
// ---------------------------------------------------------------------------

struct BoundRatio {
    std::string name;
    std::string description;
    double sup_ratio = 0.0;
    std::string argmax;  // parameters where the sup was attained
};

namespace detail {

inline double grid_distance(std::size_t j, std::size_t G)
{
    return std::abs(wrap_unit(static_cast<double>(j) / static_cast<double>(G)));
}

}  // namespace detail

/// sup over xi != 0 of |M_N^beta^(xi)| N |xi|.
inline double kernel_decay_ratio(std::uint64_t N, double beta, std::size_t G)
{
    const auto grid = fourier_kernel_grid(kernel_M_beta(N, beta), G);
    double sup = 0.0;
    for (std::size_t j = 1; j < G; ++j)
        sup = std::max(sup, std::abs(grid.values[j]) * static_cast<double>(N) * detail::grid_distance(j, G));
    return sup;
}

/// sup over xi != 0 of |1 - M_N^(xi)| / (N |xi|).
inline double kernel_smoothness_ratio(std::uint64_t N, std::size_t G)
{
    const auto grid = fourier_kernel_grid(kernel_M(N), G);
    double sup = 0.0;
    for (std::size_t j = 1; j < G; ++j)
        sup = std::max(sup, std::abs(1.0 - grid.values[j]) /
                                (static_cast<double>(N) * detail::grid_distance(j, G)));
    return sup;
}

/// sup of |M_N^beta^ - M_{2N}^beta^| / (min{(N|xi|)^{-1}, N|xi|} + (1-beta) N^{beta-1});
/// xi = 0 is skipped when beta = 1 (both sides vanish there).
inline double kernel_dyadic_difference_ratio(std::uint64_t N, double beta, std::size_t G)
{
    const auto a = fourier_kernel_grid(kernel_M_beta(N, beta), G);
    const auto b = fourier_kernel_grid(kernel_M_beta(2 * N, beta), G);
    const double nd = static_cast<double>(N);
    const double floor_term = (1.0 - beta) * std::pow(nd, beta - 1.0);
    double sup = 0.0;
    for (std::size_t j = 0; j < G; ++j) {
        const double x = nd * detail::grid_distance(j, G);
        const double rhs = (x == 0.0 ? 0.0 : std::min(1.0 / x, x)) + floor_term;
        if (rhs == 0.0) continue;
        sup = std::max(sup, std::abs(a.values[j] - b.values[j]) / rhs);
    }
    return sup;
}

/// sup over real characters mod q <= q_max and a in A_q of |G(chi, a)| phi(q) / sqrt(q0).
inline double gauss_sum_size_ratio(std::uint64_t q_max)
{
    double sup = 0.0;
    for (std::uint64_t q = 1; q <= q_max; ++q) {
        auto chars = enumerate_quadratic_characters(q);
        chars.push_back(principal_character(q));
        const auto roots = roots_of_unity(q);
        const double phi = static_cast<double>(euler_phi(q));
        for (const auto& chi : chars) {
            const double root_q0 = std::sqrt(static_cast<double>(conductor(chi).conductor));
            for (std::uint64_t a = 1; a <= q; ++a)
                if (std::gcd(a, q) == 1)
                    sup = std::max(sup, std::abs(gauss_sum_bruteforce(chi, static_cast<std::int64_t>(a), roots)) *
                                            phi / root_q0);
        }
    }
    return sup;
}

struct BoundRatioConfig {
    unsigned n_lo = 4, n_hi = 16;        // M_N decay/smoothness sweep, N = 2^n
    unsigned beta_n_lo = 6, beta_n_hi = 14;
    double decay_beta = 0.5;
    double difference_beta = 0.95;
    std::size_t grid = std::size_t{1} << 14;
    std::uint64_t gauss_q_max = 200;
};

/// Measured sup of LHS/RHS for each kernel and Gauss-sum bound.
inline std::vector<BoundRatio> bound_ratio_checks(const BoundRatioConfig& cfg = {})
{
    auto sweep = [&](unsigned lo, unsigned hi, auto&& f) {
        BoundRatio r;
        for (unsigned n = lo; n <= hi; ++n) {
            const double v = f(std::uint64_t{1} << n);
            if (v > r.sup_ratio) {
                r.sup_ratio = v;
                r.argmax = "N=2^" + std::to_string(n);
            }
        }
        return r;
    };
    std::vector<BoundRatio> out;
    auto decay = sweep(cfg.n_lo, cfg.n_hi, [&](std::uint64_t N) { return kernel_decay_ratio(N, 1.0, cfg.grid); });
    decay.name = "kernel_decay";
    decay.description = "|M_N^(xi)| N|xi|";
    out.push_back(decay);
    auto smooth = sweep(cfg.n_lo, cfg.n_hi, [&](std::uint64_t N) { return kernel_smoothness_ratio(N, cfg.grid); });
    smooth.name = "kernel_smoothness";
    smooth.description = "|1 - M_N^(xi)| / (N|xi|)";
    out.push_back(smooth);
    auto bdecay = sweep(cfg.beta_n_lo, cfg.beta_n_hi,
                        [&](std::uint64_t N) { return kernel_decay_ratio(N, cfg.decay_beta, cfg.grid); });
    bdecay.name = "kernel_beta_decay";
    bdecay.description = "|M_N^beta^(xi)| N|xi|, beta = " + std::to_string(cfg.decay_beta);
    out.push_back(bdecay);
    auto diff = sweep(cfg.beta_n_lo, cfg.beta_n_hi, [&](std::uint64_t N) {
        return kernel_dyadic_difference_ratio(N, cfg.difference_beta, cfg.grid);
    });
    diff.name = "kernel_dyadic_difference";
    diff.description = "|M_N^beta^ - M_2N^beta^| / (min{(N|xi|)^-1, N|xi|} + (1-beta)N^(beta-1)), beta = " +
                       std::to_string(cfg.difference_beta);
    out.push_back(diff);
    BoundRatio g;
    g.name = "gauss_sum_size";
    g.description = "|G(chi,a)| phi(q) / sqrt(q0)";
    g.sup_ratio = gauss_sum_size_ratio(cfg.gauss_q_max);
    g.argmax = "q<=" + std::to_string(cfg.gauss_q_max);
    out.push_back(g);
    return out;
}

}  // namespace primeavg
