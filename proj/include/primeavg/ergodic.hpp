#pragma once

/**
 * @file ergodic.hpp
 * @brief Prime-orbit averages on circle rotations and cyclic shifts, the
 * orbit-to-Z transference experiment, and convergence traces.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "primeavg/maximal.hpp"
#include "primeavg/ntheory.hpp"

namespace primeavg {

/**
 * x -> x + alpha mod 1, with alpha held as a continued-fraction convergent
 * p/q (q < 2^63). The orbit offset n alpha mod 1 is formed exactly as
 * (n p mod q)/q in 128-bit arithmetic, so there is no drift along the orbit.
 */
class CircleRotation {
public:
    using state_type = double;

    /// alpha = [0; a_1, a_2, ...]; stops at the last convergent with q < 2^63.
    static CircleRotation from_partial_quotients(const std::vector<std::uint64_t>& terms)
    {
        using u128 = unsigned __int128;
        const u128 limit = u128{1} << 63;
        u128 p_prev = 1, q_prev = 0, p = 0, q = 1;  // convergents h_{-1}/k_{-1}, h_0/k_0 of [0; ...]
        for (auto a : terms) {
            if (a == 0) throw std::domain_error("partial quotients after the first must be positive");
            const u128 pn = a * p + p_prev, qn = a * q + q_prev;
            if (qn >= limit) break;
            p_prev = p;
            q_prev = q;
            p = pn;
            q = qn;
        }
        return CircleRotation(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(q));
    }

    /// (sqrt 5 - 1)/2 = [0; 1, 1, 1, ...].
    static CircleRotation golden(unsigned depth = 200)
    {
        return from_partial_quotients(std::vector<std::uint64_t>(depth, 1));
    }

    /// sqrt 2 - 1 = [0; 2, 2, 2, ...].
    static CircleRotation sqrt2_minus_1(unsigned depth = 200)
    {
        return from_partial_quotients(std::vector<std::uint64_t>(depth, 2));
    }

    /// Continued fraction of a double, truncated at `depth` terms.
    static CircleRotation from_real(double alpha, unsigned depth = 40)
    {
        if (!(alpha >= 0.0 && alpha < 1.0)) throw std::domain_error("rotation number must lie in [0, 1)");
        std::vector<std::uint64_t> terms;
        long double x = alpha;
        for (unsigned i = 0; i < depth && x > 1e-18L; ++i) {
            const long double inv = 1.0L / x;
            const long double a = std::floor(inv);
            if (a > 1e18L) break;
            terms.push_back(static_cast<std::uint64_t>(a));
            x = inv - a;
        }
        return from_partial_quotients(terms);
    }

    static CircleRotation identity() { return CircleRotation(0, 1); }

    CircleRotation(std::uint64_t p, std::uint64_t q) : p_(p), q_(q)
    {
        if (q == 0 || p >= q) throw std::domain_error("rotation must be p/q with 0 <= p < q");
    }

    std::uint64_t numerator() const { return p_; }
    std::uint64_t denominator() const { return q_; }
    double alpha() const { return static_cast<double>(static_cast<long double>(p_) / q_); }

    /// T^n x.
    double iterate(double x, std::uint64_t n) const
    {
        using u128 = unsigned __int128;
        const auto r = static_cast<std::uint64_t>((u128{n} * p_) % q_);
        long double y = static_cast<long double>(x) + static_cast<long double>(r) / static_cast<long double>(q_);
        y -= std::floor(y);
        return static_cast<double>(y);
    }

private:
    std::uint64_t p_;
    std::uint64_t q_;
};

/// x -> x + 1 mod m on Z/m.
class CyclicShift {
public:
    using state_type = std::uint64_t;

    explicit CyclicShift(std::uint64_t m) : m_(m)
    {
        if (m == 0) throw std::domain_error("cyclic shift needs m >= 1");
    }

    std::uint64_t modulus() const { return m_; }
    std::uint64_t iterate(std::uint64_t x, std::uint64_t n) const { return (x % m_ + n % m_) % m_; }

private:
    std::uint64_t m_;
};

/// (1/pi(N)) sum_{p <= N} f(T^p x0).
template <class System, class Observable>
auto orbit_average(const System& sys, Observable&& f, typename System::state_type x0, std::uint64_t N)
{
    if (N < 2) throw std::domain_error("orbit_average needs N >= 2");
    const auto& table = shared_prime_table(N);
    using R = decltype(f(x0));
    R acc{};
    for (auto p : table.primes()) {
        if (p > N) break;
        acc += f(sys.iterate(x0, p));
    }
    return acc / static_cast<double>(table.count(N));
}

// ---------------------------------------------------------------------------
// Transference
// ---------------------------------------------------------------------------

struct TransferenceResult {
    std::vector<std::int64_t> F;          // {0 <= n <= R : T^n x0 in A}
    double lambda = 0.0;
    std::uint64_t orbit_count = 0;        // #{0 <= n <= R-L : sup_{N<=L} A_N(1_A)(T^n x0) > lambda}
    std::uint64_t z_count = 0;            // #{0 <= n <= R-L : sup_{N<=L} A_N(1_F)(n) > lambda}
    std::uint64_t identity_checks = 0;
    std::uint64_t identity_violations = 0;
};

/**
 * Samples the orbit of x0 up to time R into F and compares superlevel counts
 * of the all-scale maximal function over 2 <= N <= L on both sides. The
 * orbit side evaluates T^{n+p} x0 directly; the Z side runs on 1_F only.
 * Every (n, N) pair with n <= R - L is also checked hit-for-hit.
 */
template <class System>
TransferenceResult transference_sample(const System& sys,
                                       const std::function<bool(typename System::state_type)>& in_A,
                                       typename System::state_type x0, std::uint64_t R, std::uint64_t L,
                                       double lambda)
{
    if (L < 2 || !(L < R)) throw std::domain_error("transference needs 2 <= L < R");
    if (!(lambda > 0.0)) throw std::domain_error("lambda must be positive");
    TransferenceResult out;
    out.lambda = lambda;
    std::vector<char> member(R + 1, 0);
    for (std::uint64_t n = 0; n <= R; ++n)
        if (in_A(sys.iterate(x0, n))) {
            member[n] = 1;
            out.F.push_back(static_cast<std::int64_t>(n));
        }

    const auto& table = shared_prime_table(L);
    std::vector<std::uint64_t> primes;
    for (auto p : table.primes()) {
        if (p > L) break;
        primes.push_back(p);
    }
    for (std::uint64_t n = 0; n + L <= R; ++n) {
        std::uint64_t orbit_hits = 0, z_hits = 0;
        bool exceeded = false;
        for (std::size_t k = 0; k < primes.size(); ++k) {
            orbit_hits += in_A(sys.iterate(x0, n + primes[k])) ? 1 : 0;
            z_hits += member[n + primes[k]];
            // both sides are constant for N in [p_k, p_{k+1})
            const std::uint64_t next = k + 1 < primes.size() ? primes[k + 1] : L + 1;
            out.identity_checks += next - primes[k];
            if (orbit_hits != z_hits) out.identity_violations += next - primes[k];
            exceeded = exceeded || static_cast<double>(orbit_hits) > lambda * static_cast<double>(k + 1);
        }
        out.orbit_count += exceeded;
    }

    if (!out.F.empty()) {
        const auto sup = all_scale_prime_sup(Signal::indicator(out.F), L, PrimeWeighting::uniform);
        for (std::uint64_t n = 0; n + L <= R; ++n)
            out.z_count += std::abs(sup.at(static_cast<std::int64_t>(n))) > lambda;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Convergence traces
// ---------------------------------------------------------------------------

template <class Value>
struct OrbitAverageTrace {
    std::vector<std::uint64_t> scales;          // 2^n
    std::vector<Value> values;                  // A_{2^n} f(x0)
    std::vector<double> successive_difference;  // |v_n - v_{n-1}|, 0 for the first row
    std::optional<Value> reference;
    std::vector<double> distance_to_reference;
};

/// A_{2^n} f(x0) for n = 1..n_max in one pass over the primes.
template <class System, class Observable>
auto convergence_diagnostic(const System& sys, Observable&& f, typename System::state_type x0, unsigned n_max,
                            std::optional<decltype(f(x0))> reference = std::nullopt)
{
    using V = decltype(f(x0));
    if (n_max < 1 || n_max > max_dyadic_exponent) throw capacity_error("n_max must lie in [1, 24]");
    const std::uint64_t top = std::uint64_t{1} << n_max;
    const auto& table = shared_prime_table(top);
    OrbitAverageTrace<V> trace;
    trace.reference = reference;
    V acc{};
    std::uint64_t count = 0;
    unsigned n = 1;
    auto emit = [&](std::uint64_t N) {
        const V v = acc / static_cast<double>(count);
        trace.successive_difference.push_back(trace.values.empty() ? 0.0 : std::abs(v - trace.values.back()));
        trace.scales.push_back(N);
        trace.values.push_back(v);
        if (reference) trace.distance_to_reference.push_back(std::abs(v - *reference));
    };
    for (auto p : table.primes()) {
        while (n <= n_max && p > (std::uint64_t{1} << n)) emit(std::uint64_t{1} << n++);
        if (n > n_max) break;
        acc += f(sys.iterate(x0, p));
        ++count;
    }
    while (n <= n_max) emit(std::uint64_t{1} << n++);
    return trace;
}

/// Kolmogorov-Smirnov distance between {T^n x0 : 0 <= n < count} and the uniform law.
inline double ks_distance_uniform(const CircleRotation& rot, double x0, std::uint64_t count)
{
    if (count == 0) throw std::domain_error("need at least one orbit point");
    std::vector<double> pts(count);
    for (std::uint64_t n = 0; n < count; ++n) pts[n] = rot.iterate(x0, n);
    std::sort(pts.begin(), pts.end());
    double d = 0.0;
    const auto c = static_cast<double>(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        d = std::max(d, static_cast<double>(i + 1) / c - pts[i]);
        d = std::max(d, pts[i] - static_cast<double>(i) / c);
    }
    return d;
}

/// Half-open arc [a, b) of the circle; wraps when a > b.
inline std::function<bool(double)> circle_arc(double a, double b)
{
    if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) throw std::domain_error("arc endpoints must lie in [0, 1]");
    if (a <= b) return [a, b](double x) { return x >= a && x < b; };
    return [a, b](double x) { return x >= a || x < b; };
}

}  // namespace primeavg
