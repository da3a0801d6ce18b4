#pragma once

/**
 * @file maximal.hpp
 * @brief Prime averages of finitely supported signals on Z, their dyadic
 * maximal functions, and the distributional experiments built on them.
 *
 * Two evaluation regimes:
 *  - Spatial operators with finite kernels (prime averages) are linear
 *    correlations g(x) = sum_n w_n f(x + n), done directly or by zero-padded
 *    FFT with no wraparound.
 *  - Multiplier operators (smooth cutoffs, major-arc multipliers) act on a
 *    periodic frame Z/P large enough that the kernels' tails are negligible;
 *    g = IFFT(m(j/P) * FFT(f)) / P with the multiplier sampled on the frame.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "primeavg/errors.hpp"
#include "primeavg/fft.hpp"
#include "primeavg/multipliers.hpp"
#include "primeavg/ntheory.hpp"

namespace primeavg {

// ---------------------------------------------------------------------------
// Signals
// ---------------------------------------------------------------------------

/// Finitely supported f: Z -> C; values[i] = f(offset + i).
struct Signal {
    std::int64_t offset = 0;
    std::vector<cplx> values;

    std::size_t size() const { return values.size(); }
    std::int64_t first() const { return offset; }
    std::int64_t end() const { return offset + static_cast<std::int64_t>(values.size()); }

    cplx at(std::int64_t x) const
    {
        if (x < offset || x >= end()) return {0.0, 0.0};
        return values[static_cast<std::size_t>(x - offset)];
    }

    double lp_norm(double p) const
    {
        if (!(p >= 1.0)) throw std::domain_error("lp_norm needs p >= 1");
        long double acc = 0.0L;
        for (const auto& v : values) acc += std::pow(static_cast<long double>(std::abs(v)), p);
        return static_cast<double>(std::pow(acc, 1.0L / p));
    }

    double l1_norm() const { return lp_norm(1.0); }
    double l2_norm() const { return lp_norm(2.0); }

    double sup_norm() const
    {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }

    Signal shifted(std::int64_t k) const { return Signal{offset + k, values}; }

    static Signal delta(std::int64_t x = 0) { return Signal{x, {cplx{1.0, 0.0}}}; }

    /// Indicator of a finite set; duplicates are ignored.
    static Signal indicator(std::vector<std::int64_t> set)
    {
        if (set.empty()) throw std::domain_error("indicator of an empty set");
        std::sort(set.begin(), set.end());
        Signal s;
        s.offset = set.front();
        s.values.assign(static_cast<std::size_t>(set.back() - set.front() + 1), cplx{0.0, 0.0});
        for (auto x : set) s.values[static_cast<std::size_t>(x - s.offset)] = 1.0;
        return s;
    }
};

/// Pointwise sum over the union of supports.
inline Signal operator+(const Signal& a, const Signal& b)
{
    if (a.values.empty()) return b;
    if (b.values.empty()) return a;
    Signal out;
    out.offset = std::min(a.offset, b.offset);
    out.values.assign(static_cast<std::size_t>(std::max(a.end(), b.end()) - out.offset), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < a.size(); ++i) out.values[static_cast<std::size_t>(a.offset - out.offset) + i] += a.values[i];
    for (std::size_t i = 0; i < b.size(); ++i) out.values[static_cast<std::size_t>(b.offset - out.offset) + i] += b.values[i];
    return out;
}

/// #{x : |g(x)| > lambda}.
inline std::uint64_t distribution_count(const Signal& g, double lambda)
{
    if (!(lambda > 0.0)) throw std::domain_error("distribution_count needs lambda > 0");
    std::uint64_t c = 0;
    for (const auto& v : g.values) c += std::abs(v) > lambda;
    return c;
}

/// sup_lambda lambda #{|v| > lambda} = max_k k v_(k) over the decreasing
/// rearrangement of |v|.
inline double weak_l1_norm(std::vector<double> magnitudes)
{
    std::sort(magnitudes.begin(), magnitudes.end(), std::greater<>());
    double best = 0.0;
    for (std::size_t k = 0; k < magnitudes.size(); ++k)
        best = std::max(best, static_cast<double>(k + 1) * magnitudes[k]);
    return best;
}

inline double weak_l1_norm(const Signal& g)
{
    std::vector<double> m(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) m[i] = std::abs(g.values[i]);
    return weak_l1_norm(std::move(m));
}

/// Random complex signal with independent standard Gaussian parts, scaled to unit l2 norm.
inline Signal random_unit_signal(std::size_t length, std::uint64_t seed, std::int64_t offset = 0)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Signal s{offset, std::vector<cplx>(length)};
    for (auto& v : s.values) v = {gauss(rng), gauss(rng)};
    const double n = s.l2_norm();
    for (auto& v : s.values) v /= n;
    return s;
}

// ---------------------------------------------------------------------------
// Spatial correlation
// ---------------------------------------------------------------------------

/// Weights w[n] at sites n in [1, N] (w[0] unused).
using SiteWeights = std::vector<double>;

/// g(x) = sum_n w[n] f(x + n), on [f.first() - N, f.end() - 1).
inline Signal correlate_direct(const SiteWeights& w, const Signal& f)
{
    const auto N = static_cast<std::int64_t>(w.size()) - 1;
    if (N < 1 || f.values.empty()) return Signal{f.offset, {}};
    Signal g;
    g.offset = f.offset - N;
    g.values.assign(f.size() + static_cast<std::size_t>(N) - 1, cplx{0.0, 0.0});
    for (std::int64_t n = 1; n <= N; ++n) {
        const double wn = w[static_cast<std::size_t>(n)];
        if (wn == 0.0) continue;
        // f(x + n) lives at f-index x + n - f.offset; g-index = x - g.offset
        const auto shift = static_cast<std::size_t>(N - n);
        for (std::size_t i = 0; i < f.size(); ++i) g.values[shift + i] += wn * f.values[i];
    }
    return g;
}

/// Same output as correlate_direct, by zero-padded FFT.
inline Signal correlate_fft(const SiteWeights& w, const Signal& f)
{
    const auto N = w.size() - 1;
    if (N < 1 || f.values.empty()) return Signal{f.offset, {}};
    const std::size_t out_len = f.size() + N - 1;
    const std::size_t P = next_power_of_two(out_len);
    if (P > max_fft_length) throw capacity_error("correlation FFT too large");
    std::vector<cplx> a(P, cplx{0.0, 0.0}), k(P, cplx{0.0, 0.0});
    std::copy(f.values.begin(), f.values.end(), a.begin());
    for (std::size_t n = 1; n <= N; ++n) k[N - n] = w[n];
    auto A = fft_forward(a);
    const auto K = fft_forward(k);
    for (std::size_t j = 0; j < P; ++j) A[j] *= K[j];
    auto g = fft_backward(A);
    Signal out;
    out.offset = f.offset - static_cast<std::int64_t>(N);
    out.values.assign(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(out_len));
    for (auto& v : out.values) v /= static_cast<double>(P);
    return out;
}

inline Signal correlate(const SiteWeights& w, const Signal& f)
{
    std::size_t nonzero = 0;
    for (double x : w) nonzero += x != 0.0;
    return nonzero * f.size() <= (std::size_t{1} << 20) ? correlate_direct(w, f) : correlate_fft(w, f);
}

enum class PrimeWeighting { uniform, logarithmic };

/// 1/pi(N) (uniform) or log p / theta(N) (logarithmic) at primes p <= N.
inline SiteWeights prime_site_weights(std::uint64_t N, PrimeWeighting kind, const PrimeTable& table)
{
    if (N < 2) throw std::domain_error("prime averages need N >= 2");
    if (N > max_fft_length) throw capacity_error("prime average scale too large");
    SiteWeights w(N + 1, 0.0);
    const double norm = kind == PrimeWeighting::uniform ? static_cast<double>(table.count(N)) : table.theta(N);
    for (const auto p : table.primes()) {
        if (p > N) break;
        w[p] = (kind == PrimeWeighting::uniform ? 1.0 : std::log(static_cast<double>(p))) / norm;
    }
    return w;
}

/// A_N f(x) = pi(N)^{-1} sum_{p <= N} f(x + p).
inline Signal average_primes(std::uint64_t N, const Signal& f)
{
    return correlate(prime_site_weights(N, PrimeWeighting::uniform, shared_prime_table(N)), f);
}

/// M_N f(x) = theta(N)^{-1} sum_{p <= N} f(x + p) log p.
inline Signal average_primes_weighted(std::uint64_t N, const Signal& f)
{
    return correlate(prime_site_weights(N, PrimeWeighting::logarithmic, shared_prime_table(N)), f);
}

// ---------------------------------------------------------------------------
// Periodic frames for multiplier operators
// ---------------------------------------------------------------------------

/// f placed at frame index `lead` of a length-P frame, with its spectrum.
class Frame {
public:
    Frame(const Signal& f, std::size_t lead, std::size_t P) : origin_(f.offset - static_cast<std::int64_t>(lead)), P_(P)
    {
        if (!is_power_of_two(P) || P > max_fft_length) throw capacity_error("frame size must be a power of two <= 2^26");
        if (lead + f.size() > P) throw capacity_error("signal does not fit in frame");
        std::vector<cplx> buf(P, cplx{0.0, 0.0});
        std::copy(f.values.begin(), f.values.end(), buf.begin() + static_cast<std::ptrdiff_t>(lead));
        spectrum_ = fft_forward(buf);
    }

    std::size_t size() const { return P_; }
    std::int64_t origin() const { return origin_; }
    const std::vector<cplx>& spectrum() const { return spectrum_; }

    /// F^{-1}(m f^) on the frame; multiplier sampled at j/P.
    std::vector<cplx> apply(const MultiplierGrid& m) const
    {
        if (m.resolution() != P_) throw std::domain_error("multiplier grid does not match frame");
        std::vector<cplx> buf(P_);
        for (std::size_t j = 0; j < P_; ++j) buf[j] = m.values[j] * spectrum_[j];
        auto out = fft_backward(buf);
        for (auto& v : out) v /= static_cast<double>(P_);
        return out;
    }

    Signal as_signal(std::vector<cplx> values) const { return Signal{origin_, std::move(values)}; }

private:
    std::int64_t origin_;
    std::size_t P_;
    std::vector<cplx> spectrum_;
};

/// eta_s sampled on a frame of size P.
inline MultiplierGrid eta_s_grid(unsigned s, std::size_t P)
{
    MultiplierGrid g{std::vector<cplx>(P)};
    for (std::size_t j = 0; j < P; ++j)
        g.values[j] = eta_s(s, wrap_unit(static_cast<double>(j) / static_cast<double>(P)));
    return g;
}

/// Padding on each side of the frame for multipliers cut off at level s.
/// The eta_s kernel has width about 2^{4s}; beyond two widths less than
/// 1e-4 of its l2 mass remains, so wraparound is negligible.
inline std::size_t level_tail(unsigned s) { return std::size_t{2} << (4 * s); }

// ---------------------------------------------------------------------------
// Dyadic maximal functions
// ---------------------------------------------------------------------------

enum class Family {
    prime_average,           // A_{2^n}, n >= 1
    weighted_prime_average,  // M_{2^n}, n >= 1
    kernel_smoothed,         // M^beta_{2^n} applied to F^{-1}(eta_s f^), n >= 0
    major_arc_level,         // F^{-1}(nu_n^s f^), n >= 1
    major_arc_truncated,     // F^{-1}(Pi_n^t f^), n > t
};

struct FamilySpec {
    Family kind = Family::weighted_prime_average;
    double beta = 1.0;
    unsigned s = 0;
    double t = 1.0;
    ExceptionalTerms exceptional;
};

inline constexpr unsigned max_dyadic_exponent = 24;

namespace detail {

inline unsigned first_scale(const FamilySpec& fam)
{
    switch (fam.kind) {
    case Family::kernel_smoothed: return 0;
    case Family::major_arc_truncated: return static_cast<unsigned>(std::floor(fam.t)) + 1;
    default: return 1;
    }
}

inline unsigned multiplier_level(const FamilySpec& fam)
{
    return fam.kind == Family::major_arc_truncated ? static_cast<unsigned>(std::floor(std::sqrt(fam.t))) : fam.s;
}

/// Multiplier of the n-th member of a multiplier family, sampled on P points.
inline MultiplierGrid family_multiplier(const FamilySpec& fam, unsigned n, std::size_t P)
{
    const std::uint64_t N = std::uint64_t{1} << n;
    switch (fam.kind) {
    case Family::kernel_smoothed: {
        auto m = fourier_kernel_grid(kernel_M_beta(N, fam.beta), P);
        const auto e = eta_s_grid(fam.s, P);
        for (std::size_t j = 0; j < P; ++j) m.values[j] *= e.values[j];
        return m;
    }
    case Family::major_arc_level: return MajorArcModel(N, fam.exceptional).levels_grid(fam.s, fam.s, P);
    case Family::major_arc_truncated:
        return MajorArcModel(N, fam.exceptional).levels_grid(0, multiplier_level(fam), P);
    default: throw std::logic_error("not a multiplier family");
    }
}

}  // namespace detail

/// sup over first_scale <= n <= n_max of |op_{2^n} f|.
///
/// Prime-average families return the exact linear maximal function on
/// [f.first() - 2^{n_max}, f.end() - 1). Multiplier families return values on
/// a periodic frame padded by 2^{n_max} plus the kernel tail allowance.
inline Signal maximal_dyadic(const Signal& f, const FamilySpec& fam, unsigned n_max)
{
    if (n_max > max_dyadic_exponent) throw capacity_error("n_max above 24");
    if (f.values.empty()) throw std::domain_error("maximal function of an empty signal");
    const unsigned n_lo = detail::first_scale(fam);
    const std::uint64_t N_max = std::uint64_t{1} << n_max;

    if (fam.kind == Family::prime_average || fam.kind == Family::weighted_prime_average) {
        const auto kind = fam.kind == Family::prime_average ? PrimeWeighting::uniform : PrimeWeighting::logarithmic;
        const auto& table = shared_prime_table(N_max);
        Signal out;
        out.offset = f.offset - static_cast<std::int64_t>(N_max);
        out.values.assign(f.size() + N_max - 1, cplx{0.0, 0.0});
        const std::size_t P = next_power_of_two(f.size() + N_max);
        if (P > max_fft_length) throw capacity_error("maximal FFT frame too large");
        std::vector<cplx> a(P, cplx{0.0, 0.0});
        std::copy(f.values.begin(), f.values.end(), a.begin());
        const auto A = fft_forward(a);
        for (unsigned n = std::max(n_lo, 1u); n <= n_max; ++n) {
            const auto w = prime_site_weights(std::uint64_t{1} << n, kind, table);
            // every scale is aligned to the common output offset f.offset - N_max
            std::vector<cplx> k(P, cplx{0.0, 0.0});
            for (std::size_t m = 1; m < w.size(); ++m) k[N_max - m] = w[m];
            auto K = fft_forward(k);
            for (std::size_t j = 0; j < P; ++j) K[j] *= A[j];
            const auto g = fft_backward(K);
            for (std::size_t i = 0; i < out.size(); ++i)
                out.values[i] = std::max(out.values[i].real(), std::abs(g[i]) / static_cast<double>(P));
        }
        return out;
    }

    if (fam.kind == Family::major_arc_truncated && !(fam.t > 0.0)) throw std::domain_error("t must be positive");
    const std::size_t tail = level_tail(detail::multiplier_level(fam));
    const std::size_t lead = N_max + tail;
    const std::size_t P = next_power_of_two(lead + f.size() + tail);
    if (P > max_fft_length) throw capacity_error("maximal frame above 2^26");
    const Frame frame(f, lead, P);
    std::vector<cplx> acc(P, cplx{0.0, 0.0});
    for (unsigned n = n_lo; n <= n_max; ++n) {
        const auto g = frame.apply(detail::family_multiplier(fam, n, P));
        for (std::size_t i = 0; i < P; ++i) acc[i] = std::max(acc[i].real(), std::abs(g[i]));
    }
    return frame.as_signal(std::move(acc));
}

// ---------------------------------------------------------------------------
// All-scale sup for the partial-summation comparison
// ---------------------------------------------------------------------------

/// sup over 2 <= N <= N_max of |A_N f(x)| (uniform) or |M_N f(x)|
/// (logarithmic), over all integers N. The averages only change at primes,
/// so the sup is a running maximum over prime prefixes.
inline Signal all_scale_prime_sup(const Signal& f, std::uint64_t N_max, PrimeWeighting kind)
{
    if (N_max < 2) throw std::domain_error("N_max must be at least 2");
    const auto& table = shared_prime_table(N_max);
    std::vector<std::uint64_t> primes;
    for (auto p : table.primes()) {
        if (p > N_max) break;
        primes.push_back(p);
    }
    Signal out;
    out.offset = f.offset - static_cast<std::int64_t>(N_max);
    out.values.assign(f.size() + N_max - 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::int64_t x = out.offset + static_cast<std::int64_t>(i);
        cplx running{0.0, 0.0};
        long double norm = 0.0L;
        double sup = 0.0;
        for (std::size_t k = 0; k < primes.size(); ++k) {
            const double w = kind == PrimeWeighting::uniform ? 1.0 : std::log(static_cast<double>(primes[k]));
            running += w * f.at(x + static_cast<std::int64_t>(primes[k]));
            norm += w;
            sup = std::max(sup, std::abs(running) / static_cast<double>(norm));
        }
        out.values[i] = sup;
    }
    return out;
}

/// theta(N)/log N + sum_{n=2}^{N-1} theta(n) (1/log n - 1/log(n+1)); equals pi(N).
inline double partial_summation_bracket(std::uint64_t N, const PrimeTable& table)
{
    if (N < 2) throw std::domain_error("bracket needs N >= 2");
    long double acc = table.theta(N) / std::log(static_cast<long double>(N));
    for (std::uint64_t n = 2; n < N; ++n)
        acc += table.theta(n) * (1.0L / std::log(static_cast<long double>(n)) -
                                 1.0L / std::log(static_cast<long double>(n + 1)));
    return static_cast<double>(acc);
}

// ---------------------------------------------------------------------------
// Weak-type sweeps over indicator functions
// ---------------------------------------------------------------------------

struct WeakTypeReport {
    std::string set_descriptor;
    std::size_t set_size = 0;
    unsigned n_max = 0;
    std::vector<double> lambda_grid;
    std::vector<std::uint64_t> counts;
    std::vector<double> normalized;  // lambda count / (log^2(e/lambda) |F|)

    double max_normalized() const
    {
        double m = 0.0;
        for (double v : normalized) m = std::max(m, v);
        return m;
    }
};

/// 2^{-j} for j = 1..J.
inline std::vector<double> geometric_lambda_grid(unsigned J)
{
    std::vector<double> g;
    for (unsigned j = 1; j <= J; ++j) g.push_back(std::ldexp(1.0, -static_cast<int>(j)));
    return g;
}

/// For each x, max over 1 <= n <= n_max of A_{2^n}(1_F)(x), from exact
/// integer hit counts #{p <= 2^n : x + p in F}.
inline Signal dyadic_prime_average_max_indicator(const std::vector<std::int64_t>& F, unsigned n_max)
{
    if (F.empty()) throw std::domain_error("weak-type sweep needs a nonempty set");
    if (n_max < 1 || n_max > max_dyadic_exponent) throw capacity_error("n_max must lie in [1, 24]");
    const auto f = Signal::indicator(F);
    const std::uint64_t N_max = std::uint64_t{1} << n_max;
    const auto& table = shared_prime_table(N_max);
    const std::size_t out_len = f.size() + N_max - 1;
    const std::size_t P = next_power_of_two(f.size() + N_max);
    if (P > max_fft_length) throw capacity_error("weak-type FFT frame too large");
    std::vector<double> a(P, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) a[i] = f.values[i].real();
    const auto A = rfft(a);
    Signal best;
    best.offset = f.offset - static_cast<std::int64_t>(N_max);
    best.values.assign(out_len, cplx{0.0, 0.0});
    std::vector<double> k(P, 0.0);
    std::uint64_t lo = 0;
    for (unsigned n = 1; n <= n_max; ++n) {
        const std::uint64_t N = std::uint64_t{1} << n;
        // adds primes in (N/2, N]; k accumulates the full prime indicator up to N
        for (auto p : table.primes()) {
            if (p > N) break;
            if (p > lo) k[N_max - p] = 1.0;
        }
        lo = N;
        auto K = rfft(k);
        for (std::size_t j = 0; j < K.size(); ++j) K[j] *= A[j];
        const auto g = irfft(K, P);
        const double pi_n = static_cast<double>(table.count(N));
        for (std::size_t i = 0; i < out_len; ++i) {
            const double raw = g[i] / static_cast<double>(P);
            const double hits = std::nearbyint(raw);
            if (std::abs(raw - hits) > 0.25) throw std::runtime_error("FFT hit count lost integrality");
            best.values[i] = std::max(best.values[i].real(), hits / pi_n);
        }
    }
    return best;
}

/// Counts |{x : sup_n A_{2^n}(1_F)(x) > lambda}| for each lambda.
inline WeakTypeReport weak_type_sweep(const std::vector<std::int64_t>& F, const std::vector<double>& lambdas,
                                      unsigned n_max, std::string descriptor = "custom")
{
    if (F.empty()) throw std::domain_error("weak-type sweep needs a nonempty set");
    std::vector<std::int64_t> sorted = F;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const auto best = dyadic_prime_average_max_indicator(sorted, n_max);
    std::vector<double> values(best.size());
    for (std::size_t i = 0; i < best.size(); ++i) values[i] = best.values[i].real();
    std::sort(values.begin(), values.end());
    WeakTypeReport r;
    r.set_descriptor = std::move(descriptor);
    r.set_size = sorted.size();
    r.n_max = n_max;
    for (double lambda : lambdas) {
        if (!(lambda > 0.0)) throw std::domain_error("lambda must be positive");
        const auto count = static_cast<std::uint64_t>(values.end() - std::upper_bound(values.begin(), values.end(), lambda));
        const double L = std::log(std::exp(1.0) / lambda);
        r.lambda_grid.push_back(lambda);
        r.counts.push_back(count);
        r.normalized.push_back(lambda * static_cast<double>(count) / (L * L * static_cast<double>(r.set_size)));
    }
    return r;
}

enum class SetFamily { interval, random, primes, progression };

inline SetFamily parse_set_family(const std::string& name)
{
    if (name == "interval") return SetFamily::interval;
    if (name == "random") return SetFamily::random;
    if (name == "primes") return SetFamily::primes;
    if (name == "ap") return SetFamily::progression;
    throw std::domain_error("unknown set family '" + name + "'");
}

inline std::string to_string(SetFamily f)
{
    switch (f) {
    case SetFamily::interval: return "interval";
    case SetFamily::random: return "random";
    case SetFamily::primes: return "primes";
    case SetFamily::progression: return "ap";
    }
    return "?";
}

/**
 * Test sets with exactly `size` elements:
 *  interval     [0, size)
 *  random       `size` distinct points of [0, size/density), uniformly chosen
 *  primes       the first `size` primes
 *  progression  {0, stride, ..., (size-1) stride}
 */
inline std::vector<std::int64_t> make_test_set(SetFamily family, std::size_t size, std::uint64_t seed = 1,
                                               double density = 0.125, std::int64_t stride = 3)
{
    if (size == 0) throw std::domain_error("test set must be nonempty");
    std::vector<std::int64_t> out;
    out.reserve(size);
    switch (family) {
    case SetFamily::interval:
        for (std::size_t i = 0; i < size; ++i) out.push_back(static_cast<std::int64_t>(i));
        break;
    case SetFamily::random: {
        if (!(density > 0.0 && density <= 1.0)) throw std::domain_error("density must lie in (0, 1]");
        const auto range = static_cast<std::size_t>(std::ceil(static_cast<double>(size) / density));
        std::vector<std::int64_t> pool(range);
        for (std::size_t i = 0; i < range; ++i) pool[i] = static_cast<std::int64_t>(i);
        std::mt19937_64 rng(seed);
        // partial Fisher-Yates
        for (std::size_t i = 0; i < size; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, range - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        out.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
        std::sort(out.begin(), out.end());
        break;
    }
    case SetFamily::primes: {
        std::uint64_t limit = 64;
        while (shared_prime_table(limit).count(limit) < size) limit *= 2;
        const auto& t = shared_prime_table(limit);
        for (std::size_t i = 0; i < size; ++i) out.push_back(static_cast<std::int64_t>(t.primes()[i]));
        break;
    }
    case SetFamily::progression:
        if (stride <= 0) throw std::domain_error("progression stride must be positive");
        for (std::size_t i = 0; i < size; ++i) out.push_back(static_cast<std::int64_t>(i) * stride);
        break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Residue-class equidistribution
// ---------------------------------------------------------------------------

struct ResidueMeasurement {
    std::uint64_t Q = 1;
    std::uint64_t r = 1;
    double weak_norm = 0.0;        // sup_lambda lambda |{x : sup_n |M^beta_{2^n} g(Qx + r)| > lambda}|
    double l1_norm = 0.0;          // sum_x |g(Qx + r)|, g = F^{-1}(eta_s f^)
    double ratio() const { return l1_norm > 0.0 ? weak_norm / l1_norm : 0.0; }
};

/// Maximal function of M^beta_{2^n} * F^{-1}(eta_s f^) for n = 0..n_max
/// together with g = F^{-1}(eta_s f^) itself, on a common frame.
struct SmoothedMaximal {
    Signal filtered;
    Signal maximal;
};

inline SmoothedMaximal smoothed_maximal(const Signal& f, unsigned s, double beta, unsigned n_max)
{
    if (n_max > max_dyadic_exponent) throw capacity_error("n_max above 24");
    const std::size_t tail = level_tail(s);
    const std::size_t lead = (std::size_t{1} << n_max) + tail;
    const std::size_t P = next_power_of_two(lead + f.size() + tail);
    if (P > max_fft_length) throw capacity_error("smoothing frame above 2^26");
    const Frame frame(f, lead, P);
    SmoothedMaximal out;
    out.filtered = frame.as_signal(frame.apply(eta_s_grid(s, P)));
    FamilySpec fam;
    fam.kind = Family::kernel_smoothed;
    fam.s = s;
    fam.beta = beta;
    std::vector<cplx> acc(P, cplx{0.0, 0.0});
    for (unsigned n = 0; n <= n_max; ++n) {
        const auto g = frame.apply(detail::family_multiplier(fam, n, P));
        for (std::size_t i = 0; i < P; ++i) acc[i] = std::max(acc[i].real(), std::abs(g[i]));
    }
    out.maximal = frame.as_signal(std::move(acc));
    return out;
}

/// Restriction x -> g(Qx + r) of the frame values, as magnitudes.
inline std::vector<double> residue_slice(const Signal& g, std::uint64_t Q, std::uint64_t r)
{
    std::vector<double> out;
    const auto q = static_cast<std::int64_t>(Q);
    const auto rr = static_cast<std::int64_t>(r);
    // first frame point congruent to r mod Q
    std::int64_t y = g.first() + ((rr - g.first()) % q + q) % q;
    for (; y < g.end(); y += q) out.push_back(std::abs(g.at(y)));
    return out;
}

inline ResidueMeasurement residue_equidistribution(const SmoothedMaximal& sm, std::uint64_t Q, std::uint64_t r,
                                                   unsigned s)
{
    if (Q < 1 || static_cast<double>(Q) > std::ldexp(1.0, 2 * static_cast<int>(s)))
        throw std::domain_error("residue experiment needs 1 <= Q <= 2^{2s}");
    if (r < 1 || r > Q) throw std::domain_error("residue must lie in [1, Q]");
    ResidueMeasurement m;
    m.Q = Q;
    m.r = r;
    m.weak_norm = weak_l1_norm(residue_slice(sm.maximal, Q, r));
    for (double v : residue_slice(sm.filtered, Q, r)) m.l1_norm += v;
    return m;
}

inline ResidueMeasurement residue_equidistribution(const Signal& f, std::uint64_t Q, std::uint64_t r, unsigned s,
                                                   double beta, unsigned n_max)
{
    if (Q < 1 || static_cast<double>(Q) > std::ldexp(1.0, 2 * static_cast<int>(s)))
        throw std::domain_error("residue experiment needs 1 <= Q <= 2^{2s}");
    return residue_equidistribution(smoothed_maximal(f, s, beta, n_max), Q, r, s);
}

// ---------------------------------------------------------------------------
// l2 experiments
// ---------------------------------------------------------------------------

/// ||sup_{1<=n<=n_max} |F^{-1}(nu_n^s f^)| ||_2 / ||f||_2.
inline double l2_arc_maximal_decay(unsigned s, const Signal& f, unsigned n_max)
{
    if (s > 6) throw capacity_error("arc level above 6");
    FamilySpec fam;
    fam.kind = Family::major_arc_level;
    fam.s = s;
    const double nf = f.l2_norm();
    if (nf == 0.0) return 0.0;
    return maximal_dyadic(f, fam, n_max).l2_norm() / nf;
}

struct ABSplit {
    double t = 0.0;
    unsigned n = 0;
    Signal A;
    Signal B;
};

namespace detail {

inline std::size_t ab_frame_size(double t, unsigned n_top, std::size_t len, std::size_t& lead)
{
    const unsigned cap = static_cast<unsigned>(std::floor(std::sqrt(t)));
    const std::size_t tail = level_tail(cap);
    lead = (std::size_t{1} << n_top) + tail;
    const std::size_t P = next_power_of_two(lead + len + tail);
    if (P > max_fft_length) throw capacity_error("A/B frame above 2^26");
    return P;
}

}  // namespace detail

/// M_{2^n} = A + B with A = M_{2^n}, B = 0 for n < t, and otherwise
/// A = F^{-1}(Pi_n^t f^), B = F^{-1}((m_{2^n} - Pi_n^t) f^). Both parts live on
/// a periodic frame that holds the linear M_{2^n} f without wraparound.
inline ABSplit ab_split_apply(double t, unsigned n, const Signal& f)
{
    if (!(t > 0.0)) throw std::domain_error("t must be positive");
    if (n < 1 || n > max_dyadic_exponent) throw capacity_error("n must lie in [1, 24]");
    std::size_t lead = 0;
    const std::size_t P = detail::ab_frame_size(t, n, f.size(), lead);
    const Frame frame(f, lead, P);
    const std::uint64_t N = std::uint64_t{1} << n;
    const auto m = prime_multiplier_grid(N, P);
    ABSplit out;
    out.t = t;
    out.n = n;
    if (static_cast<double>(n) < t) {
        out.A = frame.as_signal(frame.apply(m));
        out.B = frame.as_signal(std::vector<cplx>(P, cplx{0.0, 0.0}));
        return out;
    }
    const auto pi = MajorArcModel(N).levels_grid(0, static_cast<unsigned>(std::floor(std::sqrt(t))), P);
    MultiplierGrid rest{std::vector<cplx>(P)};
    for (std::size_t j = 0; j < P; ++j) rest.values[j] = m.values[j] - pi.values[j];
    out.A = frame.as_signal(frame.apply(pi));
    out.B = frame.as_signal(frame.apply(rest));
    return out;
}

/// ||sup_{1<=n<=n_max} |B_n^t f| ||_2 / ||f||_2.
inline double b_part_l2_maximal(double t, const Signal& f, unsigned n_max)
{
    if (!(t > 0.0)) throw std::domain_error("t must be positive");
    std::size_t lead = 0;
    const std::size_t P = detail::ab_frame_size(t, n_max, f.size(), lead);
    const Frame frame(f, lead, P);
    const unsigned cap = static_cast<unsigned>(std::floor(std::sqrt(t)));
    std::vector<double> acc(P, 0.0);
    for (unsigned n = 1; n <= n_max; ++n) {
        if (static_cast<double>(n) < t) continue;
        const std::uint64_t N = std::uint64_t{1} << n;
        auto m = prime_multiplier_grid(N, P);
        const auto pi = MajorArcModel(N).levels_grid(0, cap, P);
        for (std::size_t j = 0; j < P; ++j) m.values[j] -= pi.values[j];
        const auto g = frame.apply(m);
        for (std::size_t i = 0; i < P; ++i) acc[i] = std::max(acc[i], std::abs(g[i]));
    }
    long double sq = 0.0L;
    for (double v : acc) sq += static_cast<long double>(v) * v;
    const double nf = f.l2_norm();
    return nf == 0.0 ? 0.0 : static_cast<double>(std::sqrt(sq)) / nf;
}

/// ||sup_{1<=n<=n_max} |M_{2^n} f| ||_p / ||f||_p for 1 < p <= 2.
inline double lp_maximal_ratio(const Signal& f, double p, unsigned n_max)
{
    if (!(p > 1.0 && p <= 2.0)) throw std::domain_error("lp_maximal_ratio needs 1 < p <= 2");
    const double nf = f.lp_norm(p);
    if (nf == 0.0) return 0.0;
    FamilySpec fam;
    fam.kind = Family::weighted_prime_average;
    return maximal_dyadic(f, fam, n_max).lp_norm(p) / nf;
}

}  // namespace primeavg
