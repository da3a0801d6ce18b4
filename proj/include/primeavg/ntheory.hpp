#pragma once

/**
 * @file ntheory.hpp
 * @brief Prime sieve and the arithmetic functions used throughout the library.
 *
 * PrimeTable is an immutable bit-packed Eratosthenes sieve together with the
 * sorted list of primes and prefix sums of log p, so that pi(N) and
 * theta(N) = sum_{p <= N} log p are O(log pi(N)) lookups. Logarithms are
 * natural logarithms everywhere.
 *
 * The sieve can be cached on disk. The cache file is
 *
 *     bytes 0..7    magic "PAVGSIEV"
 *     bytes 8..11   format version, u32 little-endian (currently 1)
 *     bytes 12..19  limit, u64 little-endian
 *     bytes 20..27  number of 64-bit words W, u64 little-endian
 *     then W words, u64 little-endian, bit n set iff n is prime
 *
 * and is rebuilt whenever any header field disagrees with the request.
 */

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "primeavg/errors.hpp"

namespace primeavg {

inline constexpr std::uint64_t default_sieve_cap = std::uint64_t{1} << 30;

class PrimeTable {
public:
    /// Sieve [0, limit]. Throws capacity_error unless 2 <= limit <= cap.
    explicit PrimeTable(std::uint64_t limit, std::uint64_t cap = default_sieve_cap)
        : limit_(check_limit(limit, cap)), bits_((limit_ >> 6) + 1, 0)
    {
        for (std::uint64_t n = 3; n <= limit_; n += 2) set(n);
        set(2);
        for (std::uint64_t p = 3; p * p <= limit_; p += 2) {
            if (!is_prime(p)) continue;
            for (std::uint64_t m = p * p; m <= limit_; m += 2 * p) clear(m);
        }
        finish();
    }

    std::uint64_t limit() const { return limit_; }

    bool is_prime(std::uint64_t n) const
    {
        return n <= limit_ && ((bits_[n >> 6] >> (n & 63)) & 1u);
    }

    std::span<const std::uint64_t> primes() const { return primes_; }

    /// Raw bitset words; bit n of the concatenation is set iff n is prime.
    std::span<const std::uint64_t> words() const { return bits_; }

    /// pi(N). N may not exceed limit().
    std::uint64_t count(std::uint64_t n) const
    {
        require(n);
        return static_cast<std::uint64_t>(
            std::upper_bound(primes_.begin(), primes_.end(), n) - primes_.begin());
    }

    /// theta(N) = sum of log p over primes p <= N.
    double theta(std::uint64_t n) const
    {
        const auto k = count(n);
        return k == 0 ? 0.0 : theta_prefix_[k - 1];
    }

    /// Rebuilds a table from cached bitset words; nullopt if they are not a
    /// valid sieve of [0, limit].
    static std::optional<PrimeTable> from_words(std::uint64_t limit,
                                                std::vector<std::uint64_t> words)
    {
        if (limit < 2 || words.size() != (limit >> 6) + 1) return std::nullopt;
        PrimeTable t;
        t.limit_ = limit;
        t.bits_ = std::move(words);
        // bits above limit must be clear
        for (std::uint64_t n = limit + 1; n < t.bits_.size() * 64; ++n)
            if ((t.bits_[n >> 6] >> (n & 63)) & 1u) return std::nullopt;
        t.finish();
        if (t.primes_.empty() || t.primes_.front() != 2) return std::nullopt;
        return t;
    }

private:
    PrimeTable() = default;

    static std::uint64_t check_limit(std::uint64_t limit, std::uint64_t cap)
    {
        if (limit < 2 || limit > cap)
            throw capacity_error("sieve limit " + std::to_string(limit) +
                                 " outside [2, " + std::to_string(cap) + "]");
        return limit;
    }

    void set(std::uint64_t n) { bits_[n >> 6] |= std::uint64_t{1} << (n & 63); }
    void clear(std::uint64_t n) { bits_[n >> 6] &= ~(std::uint64_t{1} << (n & 63)); }

    void require(std::uint64_t n) const
    {
        if (n > limit_)
            throw capacity_error("query " + std::to_string(n) +
                                 " exceeds sieve limit " + std::to_string(limit_));
    }

    void finish()
    {
        primes_.clear();
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                const int b = std::countr_zero(word);
                primes_.push_back(w * 64 + static_cast<std::uint64_t>(b));
                word &= word - 1;
            }
        }
        theta_prefix_.resize(primes_.size());
        long double acc = 0.0L;
        for (std::size_t i = 0; i < primes_.size(); ++i) {
            acc += std::log(static_cast<long double>(primes_[i]));
            theta_prefix_[i] = static_cast<double>(acc);
        }
    }

    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint64_t> primes_;
    std::vector<double> theta_prefix_;
};

inline PrimeTable sieve_primes(std::uint64_t limit, std::uint64_t cap = default_sieve_cap)
{
    return PrimeTable(limit, cap);
}

inline PrimeTable cached_sieve(std::uint64_t limit, const std::filesystem::path& dir);

namespace detail {
inline std::filesystem::path& shared_cache_dir()
{
    static std::filesystem::path dir;
    return dir;
}
}  // namespace detail

/// Directory for on-disk sieves behind shared_prime_table; empty disables.
/// Set it before the first table is built.
inline void set_prime_cache_dir(const std::filesystem::path& dir) { detail::shared_cache_dir() = dir; }

/// Process-wide table covering at least [0, min_limit]; grows by doubling.
/// Returned references stay valid for the lifetime of the process.
inline const PrimeTable& shared_prime_table(std::uint64_t min_limit)
{
    static std::mutex mu;
    static std::vector<std::unique_ptr<PrimeTable>> tables;
    std::lock_guard lock(mu);
    if (tables.empty() || tables.back()->limit() < min_limit) {
        std::uint64_t limit = tables.empty() ? (std::uint64_t{1} << 16) : tables.back()->limit();
        while (limit < min_limit) limit *= 2;
        const auto& dir = detail::shared_cache_dir();
        tables.push_back(std::make_unique<PrimeTable>(dir.empty() ? PrimeTable(limit) : cached_sieve(limit, dir)));
    }
    return *tables.back();
}

inline std::uint64_t prime_count(std::uint64_t n, const PrimeTable& table)
{
    return table.count(n);
}

inline double chebyshev_theta(std::uint64_t n, const PrimeTable& table)
{
    return table.theta(n);
}

/// theta(x; q, r): sum of log p over primes p <= floor(x) with p = r (mod q).
/// r is taken in [1, q]; r = q selects p = 0 (mod q).
inline double chebyshev_theta_progression(double x, std::uint64_t q, std::uint64_t r,
                                          const PrimeTable& table)
{
    if (q == 0) throw std::domain_error("modulus must be positive");
    if (!(x >= 0.0)) return 0.0;
    const auto bound = static_cast<std::uint64_t>(std::floor(x));
    if (bound > table.limit())
        throw capacity_error("x exceeds sieve limit");
    const std::uint64_t residue = r % q;
    long double acc = 0.0L;
    for (const auto p : table.primes()) {
        if (p > bound) break;
        if (p % q == residue) acc += std::log(static_cast<long double>(p));
    }
    return static_cast<double>(acc);
}

// ---------------------------------------------------------------------------
// Arithmetic functions (trial division; intended for n up to ~1e12)
// ---------------------------------------------------------------------------

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
    std::vector<PrimePower> factors;  // strictly increasing primes

    std::uint64_t value() const
    {
        std::uint64_t v = 1;
        for (const auto& f : factors)
            for (unsigned e = 0; e < f.exponent; ++e) v *= f.prime;
        return v;
    }
};

inline Factorization factorize(std::uint64_t n)
{
    if (n == 0) throw std::domain_error("factorize(0)");
    Factorization out;
    auto pull = [&](std::uint64_t p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.factors.push_back({p, e});
    };
    pull(2);
    pull(3);
    for (std::uint64_t p = 5; p * p <= n; p += 6) {
        pull(p);
        pull(p + 2);
    }
    if (n > 1) out.factors.push_back({n, 1});
    return out;
}

inline bool is_squarefree(std::uint64_t n)
{
    const auto f = factorize(n);
    return std::all_of(f.factors.begin(), f.factors.end(),
                       [](const PrimePower& pp) { return pp.exponent == 1; });
}

inline int mobius(std::uint64_t n)
{
    const auto f = factorize(n);
    for (const auto& pp : f.factors)
        if (pp.exponent > 1) return 0;
    return (f.factors.size() % 2 == 0) ? 1 : -1;
}

inline std::uint64_t euler_phi(std::uint64_t n)
{
    std::uint64_t phi = n;
    for (const auto& pp : factorize(n).factors) phi = phi / pp.prime * (pp.prime - 1);
    return phi;
}

/// phi(0..limit) by a linear sieve; entry 0 is 0.
inline std::vector<std::uint64_t> euler_phi_table(std::uint64_t limit)
{
    std::vector<std::uint64_t> phi(limit + 1);
    std::iota(phi.begin(), phi.end(), std::uint64_t{0});
    for (std::uint64_t p = 2; p <= limit; ++p) {
        if (phi[p] != p) continue;  // composite, already touched
        for (std::uint64_t m = p; m <= limit; m += p) phi[m] -= phi[m] / p;
    }
    return phi;
}

/// Phi(t) = sum over 1 <= q < 2^sqrt(t) of (1 + log q) / phi(q).
inline double phi_capital(double t)
{
    if (!(t > 0.0)) throw std::domain_error("phi_capital requires t > 0");
    const double bound = std::exp2(std::sqrt(t));
    if (bound > 1e8) throw capacity_error("phi_capital bound 2^sqrt(t) too large");
    auto q_max = static_cast<std::uint64_t>(std::ceil(bound)) - 1;  // q < bound
    if (static_cast<double>(q_max) >= bound) --q_max;
    const auto phi = euler_phi_table(std::max<std::uint64_t>(q_max, 1));
    long double acc = 0.0L;
    for (std::uint64_t q = 1; q <= q_max; ++q)
        acc += (1.0L + std::log(static_cast<long double>(q))) / static_cast<long double>(phi[q]);
    return static_cast<double>(acc);
}

// ---------------------------------------------------------------------------
// Sieve cache
// ---------------------------------------------------------------------------

namespace detail {

inline void put_u64(std::ostream& os, std::uint64_t v)
{
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline void put_u32(std::ostream& os, std::uint32_t v)
{
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline bool get_u64(std::istream& is, std::uint64_t& v)
{
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) return false;
    v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return true;
}

inline bool get_u32(std::istream& is, std::uint32_t& v)
{
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) return false;
    v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return true;
}

}  // namespace detail

inline constexpr char sieve_cache_magic[8] = {'P', 'A', 'V', 'G', 'S', 'I', 'E', 'V'};
inline constexpr std::uint32_t sieve_cache_version = 1;

inline void save_sieve_cache(const std::filesystem::path& path, const PrimeTable& table)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write sieve cache " + path.string());
    os.write(sieve_cache_magic, sizeof sieve_cache_magic);
    detail::put_u32(os, sieve_cache_version);
    detail::put_u64(os, table.limit());
    const auto words = table.words();
    detail::put_u64(os, words.size());
    for (const auto w : words) detail::put_u64(os, w);
}

/// nullopt on a missing file, any header mismatch, or a corrupt payload.
inline std::optional<PrimeTable> load_sieve_cache(const std::filesystem::path& path,
                                                  std::uint64_t limit)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[8];
    if (!is.read(magic, 8) || !std::equal(magic, magic + 8, sieve_cache_magic))
        return std::nullopt;
    std::uint32_t version = 0;
    std::uint64_t stored_limit = 0, count = 0;
    if (!detail::get_u32(is, version) || version != sieve_cache_version) return std::nullopt;
    if (!detail::get_u64(is, stored_limit) || stored_limit != limit) return std::nullopt;
    if (!detail::get_u64(is, count) || count != (limit >> 6) + 1) return std::nullopt;
    std::vector<std::uint64_t> words(count);
    for (auto& w : words)
        if (!detail::get_u64(is, w)) return std::nullopt;
    return PrimeTable::from_words(limit, std::move(words));
}

/// Loads dir/sieve_<limit>.bin, rebuilding and rewriting it on any mismatch.
inline PrimeTable cached_sieve(std::uint64_t limit, const std::filesystem::path& dir)
{
    const auto path = dir / ("sieve_" + std::to_string(limit) + ".bin");
    if (auto t = load_sieve_cache(path, limit)) return std::move(*t);
    PrimeTable table(limit);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!ec) save_sieve_cache(path, table);
    return table;
}

}  // namespace primeavg
