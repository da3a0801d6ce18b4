#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "primeavg/ntheory.hpp"

using namespace primeavg;

namespace {

bool is_prime_trial(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Segmented sieve over blocks of 2^15, seeded by trial division primes.
std::vector<std::uint64_t> segmented_primes(std::uint64_t limit)
{
    std::vector<std::uint64_t> base;
    for (std::uint64_t p = 2; p * p <= limit; ++p)
        if (is_prime_trial(p)) base.push_back(p);
    std::vector<std::uint64_t> out;
    const std::uint64_t block = 1 << 15;
    for (std::uint64_t lo = 0; lo <= limit; lo += block) {
        const std::uint64_t hi = std::min(limit, lo + block - 1);
        std::vector<char> comp(hi - lo + 1, 0);
        for (auto p : base) {
            std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
            for (std::uint64_t m = start; m <= hi; m += p) comp[m - lo] = 1;
        }
        for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n <= hi; ++n)
            if (!comp[n - lo]) out.push_back(n);
    }
    return out;
}

}  // namespace

TEST(Sieve, SmallLimitsMatchTrialDivision)
{
    const auto t10 = sieve_primes(10);
    EXPECT_EQ(std::vector<std::uint64_t>(t10.primes().begin(), t10.primes().end()),
              (std::vector<std::uint64_t>{2, 3, 5, 7}));
    const auto t2 = sieve_primes(2);
    ASSERT_EQ(t2.primes().size(), 1u);
    EXPECT_EQ(t2.primes()[0], 2u);

    const auto t = sieve_primes(100000);
    std::uint64_t pi = 0;
    double theta = 0.0;
    for (std::uint64_t n = 1; n <= 100000; ++n) {
        if (is_prime_trial(n)) {
            ++pi;
            theta += std::log(static_cast<double>(n));
        }
        ASSERT_EQ(t.is_prime(n), is_prime_trial(n)) << n;
        if (n % 997 == 0 || n == 100000) {
            ASSERT_EQ(prime_count(n, t), pi);
            ASSERT_NEAR(chebyshev_theta(n, t), theta, 1e-9 * theta);
        }
    }
    EXPECT_EQ(prime_count(100, t), 25u);
    EXPECT_EQ(prime_count(1, t), 0u);
}

TEST(Sieve, LargeLimitMatchesSegmentedOracle)
{
    const std::uint64_t n = 1u << 20;
    const auto t = sieve_primes(n);
    const auto oracle = segmented_primes(n);
    ASSERT_EQ(t.primes().size(), oracle.size());
    EXPECT_TRUE(std::equal(oracle.begin(), oracle.end(), t.primes().begin()));
    EXPECT_EQ(prime_count(n, t), oracle.size());
}

TEST(Sieve, CapacityErrors)
{
    EXPECT_THROW(sieve_primes(1), capacity_error);
    EXPECT_THROW(sieve_primes(1000, 100), capacity_error);
    const auto t = sieve_primes(100);
    EXPECT_THROW(prime_count(101, t), capacity_error);
}

TEST(Chebyshev, ValuesAndMonotonicity)
{
    const auto t = sieve_primes(1000000);
    EXPECT_EQ(chebyshev_theta(1, t), 0.0);
    EXPECT_NEAR(chebyshev_theta(10, t), std::log(2.0 * 3 * 5 * 7), 1e-12);
    EXPECT_NEAR(chebyshev_theta(10, t), 5.34710753, 1e-8);
    EXPECT_LT(std::abs(chebyshev_theta(1000000, t) / 1e6 - 1.0), 0.01);
    double prev = 0.0;
    for (std::uint64_t n = 1; n <= 5000; ++n) {
        const double v = chebyshev_theta(n, t);
        ASSERT_GE(v, prev);
        prev = v;
    }
}

TEST(Chebyshev, Progressions)
{
    const auto t = sieve_primes(100000);
    EXPECT_NEAR(chebyshev_theta_progression(10, 4, 1, t), std::log(5.0), 1e-12);
    EXPECT_NEAR(chebyshev_theta_progression(10, 4, 3, t), std::log(21.0), 1e-12);
    EXPECT_NEAR(chebyshev_theta_progression(10, 2, 2, t), std::log(2.0), 1e-12);
    EXPECT_NEAR(chebyshev_theta_progression(10.9, 4, 3, t), std::log(21.0), 1e-12);
    for (std::uint64_t q = 1; q <= 30; ++q) {
        double acc = 0.0;
        for (std::uint64_t r = 1; r <= q; ++r) acc += chebyshev_theta_progression(50000.0, q, r, t);
        EXPECT_NEAR(acc, chebyshev_theta(50000, t), 1e-9 * acc) << q;
    }
}

TEST(Arithmetic, MobiusPhiFactorize)
{
    EXPECT_EQ(mobius(1), 1);
    EXPECT_EQ(mobius(12), 0);
    EXPECT_EQ(mobius(30), -1);
    EXPECT_EQ(euler_phi(1), 1u);
    EXPECT_EQ(euler_phi(12), 4u);
    EXPECT_FALSE(is_squarefree(18));
    EXPECT_TRUE(is_squarefree(30));

    const auto table = euler_phi_table(10000);
    for (std::uint64_t n = 1; n <= 10000; ++n) {
        const auto f = factorize(n);
        ASSERT_EQ(f.value(), n);
        for (std::size_t i = 0; i < f.factors.size(); ++i) {
            ASSERT_TRUE(is_prime_trial(f.factors[i].prime));
            if (i) {
                ASSERT_LT(f.factors[i - 1].prime, f.factors[i].prime);
            }
        }
        int mu_sum = 0;
        std::uint64_t phi_sum = 0;
        for (std::uint64_t d = 1; d <= n; ++d)
            if (n % d == 0) {
                mu_sum += mobius(d);
                phi_sum += euler_phi(d);
            }
        ASSERT_EQ(mu_sum, n == 1 ? 1 : 0) << n;
        ASSERT_EQ(phi_sum, n) << n;
        ASSERT_EQ(table[n], euler_phi(n));
        if (n <= 2000) {
            std::uint64_t cnt = 0;
            for (std::uint64_t a = 1; a <= n; ++a) cnt += std::gcd(a, n) == 1;
            ASSERT_EQ(cnt, euler_phi(n));
        }
    }
}

TEST(Arithmetic, PhiCapital)
{
    EXPECT_NEAR(phi_capital(1e-6), 1.0, 1e-15);
    const double t4 = 1.0 + (1.0 + std::log(2.0)) + (1.0 + std::log(3.0)) / 2.0;
    EXPECT_NEAR(phi_capital(4.0), t4, 1e-12);
    EXPECT_NEAR(phi_capital(4.0), 3.742453, 1e-6);
    double direct = 0.0;
    for (std::uint64_t q = 1; q < 16; ++q) direct += (1.0 + std::log(double(q))) / double(euler_phi(q));
    EXPECT_NEAR(phi_capital(16.0), direct, 1e-12);
    double prev = 0.0;
    for (double t = 0.5; t < 100; t += 0.5) {
        const double v = phi_capital(t);
        ASSERT_GE(v, prev);
        prev = v;
    }
    EXPECT_THROW(phi_capital(0.0), std::domain_error);
}

TEST(SieveCache, RoundTripAndRegeneration)
{
    const auto dir = std::filesystem::temp_directory_path() / "primeavg_sieve_test";
    std::filesystem::remove_all(dir);
    const auto a = cached_sieve(5000, dir);
    const auto path = dir / "sieve_5000.bin";
    ASSERT_TRUE(std::filesystem::exists(path));
    {
        std::ifstream is(path, std::ios::binary);
        char magic[8];
        is.read(magic, 8);
        EXPECT_EQ(std::string(magic, 8), "PAVGSIEV");
    }
    const auto loaded = load_sieve_cache(path, 5000);
    ASSERT_TRUE(loaded.has_value());
    EXPECT_TRUE(std::equal(a.primes().begin(), a.primes().end(), loaded->primes().begin(),
                           loaded->primes().end()));
    EXPECT_FALSE(load_sieve_cache(path, 5001).has_value());

    // flip the version field, then expect a silent rebuild
    {
        std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
        f.seekp(8);
        const char bad[4] = {9, 0, 0, 0};
        f.write(bad, 4);
    }
    EXPECT_FALSE(load_sieve_cache(path, 5000).has_value());
    const auto rebuilt = cached_sieve(5000, dir);
    EXPECT_EQ(rebuilt.primes().size(), a.primes().size());
    EXPECT_TRUE(load_sieve_cache(path, 5000).has_value());
    std::filesystem::remove_all(dir);
}
