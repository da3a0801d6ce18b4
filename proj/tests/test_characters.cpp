#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <set>

#include "primeavg/characters.hpp"

using namespace primeavg;

namespace {

int legendre_euler(std::int64_t a, std::int64_t p)
{
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    std::int64_t r = 1, b = a, e = (p - 1) / 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

// Least d | q with chi(m) = chi(n) whenever m = n (mod d) and both are units mod q.
std::uint64_t conductor_by_period(const DirichletCharacter& chi)
{
    const auto q = chi.modulus();
    for (std::uint64_t d = 1; d <= q; ++d) {
        if (q % d) continue;
        bool ok = true;
        for (std::uint64_t m = 0; m < q && ok; ++m) {
            if (std::gcd(m, q) != 1) continue;
            for (std::uint64_t n = m % d; n < q; n += d)
                if (std::gcd(n, q) == 1 && std::abs(chi(m) - chi(n)) > 1e-12) {
                    ok = false;
                    break;
                }
        }
        if (ok) return d;
    }
    return q;
}

// L(s, chi) = Gamma(s)^{-1} int_0^inf x^{s-1} sum_a chi(a) e^{-ax} / (1 - e^{-qx}) dx.
double l_value_mellin(const DirichletCharacter& chi, double s)
{
    const auto q = chi.modulus();
    auto f = [&](double x) {
        double num = 0.0;
        for (std::uint64_t a = 1; a <= q; ++a) num += chi(a).real() * std::expm1(-double(a) * x);
        return std::pow(x, s - 1.0) * num / -std::expm1(-double(q) * x);
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    const double head = ts.integrate(f, 0.0, 1.0);
    const double tail = es.integrate(f, 1.0, std::numeric_limits<double>::infinity());
    return (head + tail) / boost::math::tgamma(s);
}

}  // namespace

TEST(Characters, Principal)
{
    const auto c1 = principal_character(1);
    EXPECT_EQ(c1(1), cplx(1.0, 0.0));
    EXPECT_EQ(c1.kind(), CharacterKind::principal);
    const auto c6 = principal_character(6);
    for (int a = 1; a <= 6; ++a) EXPECT_EQ(c6(a).real(), (a == 1 || a == 5) ? 1.0 : 0.0) << a;
    const auto c4 = principal_character(4);
    EXPECT_EQ(c4(1).real(), 1.0);
    EXPECT_EQ(c4(3).real(), 1.0);
    EXPECT_EQ(c4(2).real(), 0.0);
}

TEST(Characters, EnumerationCounts)
{
    EXPECT_EQ(enumerate_characters(1).size(), 1u);
    EXPECT_EQ(enumerate_characters(5).size(), 4u);
    EXPECT_EQ(enumerate_characters(8).size(), 4u);
    const auto q5 = enumerate_characters(5);
    EXPECT_EQ(std::count_if(q5.begin(), q5.end(), [](auto& c) { return c.is_quadratic(); }), 1);
    EXPECT_THROW(enumerate_characters(2000000), capacity_error);
}

TEST(Characters, QuadraticLists)
{
    const auto q5 = enumerate_quadratic_characters(5);
    ASSERT_EQ(q5.size(), 1u);
    const int expect5[] = {1, -1, -1, 1};
    for (int a = 1; a <= 4; ++a) EXPECT_EQ(q5[0].real_value(a), expect5[a - 1]);
    const auto q3 = enumerate_quadratic_characters(3);
    ASSERT_EQ(q3.size(), 1u);
    EXPECT_EQ(q3[0].real_value(1), 1);
    EXPECT_EQ(q3[0].real_value(2), -1);
    EXPECT_TRUE(enumerate_quadratic_characters(2).empty());

    for (std::int64_t p : {7, 11, 13, 101, 997}) {
        const auto qs = enumerate_quadratic_characters(p);
        ASSERT_EQ(qs.size(), 1u);
        for (std::int64_t a = 0; a < p; ++a) ASSERT_EQ(qs[0].real_value(a), legendre_euler(a, p));
    }
}

TEST(Characters, GroupAxiomsAndOrthogonality)
{
    for (std::uint64_t q = 1; q <= 200; ++q) {
        const auto chars = enumerate_characters(q);
        const auto phi = euler_phi(q);
        ASSERT_EQ(chars.size(), phi);
        // multiplicativity and unit modulus
        for (const auto& chi : chars) {
            for (std::uint64_t a = 0; a < q; ++a) {
                const bool unit = std::gcd(a, q) == 1 || q == 1;
                ASSERT_EQ(std::abs(chi(a)) > 0.5, unit);
                if (unit) {
                    ASSERT_NEAR(std::abs(chi(a)), 1.0, 1e-14);
                }
            }
            for (std::uint64_t m = 1; m < q; m += 3)
                for (std::uint64_t n = 1; n < q; n += 5)
                    if (std::gcd(m * n, q) == 1) {
                        ASSERT_LT(std::abs(chi(m * n % q) - chi(m) * chi(n)), 1e-12);
                    }
            ASSERT_EQ(chi.kind() == CharacterKind::principal,
                      std::all_of(chi.values().begin(), chi.values().end(),
                                  [](cplx v) { return v == cplx(0, 0) || v == cplx(1, 0); }));
        }
        // orthogonality; distinctness follows from it
        for (std::size_t i = 0; i < chars.size(); ++i)
            for (std::size_t j = 0; j < chars.size(); ++j) {
                cplx acc{0, 0};
                for (std::uint64_t a = 0; a < q; ++a) acc += chars[i](a) * std::conj(chars[j](a));
                const double want = i == j ? double(phi) : 0.0;
                ASSERT_LT(std::abs(acc - want), 1e-9 * double(phi)) << q << " " << i << " " << j;
            }
        // closure under products
        const std::size_t stride = q <= 60 ? 1 : 11;
        for (std::size_t i = 0; i < chars.size(); i += stride)
            for (std::size_t j = 0; j < chars.size(); j += stride) {
                const auto prod = chars[i] * chars[j];
                ASSERT_TRUE(std::find(chars.begin(), chars.end(), prod) != chars.end());
            }
    }
}

TEST(Characters, ConductorMatchesMinimalPeriod)
{
    for (std::uint64_t q = 1; q <= 120; ++q) {
        for (const auto& chi : enumerate_characters(q)) {
            const auto dec = conductor(chi);
            ASSERT_EQ(dec.conductor, conductor_by_period(chi)) << q;
            ASSERT_EQ(q % dec.conductor, 0u);
            ASSERT_EQ(induce(dec.primitive, q), chi);
            const auto again = conductor(dec.primitive);
            ASSERT_EQ(again.conductor, dec.conductor);
            ASSERT_EQ(again.primitive, dec.primitive);
        }
    }
    EXPECT_EQ(conductor(principal_character(12)).conductor, 1u);
}

TEST(Characters, ConductorExamples)
{
    const auto leg5 = enumerate_quadratic_characters(5)[0];
    const auto lifted = induce(leg5, 15);
    const auto dec = conductor(lifted);
    EXPECT_EQ(dec.conductor, 5u);
    EXPECT_EQ(dec.primitive, leg5);

    int primitive_mod8 = 0;
    for (const auto& chi : enumerate_quadratic_characters(8))
        if (conductor(chi).conductor == 8) ++primitive_mod8;
    EXPECT_EQ(primitive_mod8, 2);
}

namespace {

bool is_fundamental_discriminant(std::int64_t d)
{
    const auto m4 = ((d % 4) + 4) % 4;
    if (m4 == 1) return is_squarefree(std::uint64_t(std::abs(d)));
    if (m4 != 0) return false;
    const auto m = d / 4;
    const auto r = ((m % 4) + 4) % 4;
    return (r == 2 || r == 3) && is_squarefree(std::uint64_t(std::abs(m)));
}

}  // namespace

// The list q0 = 1 (mod 4) or q0/4 = 2, 3 (mod 4) describes even characters;
// in general chi(-1) * q0 is a fundamental discriminant (q0 = 3 is odd).
TEST(Characters, QuadraticPrimitiveConductorIsFundamentalDiscriminant)
{
    for (std::uint64_t q = 3; q <= 500; ++q) {
        for (const auto& chi : enumerate_quadratic_characters(q)) {
            const auto q0 = conductor(chi).conductor;
            if (q0 != q) continue;
            const int sign = chi.real_value(-1);
            ASSERT_TRUE(is_fundamental_discriminant(sign * std::int64_t(q0))) << q0;
            if (sign == 1) {
                const bool odd_type = q0 % 4 == 1 && is_squarefree(q0);
                const bool even_type = q0 % 4 == 0 && (q0 / 4 % 4 == 2 || q0 / 4 % 4 == 3) &&
                                       is_squarefree(q0 / 4);
                ASSERT_TRUE(odd_type || even_type) << q0;
            }
        }
    }
    EXPECT_EQ(conductor(enumerate_quadratic_characters(3)[0]).conductor, 3u);
}

TEST(LFunction, KnownValues)
{
    const auto chi4 = enumerate_quadratic_characters(4)[0];
    const auto chi3 = enumerate_quadratic_characters(3)[0];
    EXPECT_NEAR(l_function_real(chi4, 1.0).real(), std::numbers::pi / 4, 1e-12);
    EXPECT_NEAR(l_function_real(chi3, 1.0).real(), std::numbers::pi / (3 * std::sqrt(3.0)), 1e-12);
    EXPECT_EQ(l_function_real(chi4, 0.7).imag(), 0.0);
    EXPECT_THROW(l_function_real(principal_character(7), 1.0), std::domain_error);
}

TEST(LFunction, PartialSumsAtThreeHalves)
{
    for (std::uint64_t q : {3, 5, 7, 8, 12, 13}) {
        const auto chars = enumerate_characters(q);
        for (const auto& chi : chars) {
            if (chi.is_principal()) continue;
            cplx partial{0, 0};
            for (std::uint64_t n = 1; n <= 1000000; ++n) partial += chi(n) * std::pow(double(n), -1.5);
            ASSERT_LT(std::abs(partial - l_function_real(chi, 1.5)), 1e-6) << q;
        }
    }
}

TEST(LFunction, MatchesMellinIntegral)
{
    for (std::uint64_t q : {4, 5, 8, 21, 163, 1000}) {
        for (const auto& chi : enumerate_quadratic_characters(q)) {
            const LSeries L(chi);
            for (double s : {0.4, 0.5, 0.75, 0.9, 1.0, 1.2}) {
                const double oracle = l_value_mellin(chi, s);
                ASSERT_NEAR(L(s).real(), oracle, 1e-10) << q << " s=" << s;
            }
        }
    }
}

TEST(LFunction, NonvanishingAtOne)
{
    for (std::uint64_t q = 3; q <= 400; ++q)
        for (const auto& chi : enumerate_quadratic_characters(q))
            ASSERT_GT(l_function_real(chi, 1.0).real(), 0.0) << q;
}

TEST(ExceptionalZero, ScanAndInjection)
{
    const auto r5 = exceptional_zero_scan(5, 1.0);
    EXPECT_FALSE(r5.found);
    EXPECT_FALSE(r5.inconclusive);
    EXPECT_GT(r5.min_abs_l, 1e-2);

    const auto inj = inject_exceptional_zero(5, 0.9);
    EXPECT_TRUE(inj.found);
    EXPECT_TRUE(inj.injected);
    EXPECT_EQ(inj.beta, 0.9);
    EXPECT_THROW(inject_exceptional_zero(5, 1.0), std::domain_error);
    EXPECT_THROW(exceptional_zero_scan(2, 1.0), std::domain_error);
}

TEST(ExceptionalZero, WindowClampedAtOneHalf)
{
    const auto r = exceptional_zero_scan(7, 100.0);
    EXPECT_DOUBLE_EQ(r.window_low, 0.5);
    EXPECT_FALSE(r.found);
}
