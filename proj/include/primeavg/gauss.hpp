#pragma once

/**
 * @file gauss.hpp
 * @brief Normalized Gauss sums and their closed forms for real characters.
 *
 * G(chi, n) = (1/phi(q)) sum_{r in A_q} chi(r) e(rn/q), tau(chi) = phi(q) G(chi, 1).
 *
 * Each closed form has a literal-sum twin so sweeps can compare them. The
 * closed forms are stated for real characters (principal or quadratic),
 * whose primitive tau is known exactly: sqrt(q0) for even chi*, i sqrt(q0)
 * for odd chi*, and 1 for the trivial character mod 1.
 */

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "primeavg/characters.hpp"
#include "primeavg/ntheory.hpp"

namespace primeavg {

/// e(k/q) for k in [0, q).
inline std::vector<cplx> roots_of_unity(std::uint64_t q)
{
    std::vector<cplx> r(q);
    for (std::uint64_t k = 0; k < q; ++k)
        r[k] = unit_root(static_cast<std::int64_t>(k), static_cast<std::int64_t>(q));
    return r;
}

namespace detail {

inline std::uint64_t mod_index(std::int64_t n, std::uint64_t q)
{
    const auto m = static_cast<std::int64_t>(q);
    auto r = n % m;
    return static_cast<std::uint64_t>(r < 0 ? r + m : r);
}

inline void require_real(const DirichletCharacter& chi)
{
    if (!chi.is_real()) throw std::domain_error("closed-form Gauss sums need a real character");
}

inline void require_match(const DirichletCharacter& chi, const PrimitiveDecomposition& dec)
{
    if (chi.modulus() % dec.conductor != 0 || dec.primitive.modulus() != dec.conductor)
        throw std::domain_error("primitive decomposition does not belong to the character");
}

}  // namespace detail

/// Literal phi(q)-term sum using a precomputed root table for modulus q.
inline cplx gauss_sum_bruteforce(const DirichletCharacter& chi, std::int64_t n,
                                 const std::vector<cplx>& roots)
{
    const auto q = chi.modulus();
    const auto step = detail::mod_index(n, q);
    cplx acc{0.0, 0.0};
    std::uint64_t units = 0;
    std::uint64_t idx = step % q;  // r * n mod q, advanced incrementally
    // r runs over [1, q]; residue q == 0 handles q = 1
    for (std::uint64_t r = 1; r <= q; ++r, idx = (idx + step) % q) {
        const auto l = chi.log_at(static_cast<std::int64_t>(r));
        if (l < 0) continue;
        ++units;
        acc += chi.values()[r % q] * roots[idx];
    }
    return acc / static_cast<double>(units);
}

inline cplx gauss_sum_bruteforce(const DirichletCharacter& chi, std::int64_t n)
{
    return gauss_sum_bruteforce(chi, n, roots_of_unity(chi.modulus()));
}

inline cplx tau(const DirichletCharacter& chi)
{
    return static_cast<double>(euler_phi(chi.modulus())) * gauss_sum_bruteforce(chi, 1);
}

/// tau of a real primitive character from its parity.
inline cplx tau_real_primitive(const DirichletCharacter& primitive)
{
    detail::require_real(primitive);
    const auto q0 = primitive.modulus();
    if (q0 == 1) return {1.0, 0.0};
    const double root = std::sqrt(static_cast<double>(q0));
    return primitive.real_value(-1) == 1 ? cplx{root, 0.0} : cplx{0.0, root};
}

/// G(chi, a) for a in A_q: mu(q/q0)/phi(q) * chi*(a) chi*(q/q0) tau(chi*).
inline cplx gauss_sum_closed(const DirichletCharacter& chi, const PrimitiveDecomposition& dec,
                             std::int64_t a)
{
    detail::require_real(chi);
    detail::require_match(chi, dec);
    const auto q = chi.modulus();
    if (std::gcd(detail::mod_index(a, q), q) != 1) throw std::domain_error("gauss_sum_closed: a not a unit mod q");
    const auto m = q / dec.conductor;
    const int mu = mobius(m);
    if (mu == 0) return {0.0, 0.0};
    const auto& chs = dec.primitive;
    const double coeff = static_cast<double>(mu) * chs.real_value(a) *
                         chs.real_value(static_cast<std::int64_t>(m)) /
                         static_cast<double>(euler_phi(q));
    return coeff * tau_real_primitive(chs);
}

inline cplx gauss_sum_closed(const DirichletCharacter& chi, std::int64_t a)
{
    return gauss_sum_closed(chi, conductor(chi), a);
}

/// Literal sum over a in A_q of chi(a) e(ax/q), for every x in [0, q).
inline std::vector<cplx> twisted_character_sums_bruteforce(const DirichletCharacter& chi)
{
    const auto q = chi.modulus();
    const auto roots = roots_of_unity(q);
    std::vector<cplx> out(q);
    for (std::uint64_t x = 0; x < q; ++x) {
        cplx acc{0.0, 0.0};
        for (std::uint64_t a = 1; a <= q; ++a)
            if (chi.log_at(static_cast<std::int64_t>(a)) >= 0) acc += chi.values()[a % q] * roots[a * x % q];
        out[x] = acc;
    }
    return out;
}

/// With r = gcd(q, x) (r = q when x = 0): if r | q/q0 the sum equals
/// phi(q)/phi(q/r) * chi*(x/r) chi*(q/(r q0)) mu(q/(r q0)) tau(chi*), else 0.
inline cplx twisted_character_sum_closed(const DirichletCharacter& chi,
                                         const PrimitiveDecomposition& dec, std::int64_t x)
{
    detail::require_real(chi);
    detail::require_match(chi, dec);
    const auto q = chi.modulus();
    const auto q0 = dec.conductor;
    const auto xr = detail::mod_index(x, q);
    const std::uint64_t r = xr == 0 ? q : std::gcd(q, xr);
    if ((q / q0) % r != 0) return {0.0, 0.0};
    const auto k = q / (r * q0);
    const int mu = mobius(k);
    if (mu == 0) return {0.0, 0.0};
    const auto& chs = dec.primitive;
    const double coeff = static_cast<double>(euler_phi(q)) / static_cast<double>(euler_phi(q / r)) *
                         chs.real_value(static_cast<std::int64_t>(xr / r)) *
                         chs.real_value(static_cast<std::int64_t>(k)) * mu;
    return coeff * tau_real_primitive(chs);
}

inline cplx twisted_character_sum_closed(const DirichletCharacter& chi, std::int64_t x)
{
    return twisted_character_sum_closed(chi, conductor(chi), x);
}

/// Literal sum over a in A_q of G(chi, a) e(xa/q), for every x in [0, q).
inline std::vector<cplx> gauss_exponential_sums_bruteforce(const DirichletCharacter& chi)
{
    const auto q = chi.modulus();
    const auto roots = roots_of_unity(q);
    std::vector<cplx> g(q, cplx{0.0, 0.0});
    for (std::uint64_t a = 1; a <= q; ++a)
        if (std::gcd(a, q) == 1) g[a % q] = gauss_sum_bruteforce(chi, static_cast<std::int64_t>(a), roots);
    std::vector<cplx> out(q);
    for (std::uint64_t x = 0; x < q; ++x) {
        cplx acc{0.0, 0.0};
        for (std::uint64_t a = 1; a <= q; ++a)
            if (std::gcd(a, q) == 1) acc += g[a % q] * roots[a * x % q];
        out[x] = acc;
    }
    return out;
}

/// True when the exponential sum of Gauss sums can be nonzero at shift x.
inline bool gauss_exponential_sum_admissible(std::uint64_t q, std::uint64_t q0, std::int64_t x)
{
    const auto m = q / q0;
    const auto xr = detail::mod_index(x, q);
    const std::uint64_t r = xr == 0 ? q : std::gcd(q, xr);
    return is_squarefree(m) && std::gcd(m, q0) == 1 && m % r == 0;
}

/// mu(r) q0 phi(r)/phi(q) chi*(-x) when q/q0 is square-free, coprime to q0
/// and divisible by r = gcd(q, x); zero otherwise.
inline cplx gauss_exponential_sum(const DirichletCharacter& chi, const PrimitiveDecomposition& dec,
                                  std::int64_t x)
{
    detail::require_real(chi);
    detail::require_match(chi, dec);
    const auto q = chi.modulus();
    const auto q0 = dec.conductor;
    if (!gauss_exponential_sum_admissible(q, q0, x)) return {0.0, 0.0};
    const auto xr = detail::mod_index(x, q);
    const std::uint64_t r = xr == 0 ? q : std::gcd(q, xr);
    const double v = static_cast<double>(mobius(r)) * static_cast<double>(q0) *
                     static_cast<double>(euler_phi(r)) / static_cast<double>(euler_phi(q)) *
                     dec.primitive.real_value(-static_cast<std::int64_t>(xr));
    return {v, 0.0};
}

inline cplx gauss_exponential_sum(const DirichletCharacter& chi, std::int64_t x)
{
    return gauss_exponential_sum(chi, conductor(chi), x);
}

/// G(1_q, a) = mu(q/g)/phi(q/g), g = gcd(q, a).
inline double ramanujan_gauss_principal(std::uint64_t q, std::int64_t a)
{
    if (q == 0) throw std::domain_error("modulus must be positive");
    const auto ar = detail::mod_index(a, q);
    const std::uint64_t g = ar == 0 ? q : std::gcd(q, ar);
    const auto m = q / g;
    return static_cast<double>(mobius(m)) / static_cast<double>(euler_phi(m));
}

}  // namespace primeavg
