#pragma once

/**
 * @file characters.hpp
 * @brief Dirichlet characters modulo q.
 *
 * A character is stored exactly: every unit a mod q carries an integer
 * "log" k with chi(a) = e(k / order), order being the order of chi in the
 * character group; non-units carry -1. Complex values are derived from the
 * logs, with the quarter-turn roots (the only ones quadratic characters
 * need) produced without rounding.
 *
 * The group of characters is enumerated through the prime-power
 * decomposition of q: (Z/p^k)^* is cyclic for odd p, and
 * (Z/2^k)^* = <-1> x <5> for k >= 3.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "primeavg/errors.hpp"
#include "primeavg/ntheory.hpp"

namespace primeavg {

using cplx = std::complex<double>;

enum class CharacterKind { principal, quadratic, other };

inline const char* to_string(CharacterKind k)
{
    switch (k) {
    case CharacterKind::principal: return "principal";
    case CharacterKind::quadratic: return "quadratic";
    case CharacterKind::other: return "other";
    }
    return "?";
}

/// e(k/m) = exp(2 pi i k/m), exact when 4k/m is an integer.
inline cplx unit_root(std::int64_t k, std::int64_t m)
{
    k %= m;
    if (k < 0) k += m;
    if ((4 * k) % m == 0) {
        switch ((4 * k) / m) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
        }
    }
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    return {std::cos(angle), std::sin(angle)};
}

class DirichletCharacter {
public:
    /// logs[a mod q] for a in [0, q); -1 marks residues sharing a factor with q.
    /// The logs are reduced so that `order()` is the exact order of chi.
    DirichletCharacter(std::uint64_t modulus, std::uint64_t base, std::vector<std::int64_t> logs)
        : modulus_(modulus), order_(base), logs_(std::move(logs))
    {
        if (modulus_ == 0 || logs_.size() != modulus_ || order_ == 0)
            throw std::domain_error("malformed character table");
        std::uint64_t g = order_;
        for (auto& l : logs_) {
            if (l < 0) continue;
            l %= static_cast<std::int64_t>(order_);
            g = std::gcd(g, static_cast<std::uint64_t>(l));
        }
        order_ /= g;
        for (auto& l : logs_)
            if (l >= 0) l /= static_cast<std::int64_t>(g);
        values_.resize(modulus_);
        for (std::size_t a = 0; a < modulus_; ++a)
            values_[a] = logs_[a] < 0 ? cplx{0.0, 0.0}
                                      : unit_root(logs_[a], static_cast<std::int64_t>(order_));
    }

    std::uint64_t modulus() const { return modulus_; }
    std::uint64_t order() const { return order_; }

    CharacterKind kind() const
    {
        if (order_ == 1) return CharacterKind::principal;
        if (order_ == 2) return CharacterKind::quadratic;
        return CharacterKind::other;
    }

    bool is_principal() const { return order_ == 1; }
    bool is_quadratic() const { return order_ == 2; }
    bool is_real() const { return order_ <= 2; }

    std::size_t residue(std::int64_t n) const
    {
        const auto q = static_cast<std::int64_t>(modulus_);
        auto r = n % q;
        if (r < 0) r += q;
        return static_cast<std::size_t>(r);
    }

    cplx operator()(std::int64_t n) const { return values_[residue(n)]; }

    /// Integer value for real characters: -1, 0 or 1.
    int real_value(std::int64_t n) const
    {
        if (!is_real()) throw std::domain_error("real_value on a non-real character");
        const auto l = logs_[residue(n)];
        return l < 0 ? 0 : (l == 0 ? 1 : -1);
    }

    std::int64_t log_at(std::int64_t n) const { return logs_[residue(n)]; }

    /// Values indexed by residue a mod q.
    const std::vector<cplx>& values() const { return values_; }
    const std::vector<std::int64_t>& logs() const { return logs_; }

    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b)
    {
        return a.modulus_ == b.modulus_ && a.order_ == b.order_ && a.logs_ == b.logs_;
    }

    /// Pointwise product (same modulus).
    friend DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b)
    {
        if (a.modulus_ != b.modulus_) throw std::domain_error("product of characters with different moduli");
        const std::uint64_t base = std::lcm(a.order_, b.order_);
        std::vector<std::int64_t> logs(a.modulus_);
        const auto sa = static_cast<std::int64_t>(base / a.order_);
        const auto sb = static_cast<std::int64_t>(base / b.order_);
        for (std::size_t i = 0; i < logs.size(); ++i)
            logs[i] = a.logs_[i] < 0 ? -1 : (a.logs_[i] * sa + b.logs_[i] * sb) % static_cast<std::int64_t>(base);
        return DirichletCharacter(a.modulus_, base, std::move(logs));
    }

private:
    std::uint64_t modulus_;
    std::uint64_t order_;
    std::vector<std::int64_t> logs_;
    std::vector<cplx> values_;
};

inline DirichletCharacter principal_character(std::uint64_t q)
{
    if (q == 0) throw std::domain_error("modulus must be positive");
    std::vector<std::int64_t> logs(q);
    for (std::uint64_t a = 0; a < q; ++a) logs[a] = std::gcd(a, q) == 1 ? 0 : -1;
    return DirichletCharacter(q, 1, std::move(logs));
}

/// Lifts a character mod q0 to modulus q (q0 | q).
inline DirichletCharacter induce(const DirichletCharacter& chi, std::uint64_t q)
{
    const auto q0 = chi.modulus();
    if (q % q0 != 0) throw std::domain_error("induce: target modulus is not a multiple");
    std::vector<std::int64_t> logs(q);
    for (std::uint64_t a = 0; a < q; ++a)
        logs[a] = std::gcd(a, q) == 1 ? chi.logs()[a % q0] : -1;
    return DirichletCharacter(q, chi.order(), std::move(logs));
}

// ---------------------------------------------------------------------------
// Character group
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t default_character_modulus_cap = 1'000'000;

/// Structure of (Z/q)^* as a product of cyclic factors, each with a
/// discrete-log table over residues mod q.
class CharacterGroup {
public:
    explicit CharacterGroup(std::uint64_t q, std::uint64_t cap = default_character_modulus_cap)
        : q_(q)
    {
        if (q == 0) throw std::domain_error("modulus must be positive");
        if (q > cap) throw capacity_error("character modulus " + std::to_string(q) + " above cap");
        for (const auto& pp : factorize(q).factors) add_component(pp.prime, pp.exponent);
        exponent_ = 1;
        for (const auto& f : factors_) exponent_ = std::lcm(exponent_, f.order);
    }

    std::uint64_t modulus() const { return q_; }

    /// Number of characters, phi(q).
    std::uint64_t size() const
    {
        std::uint64_t n = 1;
        for (const auto& f : factors_) n *= f.order;
        return n;
    }

    /// Orders of the cyclic factors, in enumeration (mixed-radix) order.
    std::vector<std::uint64_t> factor_orders() const
    {
        std::vector<std::uint64_t> o;
        for (const auto& f : factors_) o.push_back(f.order);
        return o;
    }

    /// The character with exponent j_i on the i-th cyclic factor.
    DirichletCharacter character(const std::vector<std::uint64_t>& exps) const
    {
        if (exps.size() != factors_.size()) throw std::domain_error("exponent vector size mismatch");
        std::vector<std::int64_t> logs(q_, -1);
        for (std::uint64_t a = 0; a < q_; ++a) {
            if (std::gcd(a, q_) != 1) continue;
            std::uint64_t acc = 0;
            for (std::size_t i = 0; i < factors_.size(); ++i) {
                const auto& f = factors_[i];
                const auto l = static_cast<std::uint64_t>(f.dlog[a % f.component_modulus]);
                acc = (acc + (exps[i] % f.order) * l % f.order * (exponent_ / f.order)) % exponent_;
            }
            logs[a] = static_cast<std::int64_t>(acc);
        }
        // q = 1 has no factors; its single residue 0 is a unit
        if (q_ == 1) logs[0] = 0;
        return DirichletCharacter(q_, exponent_, std::move(logs));
    }

    /// Character number `index` in mixed-radix order over the factor orders.
    DirichletCharacter character(std::uint64_t index) const
    {
        std::vector<std::uint64_t> exps(factors_.size());
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            exps[i] = index % factors_[i].order;
            index /= factors_[i].order;
        }
        return character(exps);
    }

    /// Exponent vectors of the quadratic characters (every j_i in {0, o_i/2},
    /// not all zero), in mixed-radix order.
    std::vector<std::vector<std::uint64_t>> quadratic_exponents() const
    {
        std::vector<std::size_t> even;
        for (std::size_t i = 0; i < factors_.size(); ++i)
            if (factors_[i].order % 2 == 0) even.push_back(i);
        std::vector<std::vector<std::uint64_t>> out;
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << even.size()); ++mask) {
            std::vector<std::uint64_t> exps(factors_.size(), 0);
            for (std::size_t b = 0; b < even.size(); ++b)
                if ((mask >> b) & 1u) exps[even[b]] = factors_[even[b]].order / 2;
            out.push_back(std::move(exps));
        }
        return out;
    }

private:
    struct cyclic_factor {
        std::uint64_t order;
        std::uint64_t component_modulus;
        std::vector<std::int64_t> dlog;  // over residues mod component_modulus, -1 for non-units
    };

    static std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m)
    {
        unsigned __int128 r = 1, x = b % m;
        while (e) {
            if (e & 1u) r = r * x % m;
            x = x * x % m;
            e >>= 1;
        }
        return static_cast<std::uint64_t>(r);
    }

    static std::uint64_t primitive_root_mod_prime(std::uint64_t p)
    {
        if (p == 2) return 1;
        const auto f = factorize(p - 1);
        for (std::uint64_t g = 2; g < p; ++g) {
            bool ok = true;
            for (const auto& pp : f.factors)
                if (pow_mod(g, (p - 1) / pp.prime, p) == 1) {
                    ok = false;
                    break;
                }
            if (ok) return g;
        }
        throw std::logic_error("no primitive root");
    }

    void add_component(std::uint64_t p, unsigned k)
    {
        std::uint64_t pk = 1;
        for (unsigned i = 0; i < k; ++i) pk *= p;
        if (p != 2) {
            std::uint64_t g = primitive_root_mod_prime(p);
            if (k >= 2 && pow_mod(g, p - 1, p * p) == 1) g += p;
            const std::uint64_t order = pk / p * (p - 1);
            cyclic_factor f{order, pk, std::vector<std::int64_t>(pk, -1)};
            std::uint64_t x = 1;
            for (std::uint64_t e = 0; e < order; ++e) {
                f.dlog[x] = static_cast<std::int64_t>(e);
                x = x * g % pk;
            }
            factors_.push_back(std::move(f));
            return;
        }
        if (k == 1) return;  // (Z/2)^* is trivial
        // a = (-1)^e1 * 5^e2 mod 2^k
        cyclic_factor sign{2, pk, std::vector<std::int64_t>(pk, -1)};
        const std::uint64_t order5 = k >= 3 ? pk / 4 : 1;
        cyclic_factor five{order5, pk, std::vector<std::int64_t>(pk, -1)};
        std::uint64_t x = 1;
        for (std::uint64_t e = 0; e < order5; ++e) {
            sign.dlog[x] = 0;
            five.dlog[x] = static_cast<std::int64_t>(e);
            sign.dlog[pk - x] = 1;
            five.dlog[pk - x] = static_cast<std::int64_t>(e);
            x = x * 5 % pk;
        }
        factors_.push_back(std::move(sign));
        if (k >= 3) factors_.push_back(std::move(five));
    }

    std::uint64_t q_;
    std::uint64_t exponent_ = 1;
    std::vector<cyclic_factor> factors_;
};

/// All phi(q) characters mod q. Materializes phi(q) * q table entries, so
/// the product is capped as well as q itself.
inline std::vector<DirichletCharacter> enumerate_characters(
    std::uint64_t q, std::uint64_t cap = default_character_modulus_cap)
{
    CharacterGroup group(q, cap);
    const auto n = group.size();
    if (n * q > (std::uint64_t{1} << 28))
        throw capacity_error("enumerate_characters: phi(q) * q table entries exceed 2^28");
    std::vector<DirichletCharacter> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(group.character(i));
    return out;
}

inline std::vector<DirichletCharacter> enumerate_quadratic_characters(
    std::uint64_t q, std::uint64_t cap = default_character_modulus_cap)
{
    CharacterGroup group(q, cap);
    std::vector<DirichletCharacter> out;
    for (const auto& e : group.quadratic_exponents()) out.push_back(group.character(e));
    return out;
}

// ---------------------------------------------------------------------------
// Conductor and primitive character
// ---------------------------------------------------------------------------

struct PrimitiveDecomposition {
    std::uint64_t conductor;
    DirichletCharacter primitive;
};

inline std::vector<std::uint64_t> divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> d{1};
    for (const auto& pp : factorize(n).factors) {
        const auto size = d.size();
        std::uint64_t pk = 1;
        for (unsigned e = 1; e <= pp.exponent; ++e) {
            pk *= pp.prime;
            for (std::size_t i = 0; i < size; ++i) d.push_back(d[i] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

/// The conductor is the least d | q with chi(a) = 1 for every unit a = 1 (mod d).
inline PrimitiveDecomposition conductor(const DirichletCharacter& chi)
{
    const auto q = chi.modulus();
    const auto& logs = chi.logs();
    std::uint64_t q0 = q;
    for (const auto d : divisors(q)) {
        bool trivial = true;
        for (std::uint64_t a = 1 % d; a < q && trivial; a += d)
            if (logs[a % q] > 0) trivial = false;
        if (trivial) {
            q0 = d;
            break;
        }
    }
    std::vector<std::int64_t> plogs(q0, -1);
    for (std::uint64_t b = 0; b < q0; ++b) {
        if (std::gcd(b, q0) != 1) continue;
        for (std::uint64_t a = b; a < q + q0; a += q0) {
            if (std::gcd(a % q, q) == 1 || q == 1) {
                plogs[b] = logs[a % q];
                break;
            }
        }
    }
    if (q0 == 1) plogs[0] = 0;
    return {q0, DirichletCharacter(q0, chi.order(), std::move(plogs))};
}

// ---------------------------------------------------------------------------
// L(s, chi) on the real axis
// ---------------------------------------------------------------------------

/**
 * Evaluates L(s, chi) = sum chi(n) n^{-s} for a non-principal chi and real
 * s in (0, 1.5] (any s > 0 works) by splitting n = a + kq:
 *
 *   L(s, chi) = sum_a chi(a) [ sum_{k<K} (a + kq)^{-s} + q^{-s} zeta(s, a/q + K) ]
 *
 * and expanding each Hurwitz tail with Euler-Maclaurin. Because
 * sum_a chi(a) = 0 the pole term y^{1-s}/(s-1) may be replaced by
 * (y^{1-s} - 1)/(s-1), which stays finite at s = 1. Logs are cached per
 * character, so repeated evaluation costs O(Kq) exponentials.
 */
class LSeries {
public:
    static constexpr int head_periods = 8;
    static constexpr int bernoulli_terms = 8;

    explicit LSeries(const DirichletCharacter& chi) : chi_(chi)
    {
        if (chi.is_principal())
            throw std::domain_error("L(s, chi) for the principal character has a pole at s = 1");
        const auto q = chi.modulus();
        log_q_ = std::log(static_cast<double>(q));
        for (std::uint64_t a = 1; a <= q; ++a) {
            const cplx c = chi(static_cast<std::int64_t>(a));
            if (c == cplx{0.0, 0.0}) continue;
            term t;
            t.weight = c;
            for (int k = 0; k < head_periods; ++k)
                t.head_logs[k] = std::log(static_cast<double>(a + static_cast<std::uint64_t>(k) * q));
            t.y = static_cast<double>(a) / static_cast<double>(q) + head_periods;
            t.log_y = std::log(t.y);
            terms_.push_back(t);
        }
    }

    cplx operator()(double s) const
    {
        if (!(s > 0.0)) throw std::domain_error("L(s, chi) evaluated for s <= 0");
        // Bernoulli numbers B_2 .. B_16 over (2j)!
        static constexpr double b_over_fact[bernoulli_terms] = {
            1.0 / 6.0 / 2.0,
            -1.0 / 30.0 / 24.0,
            1.0 / 42.0 / 720.0,
            -1.0 / 30.0 / 40320.0,
            5.0 / 66.0 / 3628800.0,
            -691.0 / 2730.0 / 479001600.0,
            7.0 / 6.0 / 87178291200.0,
            -3617.0 / 510.0 / 20922789888000.0,
        };
        const double scale = std::exp(-s * log_q_);
        cplx total{0.0, 0.0};
        for (const auto& t : terms_) {
            double head = 0.0;
            for (int k = 0; k < head_periods; ++k) head += std::exp(-s * t.head_logs[k]);
            const double u = (1.0 - s) * t.log_y;
            const double pole = std::abs(u) < 1e-300 ? -t.log_y : -t.log_y * std::expm1(u) / u;
            const double y_s = std::exp(-s * t.log_y);
            double tail = pole + 0.5 * y_s;
            // rising factorial s(s+1)...(s+2j-2) times y^{-s-2j+1}
            double rising = s;
            double ypow = y_s / t.y;
            const double inv_y2 = 1.0 / (t.y * t.y);
            for (int j = 0; j < bernoulli_terms; ++j) {
                tail += b_over_fact[j] * rising * ypow;
                rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
                ypow *= inv_y2;
            }
            total += t.weight * (head + scale * tail);
        }
        if (chi_.is_real()) total.imag(0.0);
        return total;
    }

private:
    struct term {
        cplx weight;
        double head_logs[head_periods];
        double y;
        double log_y;
    };

    DirichletCharacter chi_;
    double log_q_ = 0.0;
    std::vector<term> terms_;
};

inline cplx l_function_real(const DirichletCharacter& chi, double s)
{
    return LSeries(chi)(s);
}

// ---------------------------------------------------------------------------
// Exceptional zero scan
// ---------------------------------------------------------------------------

struct ExceptionalZeroResult {
    bool found = false;
    double beta = 0.0;
    std::size_t character_index = 0;  // into enumerate_quadratic_characters(q)
    bool injected = false;
    bool inconclusive = false;        // near-zero seen but not confirmed
    double min_abs_l = 0.0;           // smallest |L| observed on the scan grid
    double window_low = 0.0;          // scanned window (window_low, 1)
};

struct ZeroScanOptions {
    int grid_points = 512;
    int bisection_steps = 60;
    double zero_tolerance = 1e-8;
    double inconclusive_tolerance = 1e-6;
};

/// Scans every quadratic character mod q for a real zero of L(s, chi) in
/// (max(1/2, 1 - c/log q), 1).
inline ExceptionalZeroResult exceptional_zero_scan(std::uint64_t q, double c = 1.0,
                                                   const ZeroScanOptions& opt = {})
{
    if (q < 3) throw std::domain_error("exceptional_zero_scan requires q >= 3");
    if (!(c > 0.0)) throw std::domain_error("zero-free region constant must be positive");
    ExceptionalZeroResult res;
    const double lo = std::max(0.5, 1.0 - c / std::log(static_cast<double>(q)));
    const double hi = 1.0;
    res.window_low = lo;
    res.min_abs_l = std::numeric_limits<double>::infinity();
    const auto chars = enumerate_quadratic_characters(q);
    for (std::size_t idx = 0; idx < chars.size() && !res.found; ++idx) {
        const LSeries L(chars[idx]);
        const int n = opt.grid_points;
        double prev_s = lo, prev_v = L(lo).real();
        res.min_abs_l = std::min(res.min_abs_l, std::abs(prev_v));
        auto accept = [&](double beta) {
            res.found = true;
            res.beta = beta;
            res.character_index = idx;
        };
        if (std::abs(prev_v) < opt.zero_tolerance) {
            accept(prev_s);
            break;
        }
        for (int i = 1; i < n; ++i) {
            const double s = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
            const double v = L(s).real();
            res.min_abs_l = std::min(res.min_abs_l, std::abs(v));
            if (std::abs(v) < opt.zero_tolerance) {
                accept(s);
                break;
            }
            if ((v < 0.0) != (prev_v < 0.0)) {
                double a = prev_s, b = s, fa = prev_v;
                for (int it = 0; it < opt.bisection_steps; ++it) {
                    const double m = 0.5 * (a + b);
                    const double fm = L(m).real();
                    if ((fm < 0.0) == (fa < 0.0)) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
                const double beta = 0.5 * (a + b);
                if (std::abs(L(beta).real()) < opt.zero_tolerance)
                    accept(beta);
                else
                    res.inconclusive = true;  // sign change without a resolvable zero
                break;
            }
            prev_s = s;
            prev_v = v;
        }
    }
    if (!res.found && res.min_abs_l < opt.inconclusive_tolerance) res.inconclusive = true;
    return res;
}

/// Synthetic exceptional zero: bypasses the scan so downstream code paths
/// that depend on an exceptional character can be exercised.
inline ExceptionalZeroResult inject_exceptional_zero(std::uint64_t q, double beta,
                                                     std::size_t character_index = 0)
{
    if (!(beta >= 0.5 && beta < 1.0)) throw std::domain_error("injected beta must lie in [1/2, 1)");
    if (character_index >= enumerate_quadratic_characters(q).size())
        throw std::domain_error("no quadratic character with that index mod q");
    ExceptionalZeroResult r;
    r.found = true;
    r.injected = true;
    r.beta = beta;
    r.character_index = character_index;
    return r;
}

}  // namespace primeavg
