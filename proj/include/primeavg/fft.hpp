#pragma once

// Thin FFTW3 wrapper. Plans are created once per (length, kind) under a
// mutex and executed through the new-array interface, which FFTW documents
// as thread-safe. All transforms are out-of-place and unnormalized:
//
//   forward:  X[k] = sum_j x[j] e^{-2 pi i jk/n}
//   backward: x[j] = sum_k X[k] e^{+2 pi i jk/n}

#include <fftw3.h>

#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "primeavg/errors.hpp"

namespace primeavg {

using cplx = std::complex<double>;

inline constexpr std::size_t max_fft_length = std::size_t{1} << 26;

constexpr bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

constexpr std::uint64_t next_power_of_two(std::uint64_t n)
{
    std::uint64_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

namespace detail {

enum class plan_kind { forward, backward, r2c, c2r };

class plan_cache {
public:
    static plan_cache& instance()
    {
        static plan_cache cache;
        return cache;
    }

    fftw_plan get(std::size_t n, plan_kind kind)
    {
        std::lock_guard lock(mu_);
        const auto key = std::make_pair(n, kind);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        const int len = static_cast<int>(n);
        auto* cin = fftw_alloc_complex(n);
        auto* cout = fftw_alloc_complex(n);
        auto* rbuf = fftw_alloc_real(n);
        fftw_plan p = nullptr;
        switch (kind) {
        case plan_kind::forward: p = fftw_plan_dft_1d(len, cin, cout, FFTW_FORWARD, flags); break;
        case plan_kind::backward: p = fftw_plan_dft_1d(len, cin, cout, FFTW_BACKWARD, flags); break;
        case plan_kind::r2c: p = fftw_plan_dft_r2c_1d(len, rbuf, cout, flags); break;
        case plan_kind::c2r: p = fftw_plan_dft_c2r_1d(len, cin, rbuf, flags); break;
        }
        fftw_free(cin);
        fftw_free(cout);
        fftw_free(rbuf);
        plans_.emplace(key, p);
        return p;
    }

    plan_cache(const plan_cache&) = delete;
    plan_cache& operator=(const plan_cache&) = delete;

private:
    plan_cache() = default;
    ~plan_cache()
    {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    std::mutex mu_;
    std::map<std::pair<std::size_t, plan_kind>, fftw_plan> plans_;
};

inline void check_length(std::size_t n)
{
    if (n == 0 || n > max_fft_length) throw capacity_error("FFT length out of range");
}

inline fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace detail

inline std::vector<cplx> fft_forward(std::span<const cplx> in)
{
    detail::check_length(in.size());
    std::vector<cplx> src(in.begin(), in.end()), out(in.size());
    fftw_execute_dft(detail::plan_cache::instance().get(in.size(), detail::plan_kind::forward),
                     detail::as_fftw(src.data()), detail::as_fftw(out.data()));
    return out;
}

inline std::vector<cplx> fft_backward(std::span<const cplx> in)
{
    detail::check_length(in.size());
    std::vector<cplx> src(in.begin(), in.end()), out(in.size());
    fftw_execute_dft(detail::plan_cache::instance().get(in.size(), detail::plan_kind::backward),
                     detail::as_fftw(src.data()), detail::as_fftw(out.data()));
    return out;
}

/// Real-input forward transform; returns the n/2+1 non-redundant bins.
inline std::vector<cplx> rfft(std::span<const double> in)
{
    detail::check_length(in.size());
    std::vector<double> src(in.begin(), in.end());
    std::vector<cplx> out(in.size() / 2 + 1);
    fftw_execute_dft_r2c(detail::plan_cache::instance().get(in.size(), detail::plan_kind::r2c),
                         src.data(), detail::as_fftw(out.data()));
    return out;
}

/// Inverse of rfft for a length-n real signal (unnormalized).
inline std::vector<double> irfft(std::span<const cplx> half, std::size_t n)
{
    detail::check_length(n);
    if (half.size() != n / 2 + 1) throw std::domain_error("irfft: half-spectrum size mismatch");
    std::vector<cplx> src(half.begin(), half.end());  // c2r destroys its input
    std::vector<double> out(n);
    fftw_execute_dft_c2r(detail::plan_cache::instance().get(n, detail::plan_kind::c2r),
                         detail::as_fftw(src.data()), out.data());
    return out;
}

}  // namespace primeavg
