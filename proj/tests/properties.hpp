#pragma once

// Fourier identities checked on random sequences. Shared by the unit tests
// and the acceptance suite; each returns the worst relative error seen.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "parc/fft.hpp"
#include "parc/random.hpp"

namespace parc::props {

using cd = std::complex<double>;

inline std::vector<double> random_real(std::size_t n, Xoshiro256ss& rng) {
    std::vector<double> v(n);
    fill_uniform<double>(v, rng);
    return v;
}

inline std::vector<cd> to_complex(const std::vector<double>& v) { return {v.begin(), v.end()}; }

inline std::vector<cd> spectrum(const std::vector<double>& x, const FftPlan<double>& plan) {
    const auto z = to_complex(x);
    return fft<double>(z, plan).bins;
}

inline std::size_t wrap(long i, std::size_t n) {
    const long m = static_cast<long>(n);
    return static_cast<std::size_t>(((i % m) + m) % m);
}

/// Any N consecutive samples of the period-N extension sum to the same value.
inline double periodic_sum_invariance(std::size_t n, Xoshiro256ss& rng) {
    const auto x = random_real(n, rng);
    double base = 0, scale = 0;
    for (const double v : x) {
        base += v;
        scale += std::abs(v);
    }
    double worst = 0;
    for (long m = -static_cast<long>(n); m <= 2 * static_cast<long>(n); ++m) {
        double s = 0;
        for (long i = m; i < m + static_cast<long>(n); ++i) s += x[wrap(i, n)];
        worst = std::max(worst, std::abs(s - base) / std::max(scale, 1e-300));
    }
    return worst;
}

/// DFT of x((-n))_N equals conj(X(k)) for real x.
inline double flip_conjugates_spectrum(std::size_t n, Xoshiro256ss& rng, const FftPlan<double>& plan) {
    const auto x = random_real(n, rng);
    std::vector<double> flipped(n);
    for (std::size_t t = 0; t < n; ++t) flipped[t] = x[wrap(-static_cast<long>(t), n)];
    auto expected = spectrum(x, plan);
    for (auto& z : expected) z = std::conj(z);
    return oracle::relative_l_inf(spectrum(flipped, plan), expected);
}

/// DFT of x((n-m))_N equals W_N^{mk} X(k) for every shift m < N.
inline double shift_modulates_spectrum(std::size_t n, Xoshiro256ss& rng, const FftPlan<double>& plan) {
    const auto x = random_real(n, rng);
    const auto spec = spectrum(x, plan);
    double worst = 0;
    for (std::size_t m = 0; m < n; ++m) {
        std::vector<double> shifted(n);
        for (std::size_t t = 0; t < n; ++t) shifted[t] = x[wrap(static_cast<long>(t) - static_cast<long>(m), n)];
        std::vector<cd> expected(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((m * k) % n) / static_cast<double>(n);
            expected[k] = std::polar(1.0, angle) * spec[k];
        }
        worst = std::max(worst, oracle::relative_l_inf(spectrum(shifted, plan), expected));
    }
    return worst;
}

/// sum_n w(n) x((n+m))_N == sum_n x(n) w((n-m))_N for every m.
inline double correlation_rewrite(std::size_t n, Xoshiro256ss& rng) {
    const auto w = random_real(n, rng);
    const auto x = random_real(n, rng);
    double worst = 0;
    for (std::size_t m = 0; m < n; ++m) {
        double lhs = 0, rhs = 0, scale = 0;
        for (std::size_t t = 0; t < n; ++t) {
            lhs += w[t] * x[(t + m) % n];
            rhs += x[t] * w[wrap(static_cast<long>(t) - static_cast<long>(m), n)];
            scale += std::abs(w[t] * x[(t + m) % n]);
        }
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(scale, 1e-300));
    }
    return worst;
}

/// IDFT(conj(W) . X) equals the spatial circular correlation of w and x.
inline double fourier_form_matches_correlation(std::size_t n, Xoshiro256ss& rng, const FftPlan<double>& plan) {
    const auto w = random_real(n, rng);
    const auto x = random_real(n, rng);
    const auto ws = spectrum(w, plan);
    auto xs = spectrum(x, plan);
    for (std::size_t k = 0; k < n; ++k) xs[k] *= std::conj(ws[k]);
    const auto y = ifft<double>(Spectrum<double>{n, false, xs}, plan);
    const auto ref = oracle::circular_correlation(w, x);
    double num = 0, den = 0;
    for (std::size_t t = 0; t < n; ++t) {
        num = std::max(num, std::abs(y[t].real() - ref[t]));
        num = std::max(num, std::abs(y[t].imag()));
        den = std::max(den, std::abs(ref[t]));
    }
    return num / std::max(den, 1e-300);
}

/// Plan output against the O(N^2) definition on a random complex input.
inline double fft_vs_naive(std::size_t n, Xoshiro256ss& rng) {
    const FftPlan<double> plan(n);
    std::vector<cd> z(n);
    for (auto& v : z) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    return oracle::relative_l_inf(fft<double>(z, plan).bins, dft_naive<double>(std::span<const cd>(z)).bins);
}

}  // namespace parc::props
