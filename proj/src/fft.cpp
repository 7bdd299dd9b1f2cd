#include "parc/fft.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace parc {

namespace {

using LongComplex = std::complex<long double>;

/// exp(-2 pi i num/den) evaluated in extended precision.
LongComplex unit_root(std::size_t num, std::size_t den) {
    const long double angle = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>(num % den) /
                              static_cast<long double>(den);
    return {std::cos(angle), std::sin(angle)};
}

template <typename T>
Complex<T> narrow(LongComplex z) {
    return {static_cast<T>(z.real()), static_cast<T>(z.imag())};
}

std::vector<std::size_t> factorize(std::size_t n) {
    std::vector<std::size_t> out;
    while (n % 4 == 0) {
        out.push_back(4);
        n /= 4;
    }
    while (n % 2 == 0) {
        out.push_back(2);
        n /= 2;
    }
    for (std::size_t p = 3; p * p <= n; p += 2)
        while (n % p == 0) {
            out.push_back(p);
            n /= p;
        }
    if (n > 1) out.push_back(n);
    return out;
}

bool is_pow2(std::size_t n) { return (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

template <typename T>
inline Complex<T> mul_neg_i(Complex<T> z) {
    return {z.imag(), -z.real()};
}

/// One Stockham pass of radix p (P == 0: odd p chosen at run time).
/// Odd radices pair r with p - r so the inner sums use real coefficients:
///   y[m], y[p-m] = v0 + sum c(rm) (v_r + v_{p-r})  -/+  i sum s(rm) (v_r - v_{p-r})
template <typename T, std::size_t P, bool Twiddle>
void radix_pass(const Complex<T>* src, Complex<T>* dst, std::size_t n, std::size_t p_rt, std::size_t ns,
                const Complex<T>* tw, const T* cos_tab, const T* sin_tab) {
    constexpr std::size_t kCap = P ? P : kMaxDirectRadix;
    const std::size_t p = P ? P : p_rt;
    const std::size_t stride = n / p;
    const std::size_t blocks = stride / ns;
    std::array<Complex<T>, kCap> v;

    for (std::size_t q = 0; q < blocks; ++q) {
        for (std::size_t k = 0; k < ns; ++k) {
            const std::size_t j = q * ns + k;
            const std::size_t base = q * ns * p + k;
            v[0] = src[j];
            if constexpr (Twiddle) {
                const Complex<T>* w = tw + k * (p - 1);
                for (std::size_t r = 1; r < p; ++r) v[r] = src[j + r * stride] * w[r - 1];
            } else {
                for (std::size_t r = 1; r < p; ++r) v[r] = src[j + r * stride];
            }

            if constexpr (P == 2) {
                dst[base] = v[0] + v[1];
                dst[base + ns] = v[0] - v[1];
            } else if constexpr (P == 3) {
                const T half_sqrt3 = static_cast<T>(0.86602540378443864676372317075293618L);
                const Complex<T> t1 = v[1] + v[2];
                const Complex<T> t2 = v[0] - t1 * T(0.5);
                const Complex<T> t3 = mul_neg_i(v[1] - v[2]) * half_sqrt3;
                dst[base] = v[0] + t1;
                dst[base + ns] = t2 + t3;
                dst[base + 2 * ns] = t2 - t3;
            } else if constexpr (P == 4) {
                const Complex<T> s02 = v[0] + v[2], d02 = v[0] - v[2];
                const Complex<T> s13 = v[1] + v[3], d13 = mul_neg_i(v[1] - v[3]);
                dst[base] = s02 + s13;
                dst[base + ns] = d02 + d13;
                dst[base + 2 * ns] = s02 - s13;
                dst[base + 3 * ns] = d02 - d13;
            } else {
                const std::size_t h = p / 2;
                std::array<Complex<T>, kCap / 2 + 1> t, u;
                Complex<T> y0 = v[0];
                for (std::size_t r = 1; r <= h; ++r) {
                    t[r] = v[r] + v[p - r];
                    u[r] = v[r] - v[p - r];
                    y0 += t[r];
                }
                dst[base] = y0;
                for (std::size_t m = 1; m <= h; ++m) {
                    T ar = v[0].real(), ai = v[0].imag(), br = 0, bi = 0;
                    std::size_t idx = 0;
                    for (std::size_t r = 1; r <= h; ++r) {
                        idx += m;
                        if (idx >= p) idx -= p;
                        ar += cos_tab[idx] * t[r].real();
                        ai += cos_tab[idx] * t[r].imag();
                        br += sin_tab[idx] * u[r].real();
                        bi += sin_tab[idx] * u[r].imag();
                    }
                    // -i * B and +i * B
                    dst[base + m * ns] = {ar + bi, ai - br};
                    dst[base + (p - m) * ns] = {ar - bi, ai + br};
                }
            }
        }
    }
}

}  // namespace

const char* to_string(FftStrategy s) {
    switch (s) {
        case FftStrategy::Radix2: return "radix-2";
        case FftStrategy::MixedRadix: return "mixed-radix";
        case FftStrategy::Bluestein: return "bluestein";
    }
    return "?";
}

template <typename T>
FftPlan<T>::FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("FftPlan: length must be >= 1");
    const auto factors = factorize(n);
    std::size_t largest_prime = 1;
    for (const std::size_t f : factors) largest_prime = std::max(largest_prime, f == 4 ? std::size_t{2} : f);

    if (largest_prime > kMaxDirectRadix) {
        strategy_ = FftStrategy::Bluestein;
        const std::size_t m = next_pow2(2 * n - 1);
        inner_ = std::make_unique<const FftPlan>(m);
        chirp_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            // exp(-i pi k^2 / N) = exp(-2 pi i (k^2 mod 2N) / 2N)
            const auto k2 = static_cast<std::size_t>((static_cast<unsigned long long>(k) * k) % (2ULL * n));
            chirp_[k] = narrow<T>(unit_root(k2, 2 * n));
        }
        std::vector<Complex<T>> filter(m, Complex<T>(0));
        filter[0] = std::conj(chirp_[0]);
        for (std::size_t k = 1; k < n; ++k) filter[k] = filter[m - k] = std::conj(chirp_[k]);
        chirp_filter_.resize(m);
        auto ws = inner_->make_workspace();
        inner_->forward(filter, chirp_filter_, ws);
        return;
    }

    strategy_ = is_pow2(n) ? FftStrategy::Radix2 : FftStrategy::MixedRadix;
    radices_ = factors;
    std::size_t span = 1;
    for (const std::size_t p : radices_) {
        Stage st{p, span, {}};
        st.twiddles.resize(span * (p - 1));
        for (std::size_t k = 0; k < span; ++k)
            for (std::size_t r = 1; r < p; ++r) st.twiddles[k * (p - 1) + (r - 1)] = narrow<T>(unit_root(r * k, span * p));
        stages_.push_back(std::move(st));
        span *= p;
        if (p > 4 && (odd_cos_.size() <= p || odd_cos_[p].empty())) {
            if (odd_cos_.size() <= p) {
                odd_cos_.resize(p + 1);
                odd_sin_.resize(p + 1);
            }
            odd_cos_[p].resize(p);
            odd_sin_[p].resize(p);
            for (std::size_t m = 0; m < p; ++m) {
                // unit_root is exp(-2 pi i m/p), so its imaginary part is -sin.
                const LongComplex z = unit_root(m, p);
                odd_cos_[p][m] = static_cast<T>(z.real());
                odd_sin_[p][m] = static_cast<T>(-z.imag());
            }
        }
    }
}

template <typename T>
FftWorkspace<T> FftPlan<T>::make_workspace() const {
    const std::size_t m = strategy_ == FftStrategy::Bluestein ? inner_->size() : n_;
    FftWorkspace<T> ws;
    ws.a.resize(m);
    ws.b.resize(m);
    ws.c.resize(std::max(m, n_));
    return ws;
}

template <typename T>
void FftPlan<T>::check_length(std::size_t got) const {
    if (got != n_)
        throw std::invalid_argument("FFT length mismatch: plan is " + std::to_string(n_) + ", input is " +
                                    std::to_string(got));
}

template <typename T>
void FftPlan<T>::stockham(std::span<const Complex<T>> in, std::span<Complex<T>> out, FftWorkspace<T>& ws) const {
    const std::size_t n = n_;
    if (ws.a.size() < n) ws.a.resize(n);
    if (ws.b.size() < n) ws.b.resize(n);
    Complex<T>* src = ws.a.data();
    Complex<T>* dst = ws.b.data();
    std::copy(in.begin(), in.end(), src);

    for (const Stage& st : stages_) {
        const bool tw = st.span > 1;
        const T* c = st.radix > 4 ? odd_cos_[st.radix].data() : nullptr;
        const T* s = st.radix > 4 ? odd_sin_[st.radix].data() : nullptr;
        switch (st.radix) {
            case 2: tw ? radix_pass<T, 2, true>(src, dst, n, st.radix, st.span, st.twiddles.data(), c, s) : radix_pass<T, 2, false>(src, dst, n, st.radix, st.span, st.twiddles.data(), c, s); break;
            case 3: tw ? radix_pass<T, 3, true>(src, dst, n, st.radix, st.span, st.twiddles.data(), c, s) : radix_pass<T, 3, false>(src, dst, n, st.radix, st.span, st.twiddles.data(), c, s); break;
            case 4: tw ? radix_pass<T, 4, true>(src, dst, n, st.radix, st.span, st.twiddles.data(), c, s) : radix_pass<T, 4, false>(src, dst, n, st.radix, st.span, st.twiddles.data(), c, s); break;
            case 5: tw ? radix_pass<T, 5, true>(src, dst, n, st.radix, st.span, st.twiddles.data(), c, s) : radix_pass<T, 5, false>(src, dst, n, st.radix, st.span, st.twiddles.data(), c, s); break;
            case 7: tw ? radix_pass<T, 7, true>(src, dst, n, st.radix, st.span, st.twiddles.data(), c, s) : radix_pass<T, 7, false>(src, dst, n, st.radix, st.span, st.twiddles.data(), c, s); break;
            default: tw ? radix_pass<T, 0, true>(src, dst, n, st.radix, st.span, st.twiddles.data(), c, s) : radix_pass<T, 0, false>(src, dst, n, st.radix, st.span, st.twiddles.data(), c, s);
        }
        std::swap(src, dst);
    }
    std::copy(src, src + n, out.begin());
}

template <typename T>
void FftPlan<T>::bluestein(std::span<const Complex<T>> in, std::span<Complex<T>> out, FftWorkspace<T>& ws) const {
    const std::size_t n = n_, m = inner_->size();
    if (ws.c.size() < m) ws.c.resize(m);
    std::span<Complex<T>> buf(ws.c.data(), m);
    for (std::size_t k = 0; k < n; ++k) buf[k] = in[k] * chirp_[k];
    std::fill(buf.begin() + static_cast<std::ptrdiff_t>(n), buf.end(), Complex<T>(0));
    inner_->stockham(buf, buf, ws);
    // Circular convolution with the chirp filter, inverse via conjugation.
    for (std::size_t k = 0; k < m; ++k) buf[k] = std::conj(buf[k] * chirp_filter_[k]);
    inner_->stockham(buf, buf, ws);
    const T scale = T(1) / static_cast<T>(m);
    for (std::size_t k = 0; k < n; ++k) out[k] = std::conj(buf[k]) * scale * chirp_[k];
}

template <typename T>
void FftPlan<T>::forward(std::span<const Complex<T>> in, std::span<Complex<T>> out, FftWorkspace<T>& ws) const {
    check_length(in.size());
    check_length(out.size());
    if (strategy_ == FftStrategy::Bluestein)
        bluestein(in, out, ws);
    else
        stockham(in, out, ws);
}

template <typename T>
void FftPlan<T>::inverse(std::span<const Complex<T>> in, std::span<Complex<T>> out, FftWorkspace<T>& ws) const {
    check_length(in.size());
    check_length(out.size());
    // ifft(X) = conj(fft(conj(X))) / N
    std::transform(in.begin(), in.end(), out.begin(), [](Complex<T> z) { return std::conj(z); });
    forward(out, out, ws);
    const T scale = T(1) / static_cast<T>(n_);
    for (auto& z : out) z = std::conj(z) * scale;
}

template <typename T>
void FftPlan<T>::forward_real_pair(std::span<const T> a, std::span<const T> b, std::span<Complex<T>> a_half,
                                   std::span<Complex<T>> b_half, FftWorkspace<T>& ws) const {
    check_length(a.size());
    check_length(b.size());
    const std::size_t n = n_, bins = n / 2 + 1;
    if (a_half.size() != bins || b_half.size() != bins)
        throw std::invalid_argument("forward_real_pair: half spectra need " + std::to_string(bins) + " bins");
    if (ws.c.size() < n) ws.c.resize(n);
    std::span<Complex<T>> z(ws.c.data(), n);
    for (std::size_t k = 0; k < n; ++k) z[k] = {a[k], b[k]};
    forward(z, z, ws);
    for (std::size_t k = 0; k < bins; ++k) {
        const Complex<T> zk = z[k];
        const Complex<T> zc = std::conj(z[k == 0 ? 0 : n - k]);
        a_half[k] = (zk + zc) * T(0.5);
        b_half[k] = mul_neg_i(zk - zc) * T(0.5);
    }
}

template <typename T>
void FftPlan<T>::inverse_real_pair(std::span<const Complex<T>> a_half, std::span<const Complex<T>> b_half,
                                   std::span<T> a, std::span<T> b, FftWorkspace<T>& ws) const {
    check_length(a.size());
    check_length(b.size());
    const std::size_t n = n_, bins = n / 2 + 1;
    if (a_half.size() != bins || b_half.size() != bins)
        throw std::invalid_argument("inverse_real_pair: half spectra need " + std::to_string(bins) + " bins");
    if (ws.c.size() < n) ws.c.resize(n);
    std::span<Complex<T>> z(ws.c.data(), n);
    const std::size_t nyquist = n % 2 == 0 ? n / 2 : bins;  // == bins means none
    for (std::size_t k = 0; k < bins; ++k) {
        Complex<T> ak = a_half[k], bk = b_half[k];
        if (k == 0 || k == nyquist) {
            ak = {ak.real(), 0};
            bk = {bk.real(), 0};
        }
        z[k] = ak + Complex<T>(-bk.imag(), bk.real());
        if (k != 0 && k != nyquist) {
            const Complex<T> ac = std::conj(ak), bc = std::conj(bk);
            z[n - k] = ac + Complex<T>(-bc.imag(), bc.real());
        }
    }
    inverse(z, z, ws);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = z[k].real();
        b[k] = z[k].imag();
    }
}

template <typename T>
Spectrum<T> dft_naive(std::span<const Complex<T>> x) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("dft_naive: empty input");
    Spectrum<T> s{n, false, std::vector<Complex<T>>(n)};
    for (std::size_t k = 0; k < n; ++k) {
        LongComplex acc = 0;
        for (std::size_t t = 0; t < n; ++t)
            acc += LongComplex(x[t].real(), x[t].imag()) * unit_root((t * k) % n, n);
        s.bins[k] = narrow<T>(acc);
    }
    return s;
}

template <typename T>
Spectrum<T> dft_naive(std::span<const T> x) {
    std::vector<Complex<T>> z(x.begin(), x.end());
    return dft_naive<T>(std::span<const Complex<T>>(z));
}

template <typename T>
Spectrum<T> fft(std::span<const Complex<T>> x, const FftPlan<T>& plan) {
    Spectrum<T> s{x.size(), false, std::vector<Complex<T>>(x.size())};
    auto ws = plan.make_workspace();
    plan.forward(x, s.bins, ws);
    return s;
}

template <typename T>
std::vector<Complex<T>> ifft(const Spectrum<T>& s, const FftPlan<T>& plan) {
    if (s.half) throw std::invalid_argument("ifft: expected a full spectrum (use irfft for half spectra)");
    std::vector<Complex<T>> out(s.bins.size());
    auto ws = plan.make_workspace();
    plan.inverse(s.bins, out, ws);
    return out;
}

template <typename T>
Spectrum<T> rfft(std::span<const T> x, const FftPlan<T>& plan) {
    const std::size_t n = x.size();
    Spectrum<T> s{n, true, std::vector<Complex<T>>(n / 2 + 1)};
    std::vector<T> zero(n, T(0));
    std::vector<Complex<T>> unused(n / 2 + 1);
    auto ws = plan.make_workspace();
    plan.forward_real_pair(x, zero, s.bins, unused, ws);
    return s;
}

template <typename T>
std::vector<T> irfft(const Spectrum<T>& s, const FftPlan<T>& plan) {
    const std::size_t n = plan.size();
    if (!s.half || s.source_length != n)
        throw std::invalid_argument("irfft: expected a half spectrum of length " + std::to_string(n));
    std::vector<T> out(n), unused(n);
    std::vector<Complex<T>> zero(n / 2 + 1, Complex<T>(0));
    auto ws = plan.make_workspace();
    plan.inverse_real_pair(s.bins, zero, out, unused, ws);
    return out;
}

#define PARC_INSTANTIATE(T)                                                           \
    template class FftPlan<T>;                                                        \
    template Spectrum<T> dft_naive<T>(std::span<const Complex<T>>);                   \
    template Spectrum<T> dft_naive<T>(std::span<const T>);                            \
    template Spectrum<T> fft<T>(std::span<const Complex<T>>, const FftPlan<T>&);      \
    template std::vector<Complex<T>> ifft<T>(const Spectrum<T>&, const FftPlan<T>&);  \
    template Spectrum<T> rfft<T>(std::span<const T>, const FftPlan<T>&);              \
    template std::vector<T> irfft<T>(const Spectrum<T>&, const FftPlan<T>&);

PARC_INSTANTIATE(float)
PARC_INSTANTIATE(double)

#undef PARC_INSTANTIATE

}  // namespace parc
