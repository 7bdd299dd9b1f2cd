#pragma once

#include <cstddef>
#include <vector>

#include "parc/fft.hpp"
#include "parc/parc.hpp"
#include "parc/tensor.hpp"

namespace parc {

enum class SpectrumPath {
    Real,     // half spectra, two real lines per complex transform
    Complex,  // full N-bin spectrum per line
};

/// Depthwise ParC evaluated in the Fourier domain:
///   Y(k) = conj(W(k)) * X(k)
/// where X is the spectrum of x + pe along the layer's axis. Kernel spectra
/// are computed once at construction; forward() may be called concurrently.
template <typename T>
class FastParc {
public:
    FastParc(const ParcParams<T>& params, std::size_t length, SpectrumPath path = SpectrumPath::Real);

    std::size_t length() const { return resampled_.length; }
    const ResampledParc<T>& resampled() const { return resampled_; }
    const FftPlan<T>& plan() const { return plan_; }
    /// conj(W) for channel c: N/2+1 bins on the real path, N on the complex path.
    const Complex<T>* kernel_spectrum(std::size_t c) const { return kernel_spectra_.data() + c * bins_; }

    Tensor4<T> forward(const Tensor4<T>& x) const;

private:
    ResampledParc<T> resampled_;
    SpectrumPath path_;
    FftPlan<T> plan_;
    std::size_t bins_;
    std::vector<Complex<T>> kernel_spectra_;
};

/// One-shot Fast-ParC forward (builds and discards the cached spectra).
/// Depthwise layers only; throws std::invalid_argument for dense ones.
template <typename T>
Tensor4<T> fast_parc_forward(const Tensor4<T>& x, const ParcParams<T>& p, SpectrumPath path = SpectrumPath::Real);

}  // namespace parc
