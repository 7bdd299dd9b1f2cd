#include "parc/fast_parc.hpp"

#include <stdexcept>

#include "parc/parallel.hpp"

namespace parc {

template <typename T>
FastParc<T>::FastParc(const ParcParams<T>& params, std::size_t length, SpectrumPath path)
    : resampled_(resample(params, length)),
      path_(path),
      plan_(length),
      bins_(path == SpectrumPath::Real ? length / 2 + 1 : length) {
    if (params.mode != ParcMode::Depthwise)
        throw std::invalid_argument("FastParc: only depthwise layers have a Fourier implementation");
    const std::size_t channels = resampled_.in_channels;
    kernel_spectra_.resize(channels * bins_);
    auto ws = plan_.make_workspace();
    std::vector<Complex<T>> full(length);
    for (std::size_t c = 0; c < channels; ++c) {
        const T* w = resampled_.kernel_ptr(c);
        Complex<T>* dst = kernel_spectra_.data() + c * bins_;
        for (std::size_t k = 0; k < length; ++k) full[k] = {w[k], T(0)};
        plan_.forward(full, full, ws);
        for (std::size_t k = 0; k < bins_; ++k) dst[k] = std::conj(full[k]);
    }
}

template <typename T>
Tensor4<T> FastParc<T>::forward(const Tensor4<T>& x) const {
    const Shape s = parc_output_shape(x.shape(), resampled_);
    const Tensor4<T> xp = add_positional(x, resampled_);
    Tensor4<T> y(s);
    const std::size_t n = resampled_.length;
    const std::size_t cross = s.cross_length(resampled_.orientation);

    parallel_for(s.batch * s.channels, [&](std::size_t begin, std::size_t end) {
        auto ws = plan_.make_workspace();
        std::vector<T> la(n), lb(n);
        std::vector<Complex<T>> ha(bins_), hb(bins_), full(n);

        for (std::size_t bc = begin; bc < end; ++bc) {
            const std::size_t b = bc / s.channels, c = bc % s.channels;
            const Complex<T>* wspec = kernel_spectrum(c);
            const T bias = resampled_.bias[c];
            const T* src = xp.data().data();
            T* dst = y.data().data();

            auto gather = [&](std::size_t t, std::vector<T>& line) {
                const AxisLine l = xp.line(resampled_.orientation, b, c, t);
                for (std::size_t k = 0; k < n; ++k) line[k] = src[l.offset + k * l.stride];
            };
            auto scatter = [&](std::size_t t, const std::vector<T>& line) {
                const AxisLine l = y.line(resampled_.orientation, b, c, t);
                for (std::size_t k = 0; k < n; ++k) dst[l.offset + k * l.stride] = line[k] + bias;
            };

            if (path_ == SpectrumPath::Real) {
                for (std::size_t t = 0; t < cross; t += 2) {
                    const bool has_pair = t + 1 < cross;
                    gather(t, la);
                    if (has_pair)
                        gather(t + 1, lb);
                    else
                        std::fill(lb.begin(), lb.end(), T(0));
                    plan_.forward_real_pair(la, lb, ha, hb, ws);
                    for (std::size_t k = 0; k < bins_; ++k) {
                        ha[k] *= wspec[k];
                        hb[k] *= wspec[k];
                    }
                    plan_.inverse_real_pair(ha, hb, la, lb, ws);
                    scatter(t, la);
                    if (has_pair) scatter(t + 1, lb);
                }
            } else {
                for (std::size_t t = 0; t < cross; ++t) {
                    gather(t, la);
                    for (std::size_t k = 0; k < n; ++k) full[k] = {la[k], T(0)};
                    plan_.forward(full, full, ws);
                    for (std::size_t k = 0; k < n; ++k) full[k] *= wspec[k];
                    plan_.inverse(full, full, ws);
                    for (std::size_t k = 0; k < n; ++k) la[k] = full[k].real();
                    scatter(t, la);
                }
            }
        }
    });
    return y;
}

template <typename T>
Tensor4<T> fast_parc_forward(const Tensor4<T>& x, const ParcParams<T>& p, SpectrumPath path) {
    const FastParc<T> op(p, x.shape().axis_length(p.orientation), path);
    return op.forward(x);
}

template class FastParc<float>;
template class FastParc<double>;
template Tensor4<float> fast_parc_forward<float>(const Tensor4<float>&, const ParcParams<float>&, SpectrumPath);
template Tensor4<double> fast_parc_forward<double>(const Tensor4<double>&, const ParcParams<double>&, SpectrumPath);

}  // namespace parc
