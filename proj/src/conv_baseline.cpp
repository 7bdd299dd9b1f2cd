#include "parc/conv_baseline.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "parc/parallel.hpp"

namespace parc {

template <typename T>
Tensor4<T> conv1d_zeropad(const Tensor4<T>& x, const ZeroPadConv1dParams<T>& p) {
    const Shape in = x.shape();
    const std::size_t k_len = p.kernel_size;
    if (k_len == 0) throw std::invalid_argument("conv1d_zeropad: kernel size must be >= 1");
    if (p.kernels.size() != in.channels * k_len)
        throw std::invalid_argument("conv1d_zeropad: expected " + std::to_string(in.channels * k_len) +
                                    " kernel taps, got " + std::to_string(p.kernels.size()));
    const auto n_in = static_cast<long>(in.axis_length(p.orientation));
    const long n_out = n_in - static_cast<long>(k_len) + 2 * static_cast<long>(p.pad) + 1;
    if (n_out < 1) throw std::invalid_argument("conv1d_zeropad: non-positive output length");

    Shape out_shape = in;
    if (p.orientation == Orientation::H)
        out_shape.height = static_cast<std::size_t>(n_out);
    else
        out_shape.width = static_cast<std::size_t>(n_out);
    Tensor4<T> y(out_shape);

    const long pad = static_cast<long>(p.pad);
    parallel_for(in.batch * in.channels, [&](std::size_t begin, std::size_t end) {
        for (std::size_t bc = begin; bc < end; ++bc) {
            const std::size_t b = bc / in.channels, c = bc % in.channels;
            const T* w = p.kernels.data() + c * k_len;
            const T* src = x.plane(b, c);
            T* dst = y.plane(b, c);
            if (p.orientation == Orientation::H) {
                // Row-at-a-time so the inner loop runs over contiguous W.
                const std::size_t width = in.width;
                for (long i = 0; i < n_out; ++i) {
                    T* out_row = dst + static_cast<std::size_t>(i) * width;
                    for (std::size_t k = 0; k < k_len; ++k) {
                        const long r = i + static_cast<long>(k) - pad;
                        if (r < 0 || r >= n_in) continue;
                        const T* in_row = src + static_cast<std::size_t>(r) * width;
                        const T wk = w[k];
                        for (std::size_t j = 0; j < width; ++j) out_row[j] += wk * in_row[j];
                    }
                }
            } else {
                for (std::size_t row = 0; row < in.height; ++row) {
                    const T* in_row = src + row * in.width;
                    T* out_row = dst + row * out_shape.width;
                    for (long i = 0; i < n_out; ++i) {
                        T acc = 0;
                        const long k_lo = std::max(0L, pad - i);
                        const long k_hi = std::min(static_cast<long>(k_len), n_in + pad - i);
                        for (long k = k_lo; k < k_hi; ++k) acc += w[k] * in_row[i + k - pad];
                        out_row[i] = acc;
                    }
                }
            }
        }
    });
    return y;
}

template <typename T>
Tensor4<T> dwconv2d_zeropad(const Tensor4<T>& x, const ZeroPadConv2dParams<T>& p) {
    const Shape s = x.shape();
    const std::size_t k_len = p.kernel_size;
    if (k_len == 0 || k_len % 2 == 0)
        throw std::invalid_argument("dwconv2d_zeropad: kernel size must be odd");
    if (p.kernels.size() != s.channels * k_len * k_len)
        throw std::invalid_argument("dwconv2d_zeropad: expected " +
                                    std::to_string(s.channels * k_len * k_len) + " kernel taps, got " +
                                    std::to_string(p.kernels.size()));
    Tensor4<T> y(s);
    const long pad = static_cast<long>(k_len / 2);
    const auto height = static_cast<long>(s.height);
    const auto width = static_cast<long>(s.width);

    parallel_for(s.batch * s.channels, [&](std::size_t begin, std::size_t end) {
        for (std::size_t bc = begin; bc < end; ++bc) {
            const std::size_t b = bc / s.channels, c = bc % s.channels;
            const T* w = p.kernels.data() + c * k_len * k_len;
            const T* src = x.plane(b, c);
            T* dst = y.plane(b, c);
            for (long i = 0; i < height; ++i) {
                T* out_row = dst + i * width;
                for (long ki = 0; ki < static_cast<long>(k_len); ++ki) {
                    const long r = i + ki - pad;
                    if (r < 0 || r >= height) continue;
                    const T* in_row = src + r * width;
                    for (long kj = 0; kj < static_cast<long>(k_len); ++kj) {
                        const T wk = w[ki * static_cast<long>(k_len) + kj];
                        const long shift = kj - pad;
                        const long j_lo = std::max(0L, -shift);
                        const long j_hi = std::min(width, width - shift);
                        for (long j = j_lo; j < j_hi; ++j) out_row[j] += wk * in_row[j + shift];
                    }
                }
            }
        }
    });
    return y;
}

template Tensor4<float> conv1d_zeropad(const Tensor4<float>&, const ZeroPadConv1dParams<float>&);
template Tensor4<double> conv1d_zeropad(const Tensor4<double>&, const ZeroPadConv1dParams<double>&);
template Tensor4<float> dwconv2d_zeropad(const Tensor4<float>&, const ZeroPadConv2dParams<float>&);
template Tensor4<double> dwconv2d_zeropad(const Tensor4<double>&, const ZeroPadConv2dParams<double>&);

}  // namespace parc
