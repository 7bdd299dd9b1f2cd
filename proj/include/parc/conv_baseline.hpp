#pragma once

#include <cstddef>
#include <vector>

#include "parc/tensor.hpp"

namespace parc {

/// Zero-padded depthwise 1D convolution along one spatial axis.
/// `kernels` holds C vectors of length K, flattened channel-major.
template <typename T>
struct ZeroPadConv1dParams {
    Orientation orientation = Orientation::H;
    std::size_t kernel_size = 3;
    std::size_t pad = 1;
    std::vector<T> kernels;
};

/// Same-size zero-padded depthwise K x K convolution, pad (K-1)/2.
/// `kernels` is (C, K, K) row-major.
template <typename T>
struct ZeroPadConv2dParams {
    std::size_t kernel_size = 3;
    std::vector<T> kernels;
};

// Both convolutions use the cross-correlation convention (no kernel flip):
//   y_i = sum_k w_k * x_{i + k - P}, with x outside [0, N) read as zero.

template <typename T>
Tensor4<T> conv1d_zeropad(const Tensor4<T>& x, const ZeroPadConv1dParams<T>& p);

template <typename T>
Tensor4<T> dwconv2d_zeropad(const Tensor4<T>& x, const ZeroPadConv2dParams<T>& p);

}  // namespace parc
