#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "parc/tensor.hpp"

namespace parc {

enum class ParcMode { Depthwise, Dense };

/// Meta length used when a layer does not specify one.
inline constexpr std::size_t kDefaultMetaLength = 14;

/// Learnable parameters of one ParC layer, stored at meta length K.
///
/// Depthwise: kernel is (C, K), pe is (C, K), bias is (C).
/// Dense:     kernel is (C_out, C_in, K), pe is (C_in, K), bias is (C_out).
template <typename T>
struct ParcParams {
    ParcMode mode = ParcMode::Depthwise;
    Orientation orientation = Orientation::H;
    std::size_t meta_length = kDefaultMetaLength;
    std::size_t in_channels = 0;
    std::size_t out_channels = 0;
    std::vector<T> meta_kernel;
    std::vector<T> meta_pe;
    std::vector<T> bias;

    /// Zero-initialized depthwise layer.
    static ParcParams depthwise(std::size_t channels, std::size_t meta_length, Orientation o);
    /// Zero-initialized dense layer.
    static ParcParams dense(std::size_t in_channels, std::size_t out_channels, std::size_t meta_length,
                            Orientation o);

    std::size_t kernel_count() const { return mode == ParcMode::Depthwise ? in_channels : out_channels * in_channels; }

    std::span<T> kernel(std::size_t idx) { return {meta_kernel.data() + idx * meta_length, meta_length}; }
    std::span<const T> kernel(std::size_t idx) const { return {meta_kernel.data() + idx * meta_length, meta_length}; }
    std::span<T> pe(std::size_t c) { return {meta_pe.data() + c * meta_length, meta_length}; }
    std::span<const T> pe(std::size_t c) const { return {meta_pe.data() + c * meta_length, meta_length}; }

    /// Throws std::invalid_argument if counts disagree or any value is non-finite.
    void validate() const;
};

/// Parameters resampled to the actual axis length N. Same layout as
/// ParcParams with K replaced by N.
template <typename T>
struct ResampledParc {
    ParcMode mode = ParcMode::Depthwise;
    Orientation orientation = Orientation::H;
    std::size_t length = 0;
    std::size_t in_channels = 0;
    std::size_t out_channels = 0;
    std::vector<T> kernel;
    std::vector<T> pe;
    std::vector<T> bias;

    const T* kernel_ptr(std::size_t idx) const { return kernel.data() + idx * length; }
    const T* pe_ptr(std::size_t c) const { return pe.data() + c * length; }
};

/// Interpolates every kernel and PE vector of `p` to length n.
template <typename T>
ResampledParc<T> resample(const ParcParams<T>& p, std::size_t n);

/// x + pe, with pe[c][n] broadcast over batch and the orthogonal axis.
template <typename T>
Tensor4<T> add_positional(const Tensor4<T>& x, const ResampledParc<T>& r);

/// Circular correlation along the layer's axis:
///   Y[b,c,i,j] = sum_k w[c][k] * xp[b,c,(i+k) mod N,j] + bias[c]
/// Dense layers additionally sum over input channels.
template <typename T>
Tensor4<T> parc_forward(const Tensor4<T>& x, const ParcParams<T>& p);
template <typename T>
Tensor4<T> parc_forward(const Tensor4<T>& x, const ResampledParc<T>& r);

/// Same result as parc_forward, computed by appending the first N-1 lines of
/// xp along the axis (periodic extension to 2N-1) and running a valid
/// correlation with the length-N kernel.
template <typename T>
Tensor4<T> parc_forward_via_concat(const Tensor4<T>& x, const ParcParams<T>& p);
template <typename T>
Tensor4<T> parc_forward_via_concat(const Tensor4<T>& x, const ResampledParc<T>& r);

template <typename T>
struct ParcGradients {
    Tensor4<T> dx;
    std::vector<T> d_kernel;       // at length N
    std::vector<T> d_pe;           // at length N
    std::vector<T> d_bias;
    std::vector<T> d_meta_kernel;  // at meta length
    std::vector<T> d_meta_pe;      // at meta length
};

/// Gradients of sum(dy * parc_forward(x, p)) with respect to every input.
template <typename T>
ParcGradients<T> parc_backward(const Tensor4<T>& x, const ParcParams<T>& p, const Tensor4<T>& dy);

/// Output shape of a layer applied to `in`; throws on channel mismatch.
template <typename T>
Shape parc_output_shape(const Shape& in, const ResampledParc<T>& r);

}  // namespace parc
