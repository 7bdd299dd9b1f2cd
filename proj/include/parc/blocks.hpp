#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "parc/parc.hpp"
#include "parc/tensor.hpp"

namespace parc {

/// Which ParC implementation a block routes through.
enum class ParcImpl { Spatial, Concat, Fourier };

template <typename T>
Tensor4<T> apply_parc(const Tensor4<T>& x, const ParcParams<T>& p, ParcImpl impl);

/// Squeeze-and-excitation style gate: pool -> FC(C, C/r) -> ReLU ->
/// FC(C/r, C) -> logistic. Weights are row-major (out, in).
template <typename T>
struct ChannelAttentionParams {
    std::size_t channels = 0;
    std::size_t hidden = 0;
    std::vector<T> w1, b1;  // (hidden, channels), (hidden)
    std::vector<T> w2, b2;  // (channels, hidden), (channels)

    static ChannelAttentionParams zeros(std::size_t channels, std::size_t reduction = 4);
};

/// Per-(batch, channel) gate values in (0, 1), laid out (B, C).
template <typename T>
std::vector<T> channel_attention_gates(const Tensor4<T>& x, const ChannelAttentionParams<T>& p);

/// y[b,c,i,j] = gate[b,c] * x[b,c,i,j].
template <typename T>
Tensor4<T> channel_attention(const Tensor4<T>& x, const ChannelAttentionParams<T>& p);

/// Pointwise two-layer MLP over channels with a GELU hidden activation.
template <typename T>
struct ChannelMlpParams {
    std::size_t channels = 0;
    std::size_t hidden = 0;
    std::vector<T> w1, b1;  // (hidden, channels), (hidden)
    std::vector<T> w2, b2;  // (channels, hidden), (channels)

    static ChannelMlpParams zeros(std::size_t channels, std::size_t expansion = 4);
};

template <typename T>
Tensor4<T> channel_mlp(const Tensor4<T>& x, const ChannelMlpParams<T>& p);

/// ParC-MetaFormer block. Channels [0, C/2) run ParC-H then ParC-V,
/// channels [C/2, C) run ParC-V then ParC-H:
///   u = x + TokenMixer(x)
///   y = u + ChannelAttention(ChannelMlp(u))
template <typename T>
struct MetaFormerBlockParams {
    std::size_t channels = 0;
    ParcParams<T> first_h, first_v;    // first half, H then V
    ParcParams<T> second_v, second_h;  // second half, V then H
    ChannelMlpParams<T> mlp;
    ChannelAttentionParams<T> attention;

    static MetaFormerBlockParams zeros(std::size_t channels, std::size_t meta_length = kDefaultMetaLength);
};

template <typename T>
Tensor4<T> metaformer_token_mixer(const Tensor4<T>& x, const MetaFormerBlockParams<T>& p,
                                  ParcImpl impl = ParcImpl::Spatial);

template <typename T>
Tensor4<T> metaformer_block_forward(const Tensor4<T>& x, const MetaFormerBlockParams<T>& p,
                                    ParcImpl impl = ParcImpl::Spatial);

/// Parallel ParC-H on channels [0, C/2) and ParC-V on [C/2, C), no
/// channel mixing between the halves.
template <typename T>
struct ConvNetMixerParams {
    std::size_t channels = 0;
    ParcParams<T> h;
    ParcParams<T> v;

    static ConvNetMixerParams zeros(std::size_t channels, std::size_t meta_length = kDefaultMetaLength);
};

template <typename T>
Tensor4<T> convnet_mixer_forward(const Tensor4<T>& x, const ConvNetMixerParams<T>& p,
                                 ParcImpl impl = ParcImpl::Spatial);

/// f(x + delta at (b, c, i, j)) - f(x).
template <typename T>
Tensor4<T> perturbation_response(const std::function<Tensor4<T>(const Tensor4<T>&)>& f, const Tensor4<T>& x,
                                 std::size_t b, std::size_t c, std::size_t i, std::size_t j, T delta = T(1));

}  // namespace parc
