#include "parc/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "parc/fast_parc.hpp"

namespace parc {

namespace {

void require_even(std::size_t c, const char* block) {
    if (c == 0 || c % 2 != 0)
        throw std::invalid_argument(std::string(block) + ": channel count must be even, got " + std::to_string(c));
}

template <typename T>
T gelu(T v) {
    return static_cast<T>(0.5) * v * (T(1) + std::erf(v / std::sqrt(T(2))));
}

template <typename T>
T logistic(T v) {
    return T(1) / (T(1) + std::exp(-v));
}

template <typename T>
void check_linear(const std::vector<T>& w, const std::vector<T>& b, std::size_t out, std::size_t in, const char* what) {
    if (w.size() != out * in || b.size() != out)
        throw std::invalid_argument(std::string(what) + ": weight dims do not match (" + std::to_string(out) + "x" +
                                    std::to_string(in) + ")");
}

}  // namespace

template <typename T>
Tensor4<T> apply_parc(const Tensor4<T>& x, const ParcParams<T>& p, ParcImpl impl) {
    switch (impl) {
        case ParcImpl::Spatial: return parc_forward(x, p);
        case ParcImpl::Concat: return parc_forward_via_concat(x, p);
        case ParcImpl::Fourier: return fast_parc_forward(x, p);
    }
    throw std::invalid_argument("apply_parc: unknown implementation");
}

template <typename T>
ChannelAttentionParams<T> ChannelAttentionParams<T>::zeros(std::size_t channels, std::size_t reduction) {
    if (channels == 0 || reduction == 0) throw std::invalid_argument("ChannelAttentionParams: dims must be positive");
    ChannelAttentionParams p;
    p.channels = channels;
    p.hidden = std::max<std::size_t>(1, channels / reduction);
    p.w1.assign(p.hidden * channels, T(0));
    p.b1.assign(p.hidden, T(0));
    p.w2.assign(channels * p.hidden, T(0));
    p.b2.assign(channels, T(0));
    return p;
}

template <typename T>
std::vector<T> channel_attention_gates(const Tensor4<T>& x, const ChannelAttentionParams<T>& p) {
    const Shape s = x.shape();
    if (s.channels != p.channels)
        throw std::invalid_argument("channel_attention: input has " + std::to_string(s.channels) +
                                    " channels, params expect " + std::to_string(p.channels));
    check_linear(p.w1, p.b1, p.hidden, p.channels, "channel_attention fc1");
    check_linear(p.w2, p.b2, p.channels, p.hidden, "channel_attention fc2");

    const std::size_t plane_size = s.height * s.width;
    std::vector<T> gates(s.batch * s.channels);
    std::vector<T> pooled(s.channels), hidden(p.hidden);
    for (std::size_t b = 0; b < s.batch; ++b) {
        for (std::size_t c = 0; c < s.channels; ++c) {
            const T* plane = x.plane(b, c);
            T acc = 0;
            for (std::size_t e = 0; e < plane_size; ++e) acc += plane[e];
            pooled[c] = acc / static_cast<T>(plane_size);
        }
        for (std::size_t h = 0; h < p.hidden; ++h) {
            T acc = p.b1[h];
            for (std::size_t c = 0; c < s.channels; ++c) acc += p.w1[h * s.channels + c] * pooled[c];
            hidden[h] = std::max(acc, T(0));
        }
        for (std::size_t c = 0; c < s.channels; ++c) {
            T acc = p.b2[c];
            for (std::size_t h = 0; h < p.hidden; ++h) acc += p.w2[c * p.hidden + h] * hidden[h];
            gates[b * s.channels + c] = logistic(acc);
        }
    }
    return gates;
}

template <typename T>
Tensor4<T> channel_attention(const Tensor4<T>& x, const ChannelAttentionParams<T>& p) {
    const auto gates = channel_attention_gates(x, p);
    const Shape s = x.shape();
    Tensor4<T> y = x;
    const std::size_t plane_size = s.height * s.width;
    for (std::size_t b = 0; b < s.batch; ++b)
        for (std::size_t c = 0; c < s.channels; ++c) {
            T* plane = y.plane(b, c);
            const T a = gates[b * s.channels + c];
            for (std::size_t e = 0; e < plane_size; ++e) plane[e] *= a;
        }
    return y;
}

template <typename T>
ChannelMlpParams<T> ChannelMlpParams<T>::zeros(std::size_t channels, std::size_t expansion) {
    if (channels == 0 || expansion == 0) throw std::invalid_argument("ChannelMlpParams: dims must be positive");
    ChannelMlpParams p;
    p.channels = channels;
    p.hidden = channels * expansion;
    p.w1.assign(p.hidden * channels, T(0));
    p.b1.assign(p.hidden, T(0));
    p.w2.assign(channels * p.hidden, T(0));
    p.b2.assign(channels, T(0));
    return p;
}

template <typename T>
Tensor4<T> channel_mlp(const Tensor4<T>& x, const ChannelMlpParams<T>& p) {
    const Shape s = x.shape();
    if (s.channels != p.channels)
        throw std::invalid_argument("channel_mlp: input has " + std::to_string(s.channels) + " channels, params expect " +
                                    std::to_string(p.channels));
    check_linear(p.w1, p.b1, p.hidden, p.channels, "channel_mlp fc1");
    check_linear(p.w2, p.b2, p.channels, p.hidden, "channel_mlp fc2");

    Tensor4<T> y(s);
    std::vector<T> in(s.channels), hidden(p.hidden);
    for (std::size_t b = 0; b < s.batch; ++b)
        for (std::size_t i = 0; i < s.height; ++i)
            for (std::size_t j = 0; j < s.width; ++j) {
                for (std::size_t c = 0; c < s.channels; ++c) in[c] = x(b, c, i, j);
                for (std::size_t h = 0; h < p.hidden; ++h) {
                    T acc = p.b1[h];
                    for (std::size_t c = 0; c < s.channels; ++c) acc += p.w1[h * s.channels + c] * in[c];
                    hidden[h] = gelu(acc);
                }
                for (std::size_t c = 0; c < s.channels; ++c) {
                    T acc = p.b2[c];
                    for (std::size_t h = 0; h < p.hidden; ++h) acc += p.w2[c * p.hidden + h] * hidden[h];
                    y(b, c, i, j) = acc;
                }
            }
    return y;
}

template <typename T>
MetaFormerBlockParams<T> MetaFormerBlockParams<T>::zeros(std::size_t channels, std::size_t meta_length) {
    require_even(channels, "MetaFormerBlockParams");
    const std::size_t half = channels / 2;
    MetaFormerBlockParams p;
    p.channels = channels;
    p.first_h = ParcParams<T>::depthwise(half, meta_length, Orientation::H);
    p.first_v = ParcParams<T>::depthwise(half, meta_length, Orientation::V);
    p.second_v = ParcParams<T>::depthwise(half, meta_length, Orientation::V);
    p.second_h = ParcParams<T>::depthwise(half, meta_length, Orientation::H);
    p.mlp = ChannelMlpParams<T>::zeros(channels);
    p.attention = ChannelAttentionParams<T>::zeros(channels);
    return p;
}

template <typename T>
Tensor4<T> metaformer_token_mixer(const Tensor4<T>& x, const MetaFormerBlockParams<T>& p, ParcImpl impl) {
    const Shape s = x.shape();
    require_even(s.channels, "metaformer_block_forward");
    if (s.channels != p.channels)
        throw std::invalid_argument("metaformer_block_forward: input has " + std::to_string(s.channels) +
                                    " channels, block expects " + std::to_string(p.channels));
    const std::size_t half = s.channels / 2;
    const Tensor4<T> a = apply_parc(apply_parc(x.slice_channels(0, half), p.first_h, impl), p.first_v, impl);
    const Tensor4<T> b = apply_parc(apply_parc(x.slice_channels(half, half), p.second_v, impl), p.second_h, impl);
    Tensor4<T> mixed(s);
    mixed.assign_channels(0, a);
    mixed.assign_channels(half, b);
    return mixed;
}

template <typename T>
Tensor4<T> metaformer_block_forward(const Tensor4<T>& x, const MetaFormerBlockParams<T>& p, ParcImpl impl) {
    const Tensor4<T> u = x + metaformer_token_mixer(x, p, impl);
    return u + channel_attention(channel_mlp(u, p.mlp), p.attention);
}

template <typename T>
ConvNetMixerParams<T> ConvNetMixerParams<T>::zeros(std::size_t channels, std::size_t meta_length) {
    require_even(channels, "ConvNetMixerParams");
    ConvNetMixerParams p;
    p.channels = channels;
    p.h = ParcParams<T>::depthwise(channels / 2, meta_length, Orientation::H);
    p.v = ParcParams<T>::depthwise(channels / 2, meta_length, Orientation::V);
    return p;
}

template <typename T>
Tensor4<T> convnet_mixer_forward(const Tensor4<T>& x, const ConvNetMixerParams<T>& p, ParcImpl impl) {
    const Shape s = x.shape();
    require_even(s.channels, "convnet_mixer_forward");
    if (s.channels != p.channels)
        throw std::invalid_argument("convnet_mixer_forward: input has " + std::to_string(s.channels) +
                                    " channels, mixer expects " + std::to_string(p.channels));
    const std::size_t half = s.channels / 2;
    Tensor4<T> y(s);
    y.assign_channels(0, apply_parc(x.slice_channels(0, half), p.h, impl));
    y.assign_channels(half, apply_parc(x.slice_channels(half, half), p.v, impl));
    return y;
}

template <typename T>
Tensor4<T> perturbation_response(const std::function<Tensor4<T>(const Tensor4<T>&)>& f, const Tensor4<T>& x,
                                 std::size_t b, std::size_t c, std::size_t i, std::size_t j, T delta) {
    Tensor4<T> bumped = x;
    bumped.at(b, c, i, j) += delta;
    return f(bumped) - f(x);
}

#define PARC_INSTANTIATE(T)                                                                                     \
    template Tensor4<T> apply_parc<T>(const Tensor4<T>&, const ParcParams<T>&, ParcImpl);                       \
    template struct ChannelAttentionParams<T>;                                                                  \
    template std::vector<T> channel_attention_gates<T>(const Tensor4<T>&, const ChannelAttentionParams<T>&);    \
    template Tensor4<T> channel_attention<T>(const Tensor4<T>&, const ChannelAttentionParams<T>&);              \
    template struct ChannelMlpParams<T>;                                                                        \
    template Tensor4<T> channel_mlp<T>(const Tensor4<T>&, const ChannelMlpParams<T>&);                          \
    template struct MetaFormerBlockParams<T>;                                                                   \
    template Tensor4<T> metaformer_token_mixer<T>(const Tensor4<T>&, const MetaFormerBlockParams<T>&, ParcImpl); \
    template Tensor4<T> metaformer_block_forward<T>(const Tensor4<T>&, const MetaFormerBlockParams<T>&, ParcImpl); \
    template struct ConvNetMixerParams<T>;                                                                      \
    template Tensor4<T> convnet_mixer_forward<T>(const Tensor4<T>&, const ConvNetMixerParams<T>&, ParcImpl);    \
    template Tensor4<T> perturbation_response<T>(const std::function<Tensor4<T>(const Tensor4<T>&)>&,            \
                                                 const Tensor4<T>&, std::size_t, std::size_t, std::size_t,       \
                                                 std::size_t, T);

PARC_INSTANTIATE(float)
PARC_INSTANTIATE(double)

#undef PARC_INSTANTIATE

}  // namespace parc
