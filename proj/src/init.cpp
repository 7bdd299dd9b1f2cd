#include "parc/init.hpp"

#include <cmath>

namespace parc {

namespace {

template <typename T>
void fill_fan_in(std::vector<T>& v, std::size_t fan_in, Xoshiro256ss& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    fill_uniform<T>(v, rng, -bound, bound);
}

}  // namespace

template <typename T>
void randomize(ParcParams<T>& p, Xoshiro256ss& rng) {
    const std::size_t fan_in = p.meta_length * (p.mode == ParcMode::Dense ? p.in_channels : 1);
    fill_fan_in(p.meta_kernel, fan_in, rng);
    fill_uniform<T>(p.meta_pe, rng);
    fill_fan_in(p.bias, fan_in, rng);
}

template <typename T>
ParcParams<T> random_depthwise(std::size_t channels, std::size_t meta_length, Orientation o, std::uint64_t seed) {
    auto p = ParcParams<T>::depthwise(channels, meta_length, o);
    Xoshiro256ss rng(seed);
    randomize(p, rng);
    return p;
}

template <typename T>
ParcParams<T> random_dense(std::size_t in_channels, std::size_t out_channels, std::size_t meta_length, Orientation o,
                           std::uint64_t seed) {
    auto p = ParcParams<T>::dense(in_channels, out_channels, meta_length, o);
    Xoshiro256ss rng(seed);
    randomize(p, rng);
    return p;
}

template <typename T>
MetaFormerBlockParams<T> random_metaformer(std::size_t channels, std::size_t meta_length, std::uint64_t seed) {
    auto p = MetaFormerBlockParams<T>::zeros(channels, meta_length);
    Xoshiro256ss rng(seed);
    randomize(p.first_h, rng);
    randomize(p.first_v, rng);
    randomize(p.second_v, rng);
    randomize(p.second_h, rng);
    fill_fan_in(p.mlp.w1, p.mlp.channels, rng);
    fill_fan_in(p.mlp.b1, p.mlp.channels, rng);
    fill_fan_in(p.mlp.w2, p.mlp.hidden, rng);
    fill_fan_in(p.mlp.b2, p.mlp.hidden, rng);
    fill_fan_in(p.attention.w1, p.attention.channels, rng);
    fill_fan_in(p.attention.b1, p.attention.channels, rng);
    fill_fan_in(p.attention.w2, p.attention.hidden, rng);
    fill_fan_in(p.attention.b2, p.attention.hidden, rng);
    return p;
}

template <typename T>
ConvNetMixerParams<T> random_convnet_mixer(std::size_t channels, std::size_t meta_length, std::uint64_t seed) {
    auto p = ConvNetMixerParams<T>::zeros(channels, meta_length);
    Xoshiro256ss rng(seed);
    randomize(p.h, rng);
    randomize(p.v, rng);
    return p;
}

#define PARC_INSTANTIATE(T)                                                                                       \
    template void randomize<T>(ParcParams<T>&, Xoshiro256ss&);                                                    \
    template ParcParams<T> random_depthwise<T>(std::size_t, std::size_t, Orientation, std::uint64_t);             \
    template ParcParams<T> random_dense<T>(std::size_t, std::size_t, std::size_t, Orientation, std::uint64_t);    \
    template MetaFormerBlockParams<T> random_metaformer<T>(std::size_t, std::size_t, std::uint64_t);              \
    template ConvNetMixerParams<T> random_convnet_mixer<T>(std::size_t, std::size_t, std::uint64_t);

PARC_INSTANTIATE(float)
PARC_INSTANTIATE(double)

#undef PARC_INSTANTIATE

}  // namespace parc
