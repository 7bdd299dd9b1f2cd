#pragma once

#include <cstdint>

#include "parc/blocks.hpp"
#include "parc/parc.hpp"
#include "parc/random.hpp"

namespace parc {

// Seeded random initializers used by the CLI, tests and benchmarks.
// Kernels and linear weights draw from U(-1/sqrt(fan_in), 1/sqrt(fan_in)),
// positional embeddings from U(-1, 1).

template <typename T>
void randomize(ParcParams<T>& p, Xoshiro256ss& rng);

template <typename T>
ParcParams<T> random_depthwise(std::size_t channels, std::size_t meta_length, Orientation o, std::uint64_t seed);

template <typename T>
ParcParams<T> random_dense(std::size_t in_channels, std::size_t out_channels, std::size_t meta_length, Orientation o,
                           std::uint64_t seed);

template <typename T>
MetaFormerBlockParams<T> random_metaformer(std::size_t channels, std::size_t meta_length, std::uint64_t seed);

template <typename T>
ConvNetMixerParams<T> random_convnet_mixer(std::size_t channels, std::size_t meta_length, std::uint64_t seed);

}  // namespace parc
