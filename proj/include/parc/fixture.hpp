#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>

#include "parc/tensor.hpp"

namespace parc {

enum class Precision { F32, F64 };

const char* to_string(Precision p);
/// Parses "f32" / "f64"; throws std::invalid_argument otherwise.
Precision parse_precision(const std::string& s);

using AnyTensor = std::variant<Tensor4<float>, Tensor4<double>>;

// PARC1 layout:
//   "PARC1" | u32 LE header length | JSON {"dtype":"f32"|"f64","shape":[B,C,H,W]}
//   | raw little-endian scalars in (B, C, H, W) row-major order.

template <typename T>
void write_parc1(std::ostream& os, const Tensor4<T>& t);
void write_parc1(std::ostream& os, const AnyTensor& t);
void write_parc1(const std::filesystem::path& path, const AnyTensor& t);

/// Throws std::runtime_error on malformed input.
AnyTensor read_parc1(std::istream& is);
AnyTensor read_parc1(const std::filesystem::path& path);

/// Seeded uniform [-1, 1) tensor. Values are drawn in layout order from
/// Xoshiro256ss(seed), one double per element, then rounded to T.
template <typename T>
Tensor4<T> random_tensor(const Shape& shape, std::uint64_t seed);

}  // namespace parc
