#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace parc {

/// Spatial axis a 1D operator runs along. `H` walks the height axis
/// (stride W), `V` walks the width axis (stride 1).
enum class Orientation { H, V };

const char* to_string(Orientation o);

struct Shape {
    std::size_t batch = 1;
    std::size_t channels = 1;
    std::size_t height = 1;
    std::size_t width = 1;

    std::size_t numel() const { return batch * channels * height * width; }
    /// Length of the axis an operator with orientation `o` convolves along.
    std::size_t axis_length(Orientation o) const { return o == Orientation::H ? height : width; }
    /// Length of the spatial axis orthogonal to `o`.
    std::size_t cross_length(Orientation o) const { return o == Orientation::H ? width : height; }

    std::array<std::size_t, 4> dims() const { return {batch, channels, height, width}; }
    std::string str() const;

    friend bool operator==(const Shape&, const Shape&) = default;
};

/// One 1D line through a tensor plane: `length` elements starting at
/// `offset`, `stride` apart.
struct AxisLine {
    std::size_t offset;
    std::size_t stride;
    std::size_t length;
};

/// Dense (B, C, H, W) tensor, row-major with W fastest.
template <typename T>
class Tensor4 {
public:
    using value_type = T;

    Tensor4() = default;
    explicit Tensor4(Shape shape, T fill = T(0));
    Tensor4(Shape shape, std::vector<T> data);

    const Shape& shape() const { return shape_; }
    std::size_t size() const { return data_.size(); }

    std::span<T> data() { return data_; }
    std::span<const T> data() const { return data_; }

    std::size_t offset(std::size_t b, std::size_t c, std::size_t i, std::size_t j) const {
        return ((b * shape_.channels + c) * shape_.height + i) * shape_.width + j;
    }

    // Unchecked access.
    T& operator()(std::size_t b, std::size_t c, std::size_t i, std::size_t j) {
        return data_[offset(b, c, i, j)];
    }
    T operator()(std::size_t b, std::size_t c, std::size_t i, std::size_t j) const {
        return data_[offset(b, c, i, j)];
    }

    /// Bounds-checked access; throws std::out_of_range.
    T& at(std::size_t b, std::size_t c, std::size_t i, std::size_t j);
    T at(std::size_t b, std::size_t c, std::size_t i, std::size_t j) const;

    /// Pointer to the start of plane (b, c).
    T* plane(std::size_t b, std::size_t c) { return data_.data() + offset(b, c, 0, 0); }
    const T* plane(std::size_t b, std::size_t c) const { return data_.data() + offset(b, c, 0, 0); }

    /// Line along `o` through plane (b, c) at orthogonal index `cross`.
    AxisLine line(Orientation o, std::size_t b, std::size_t c, std::size_t cross) const;

    Tensor4& operator+=(const Tensor4& rhs);
    Tensor4& operator-=(const Tensor4& rhs);
    Tensor4& operator*=(T scale);

    friend Tensor4 operator+(Tensor4 lhs, const Tensor4& rhs) { return lhs += rhs; }
    friend Tensor4 operator-(Tensor4 lhs, const Tensor4& rhs) { return lhs -= rhs; }
    friend Tensor4 operator*(Tensor4 lhs, T s) { return lhs *= s; }
    friend Tensor4 operator*(T s, Tensor4 rhs) { return rhs *= s; }

    /// Copy of channels [first, first + count).
    Tensor4 slice_channels(std::size_t first, std::size_t count) const;
    /// Writes `src` into channels starting at `first`.
    void assign_channels(std::size_t first, const Tensor4& src);

    template <typename U>
    Tensor4<U> cast() const {
        Tensor4<U> out(shape_);
        for (std::size_t n = 0; n < data_.size(); ++n) out.data()[n] = static_cast<U>(data_[n]);
        return out;
    }

private:
    Shape shape_{};
    std::vector<T> data_;
};

/// Parameter vector (kernel taps or positional embedding).
template <typename T>
using ParamVec = std::vector<T>;

/// Align-corners linear resampling of `v` to `n` points. Output position p
/// samples source coordinate p*(K-1)/(n-1); n == K returns `v` unchanged and
/// n == 1 returns v[0].
template <typename T>
ParamVec<T> interp_linear(std::span<const T> v, std::size_t n);

/// Transpose of interp_linear: for g of length N returns A^T g (length k),
/// where interp_linear(v, N) == A v.
template <typename T>
ParamVec<T> interp_linear_adjoint(std::span<const T> g, std::size_t k);

/// Max |a - b| over two equally shaped tensors.
template <typename T>
double max_abs_diff(const Tensor4<T>& a, const Tensor4<T>& b);

/// Mean |a - b| over two equally shaped tensors.
template <typename T>
double mean_abs_diff(const Tensor4<T>& a, const Tensor4<T>& b);

template <typename T>
double max_abs(const Tensor4<T>& a);

}  // namespace parc
