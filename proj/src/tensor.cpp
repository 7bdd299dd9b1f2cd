#include "parc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace parc {

const char* to_string(Orientation o) { return o == Orientation::H ? "H" : "V"; }

std::string Shape::str() const {
    std::ostringstream os;
    os << '(' << batch << ',' << channels << ',' << height << ',' << width << ')';
    return os.str();
}

namespace {

void check_shape(const Shape& s) {
    if (s.batch == 0 || s.channels == 0 || s.height == 0 || s.width == 0)
        throw std::invalid_argument("tensor dims must be >= 1, got " + s.str());
}

template <typename T>
void check_same(const Tensor4<T>& a, const Tensor4<T>& b) {
    if (a.shape() != b.shape())
        throw std::invalid_argument("shape mismatch " + a.shape().str() + " vs " + b.shape().str());
}

}  // namespace

template <typename T>
Tensor4<T>::Tensor4(Shape shape, T fill) : shape_(shape) {
    check_shape(shape_);
    data_.assign(shape_.numel(), fill);
}

template <typename T>
Tensor4<T>::Tensor4(Shape shape, std::vector<T> data) : shape_(shape), data_(std::move(data)) {
    check_shape(shape_);
    if (data_.size() != shape_.numel())
        throw std::invalid_argument("data length " + std::to_string(data_.size()) +
                                    " does not match shape " + shape_.str());
}

template <typename T>
T& Tensor4<T>::at(std::size_t b, std::size_t c, std::size_t i, std::size_t j) {
    if (b >= shape_.batch || c >= shape_.channels || i >= shape_.height || j >= shape_.width)
        throw std::out_of_range("index out of range for shape " + shape_.str());
    return data_[offset(b, c, i, j)];
}

template <typename T>
T Tensor4<T>::at(std::size_t b, std::size_t c, std::size_t i, std::size_t j) const {
    return const_cast<Tensor4*>(this)->at(b, c, i, j);
}

template <typename T>
AxisLine Tensor4<T>::line(Orientation o, std::size_t b, std::size_t c, std::size_t cross) const {
    if (o == Orientation::H) return {offset(b, c, 0, cross), shape_.width, shape_.height};
    return {offset(b, c, cross, 0), 1, shape_.width};
}

template <typename T>
Tensor4<T>& Tensor4<T>::operator+=(const Tensor4& rhs) {
    check_same(*this, rhs);
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += rhs.data_[n];
    return *this;
}

template <typename T>
Tensor4<T>& Tensor4<T>::operator-=(const Tensor4& rhs) {
    check_same(*this, rhs);
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= rhs.data_[n];
    return *this;
}

template <typename T>
Tensor4<T>& Tensor4<T>::operator*=(T scale) {
    for (auto& v : data_) v *= scale;
    return *this;
}

template <typename T>
Tensor4<T> Tensor4<T>::slice_channels(std::size_t first, std::size_t count) const {
    if (count == 0 || first + count > shape_.channels)
        throw std::out_of_range("channel slice out of range");
    Shape s = shape_;
    s.channels = count;
    Tensor4 out(s);
    const std::size_t plane_size = shape_.height * shape_.width;
    for (std::size_t b = 0; b < shape_.batch; ++b)
        std::copy_n(plane(b, first), count * plane_size, out.plane(b, 0));
    return out;
}

template <typename T>
void Tensor4<T>::assign_channels(std::size_t first, const Tensor4& src) {
    const Shape& s = src.shape();
    if (s.batch != shape_.batch || s.height != shape_.height || s.width != shape_.width ||
        first + s.channels > shape_.channels)
        throw std::invalid_argument("assign_channels: incompatible source " + s.str());
    const std::size_t plane_size = shape_.height * shape_.width;
    for (std::size_t b = 0; b < shape_.batch; ++b)
        std::copy_n(src.plane(b, 0), s.channels * plane_size, plane(b, first));
}

template <typename T>
ParamVec<T> interp_linear(std::span<const T> v, std::size_t n) {
    const std::size_t k = v.size();
    if (k == 0 || n == 0) throw std::invalid_argument("interp_linear: lengths must be >= 1");
    if (n == k) return ParamVec<T>(v.begin(), v.end());
    ParamVec<T> out(n);
    if (n == 1) {
        out[0] = v[0];
        return out;
    }
    if (k == 1) {
        std::fill(out.begin(), out.end(), v[0]);
        return out;
    }
    const double scale = static_cast<double>(k - 1) / static_cast<double>(n - 1);
    for (std::size_t p = 0; p < n; ++p) {
        const double src = static_cast<double>(p) * scale;
        const auto lo = std::min(static_cast<std::size_t>(src), k - 2);
        const double frac = src - static_cast<double>(lo);
        out[p] = static_cast<T>((1.0 - frac) * static_cast<double>(v[lo]) +
                                frac * static_cast<double>(v[lo + 1]));
    }
    return out;
}

template <typename T>
ParamVec<T> interp_linear_adjoint(std::span<const T> g, std::size_t k) {
    const std::size_t n = g.size();
    if (k == 0 || n == 0) throw std::invalid_argument("interp_linear_adjoint: lengths must be >= 1");
    if (n == k) return ParamVec<T>(g.begin(), g.end());
    std::vector<double> acc(k, 0.0);
    if (n == 1) {
        acc[0] = g[0];
    } else if (k == 1) {
        for (const T x : g) acc[0] += x;
    } else {
        // Same stencil as interp_linear, scattered instead of gathered.
        const double scale = static_cast<double>(k - 1) / static_cast<double>(n - 1);
        for (std::size_t p = 0; p < n; ++p) {
            const double src = static_cast<double>(p) * scale;
            const auto lo = std::min(static_cast<std::size_t>(src), k - 2);
            const double frac = src - static_cast<double>(lo);
            acc[lo] += (1.0 - frac) * static_cast<double>(g[p]);
            acc[lo + 1] += frac * static_cast<double>(g[p]);
        }
    }
    return ParamVec<T>(acc.begin(), acc.end());
}

template <typename T>
double max_abs_diff(const Tensor4<T>& a, const Tensor4<T>& b) {
    check_same(a, b);
    double m = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n)
        m = std::max(m, std::abs(static_cast<double>(a.data()[n]) - static_cast<double>(b.data()[n])));
    return m;
}

template <typename T>
double mean_abs_diff(const Tensor4<T>& a, const Tensor4<T>& b) {
    check_same(a, b);
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n)
        s += std::abs(static_cast<double>(a.data()[n]) - static_cast<double>(b.data()[n]));
    return s / static_cast<double>(a.size());
}

template <typename T>
double max_abs(const Tensor4<T>& a) {
    double m = 0.0;
    for (const T v : a.data()) m = std::max(m, std::abs(static_cast<double>(v)));
    return m;
}

#define PARC_INSTANTIATE(T)                                                       \
    template class Tensor4<T>;                                                    \
    template ParamVec<T> interp_linear<T>(std::span<const T>, std::size_t);         \
    template ParamVec<T> interp_linear_adjoint<T>(std::span<const T>, std::size_t); \
    template double max_abs_diff<T>(const Tensor4<T>&, const Tensor4<T>&);        \
    template double mean_abs_diff<T>(const Tensor4<T>&, const Tensor4<T>&);       \
    template double max_abs<T>(const Tensor4<T>&);

PARC_INSTANTIATE(float)
PARC_INSTANTIATE(double)

#undef PARC_INSTANTIATE

}  // namespace parc
