#include "parc/parc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "parc/parallel.hpp"

namespace parc {

namespace {

/// Plane offset of element n along the axis and t across it.
inline std::size_t plane_index(Orientation o, std::size_t width, std::size_t n, std::size_t t) {
    return o == Orientation::H ? n * width + t : t * width + n;
}

template <typename T>
void check_finite(const std::vector<T>& v, const char* what) {
    for (const T x : v)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string("ParcParams: non-finite value in ") + what);
}

// out += circular correlation of one xp plane with kernel w along `o`.
// Per output element the sum runs over k in increasing order.
template <typename T>
void accumulate_circular(T* out, const T* xp, const T* w, std::size_t height, std::size_t width, Orientation o) {
    if (o == Orientation::H) {
        const std::size_t n = height;
        for (std::size_t i = 0; i < n; ++i) {
            T* out_row = out + i * width;
            std::size_t r = i;
            for (std::size_t k = 0; k < n; ++k) {
                const T* in_row = xp + r * width;
                const T wk = w[k];
                for (std::size_t j = 0; j < width; ++j) out_row[j] += wk * in_row[j];
                if (++r == n) r = 0;
            }
        }
    } else {
        const std::size_t n = width;
        for (std::size_t row = 0; row < height; ++row) {
            T* out_row = out + row * width;
            const T* in_row = xp + row * width;
            for (std::size_t k = 0; k < n; ++k) {
                const T wk = w[k];
                const std::size_t split = n - k;
                for (std::size_t i = 0; i < split; ++i) out_row[i] += wk * in_row[i + k];
                for (std::size_t i = split; i < n; ++i) out_row[i] += wk * in_row[i + k - n];
            }
        }
    }
}

// out += valid correlation of an extended plane (axis length 2N-1) with a
// length-N kernel. `ext_width` is the row length of the extended plane.
template <typename T>
void accumulate_valid(T* out, const T* ext, const T* w, std::size_t height, std::size_t width, Orientation o) {
    if (o == Orientation::H) {
        const std::size_t n = height;
        for (std::size_t i = 0; i < n; ++i) {
            T* out_row = out + i * width;
            for (std::size_t k = 0; k < n; ++k) {
                const T* in_row = ext + (i + k) * width;
                const T wk = w[k];
                for (std::size_t j = 0; j < width; ++j) out_row[j] += wk * in_row[j];
            }
        }
    } else {
        const std::size_t n = width;
        const std::size_t ext_width = 2 * n - 1;
        for (std::size_t row = 0; row < height; ++row) {
            T* out_row = out + row * width;
            const T* in_row = ext + row * ext_width;
            for (std::size_t k = 0; k < n; ++k) {
                const T wk = w[k];
                for (std::size_t i = 0; i < n; ++i) out_row[i] += wk * in_row[i + k];
            }
        }
    }
}

template <typename T>
void add_bias(T* plane, std::size_t count, T bias) {
    for (std::size_t n = 0; n < count; ++n) plane[n] += bias;
}

template <typename T, typename Accumulate>
Tensor4<T> correlate_planes(const Tensor4<T>& src, const Shape& out_shape, const ResampledParc<T>& r,
                            Accumulate&& accumulate) {
    Tensor4<T> y(out_shape);
    const std::size_t plane_size = out_shape.height * out_shape.width;
    parallel_for(out_shape.batch * out_shape.channels, [&](std::size_t begin, std::size_t end) {
        for (std::size_t bo = begin; bo < end; ++bo) {
            const std::size_t b = bo / out_shape.channels, co = bo % out_shape.channels;
            T* out = y.plane(b, co);
            if (r.mode == ParcMode::Depthwise) {
                accumulate(out, src.plane(b, co), r.kernel_ptr(co));
            } else {
                for (std::size_t ci = 0; ci < r.in_channels; ++ci)
                    accumulate(out, src.plane(b, ci), r.kernel_ptr(co * r.in_channels + ci));
            }
            add_bias(out, plane_size, r.bias[co]);
        }
    });
    return y;
}

}  // namespace

template <typename T>
ParcParams<T> ParcParams<T>::depthwise(std::size_t channels, std::size_t meta_length, Orientation o) {
    ParcParams p;
    p.mode = ParcMode::Depthwise;
    p.orientation = o;
    p.meta_length = meta_length;
    p.in_channels = p.out_channels = channels;
    p.meta_kernel.assign(channels * meta_length, T(0));
    p.meta_pe.assign(channels * meta_length, T(0));
    p.bias.assign(channels, T(0));
    return p;
}

template <typename T>
ParcParams<T> ParcParams<T>::dense(std::size_t in_channels, std::size_t out_channels, std::size_t meta_length,
                                   Orientation o) {
    ParcParams p;
    p.mode = ParcMode::Dense;
    p.orientation = o;
    p.meta_length = meta_length;
    p.in_channels = in_channels;
    p.out_channels = out_channels;
    p.meta_kernel.assign(out_channels * in_channels * meta_length, T(0));
    p.meta_pe.assign(in_channels * meta_length, T(0));
    p.bias.assign(out_channels, T(0));
    return p;
}

template <typename T>
void ParcParams<T>::validate() const {
    if (meta_length == 0) throw std::invalid_argument("ParcParams: meta length must be >= 1");
    if (in_channels == 0 || out_channels == 0) throw std::invalid_argument("ParcParams: channel count must be >= 1");
    if (mode == ParcMode::Depthwise && in_channels != out_channels)
        throw std::invalid_argument("ParcParams: depthwise layer needs in_channels == out_channels");
    if (meta_kernel.size() != kernel_count() * meta_length)
        throw std::invalid_argument("ParcParams: kernel has " + std::to_string(meta_kernel.size()) + " values, expected " +
                                    std::to_string(kernel_count() * meta_length));
    if (meta_pe.size() != in_channels * meta_length)
        throw std::invalid_argument("ParcParams: positional embedding has " + std::to_string(meta_pe.size()) +
                                    " values, expected " + std::to_string(in_channels * meta_length));
    if (bias.size() != out_channels)
        throw std::invalid_argument("ParcParams: bias has " + std::to_string(bias.size()) + " values, expected " +
                                    std::to_string(out_channels));
    check_finite(meta_kernel, "kernel");
    check_finite(meta_pe, "positional embedding");
    check_finite(bias, "bias");
}

template <typename T>
ResampledParc<T> resample(const ParcParams<T>& p, std::size_t n) {
    p.validate();
    if (n == 0) throw std::invalid_argument("resample: target length must be >= 1");
    ResampledParc<T> r;
    r.mode = p.mode;
    r.orientation = p.orientation;
    r.length = n;
    r.in_channels = p.in_channels;
    r.out_channels = p.out_channels;
    r.bias = p.bias;
    r.kernel.reserve(p.kernel_count() * n);
    for (std::size_t idx = 0; idx < p.kernel_count(); ++idx) {
        const auto w = interp_linear<T>(p.kernel(idx), n);
        r.kernel.insert(r.kernel.end(), w.begin(), w.end());
    }
    r.pe.reserve(p.in_channels * n);
    for (std::size_t c = 0; c < p.in_channels; ++c) {
        const auto e = interp_linear<T>(p.pe(c), n);
        r.pe.insert(r.pe.end(), e.begin(), e.end());
    }
    return r;
}

template <typename T>
Shape parc_output_shape(const Shape& in, const ResampledParc<T>& r) {
    if (in.channels != r.in_channels)
        throw std::invalid_argument("ParC: input has " + std::to_string(in.channels) + " channels, layer expects " +
                                    std::to_string(r.in_channels));
    if (in.axis_length(r.orientation) != r.length)
        throw std::invalid_argument("ParC: axis length " + std::to_string(in.axis_length(r.orientation)) +
                                    " does not match resampled length " + std::to_string(r.length));
    Shape out = in;
    out.channels = r.out_channels;
    return out;
}

template <typename T>
Tensor4<T> add_positional(const Tensor4<T>& x, const ResampledParc<T>& r) {
    const Shape s = x.shape();
    parc_output_shape(s, r);
    Tensor4<T> xp = x;
    for (std::size_t b = 0; b < s.batch; ++b)
        for (std::size_t c = 0; c < s.channels; ++c) {
            T* plane = xp.plane(b, c);
            const T* pe = r.pe_ptr(c);
            for (std::size_t i = 0; i < s.height; ++i)
                for (std::size_t j = 0; j < s.width; ++j)
                    plane[i * s.width + j] += pe[r.orientation == Orientation::H ? i : j];
        }
    return xp;
}

template <typename T>
Tensor4<T> parc_forward(const Tensor4<T>& x, const ResampledParc<T>& r) {
    const Shape out_shape = parc_output_shape(x.shape(), r);
    const Tensor4<T> xp = add_positional(x, r);
    const std::size_t height = x.shape().height, width = x.shape().width;
    return correlate_planes(xp, out_shape, r, [&](T* out, const T* src, const T* w) {
        accumulate_circular(out, src, w, height, width, r.orientation);
    });
}

template <typename T>
Tensor4<T> parc_forward(const Tensor4<T>& x, const ParcParams<T>& p) {
    return parc_forward(x, resample(p, x.shape().axis_length(p.orientation)));
}

template <typename T>
Tensor4<T> parc_forward_via_concat(const Tensor4<T>& x, const ResampledParc<T>& r) {
    const Shape s = x.shape();
    const Shape out_shape = parc_output_shape(s, r);
    const Tensor4<T> xp = add_positional(x, r);
    const std::size_t n = r.length;

    // Periodic extension: xp followed by its first N-1 lines along the axis.
    Shape ext_shape = s;
    if (r.orientation == Orientation::H)
        ext_shape.height = 2 * n - 1;
    else
        ext_shape.width = 2 * n - 1;
    Tensor4<T> ext(ext_shape);
    for (std::size_t b = 0; b < s.batch; ++b)
        for (std::size_t c = 0; c < s.channels; ++c)
            for (std::size_t i = 0; i < ext_shape.height; ++i)
                for (std::size_t j = 0; j < ext_shape.width; ++j)
                    ext(b, c, i, j) = xp(b, c, i < s.height ? i : i - s.height, j < s.width ? j : j - s.width);

    return correlate_planes(ext, out_shape, r, [&](T* out, const T* src, const T* w) {
        accumulate_valid(out, src, w, s.height, s.width, r.orientation);
    });
}

template <typename T>
Tensor4<T> parc_forward_via_concat(const Tensor4<T>& x, const ParcParams<T>& p) {
    return parc_forward_via_concat(x, resample(p, x.shape().axis_length(p.orientation)));
}

template <typename T>
ParcGradients<T> parc_backward(const Tensor4<T>& x, const ParcParams<T>& p, const Tensor4<T>& dy) {
    const Shape s = x.shape();
    const std::size_t n = s.axis_length(p.orientation);
    const ResampledParc<T> r = resample(p, n);
    const Shape out_shape = parc_output_shape(s, r);
    if (dy.shape() != out_shape)
        throw std::invalid_argument("parc_backward: dy shape " + dy.shape().str() + " != output shape " +
                                    out_shape.str());
    const Tensor4<T> xp = add_positional(x, r);
    const std::size_t cross = s.cross_length(p.orientation);
    const Orientation o = p.orientation;
    const bool dense = p.mode == ParcMode::Dense;

    ParcGradients<T> g;
    g.dx = Tensor4<T>(s);
    g.d_kernel.assign(r.kernel.size(), T(0));
    g.d_pe.assign(r.pe.size(), T(0));
    g.d_bias.assign(r.out_channels, T(0));

    auto pair_kernel = [&](std::size_t co, std::size_t ci) { return dense ? co * r.in_channels + ci : co; };

    for (std::size_t b = 0; b < s.batch; ++b) {
        for (std::size_t co = 0; co < r.out_channels; ++co) {
            const T* gy = dy.plane(b, co);
            for (std::size_t e = 0; e < n * cross; ++e) g.d_bias[co] += gy[e];

            const std::size_t ci_begin = dense ? 0 : co;
            const std::size_t ci_end = dense ? r.in_channels : co + 1;
            for (std::size_t ci = ci_begin; ci < ci_end; ++ci) {
                const std::size_t kidx = pair_kernel(co, ci);
                const T* w = r.kernel_ptr(kidx);
                const T* xpp = xp.plane(b, ci);
                T* gx = g.dx.plane(b, ci);
                T* gw = g.d_kernel.data() + kidx * n;
                for (std::size_t t = 0; t < cross; ++t) {
                    for (std::size_t i = 0; i < n; ++i) {
                        const T gyi = gy[plane_index(o, s.width, i, t)];
                        for (std::size_t k = 0; k < n; ++k) {
                            const std::size_t m = (i + k) % n;
                            // y_i depends on xp_m through w_k with m = (i+k) mod N.
                            gx[plane_index(o, s.width, m, t)] += gyi * w[k];
                            gw[k] += gyi * xpp[plane_index(o, s.width, m, t)];
                        }
                    }
                }
            }
        }
    }

    // PE enters additively, so its gradient is dx collapsed over batch and
    // the orthogonal axis.
    for (std::size_t b = 0; b < s.batch; ++b)
        for (std::size_t ci = 0; ci < r.in_channels; ++ci) {
            const T* gx = g.dx.plane(b, ci);
            T* gpe = g.d_pe.data() + ci * n;
            for (std::size_t m = 0; m < n; ++m)
                for (std::size_t t = 0; t < cross; ++t) gpe[m] += gx[plane_index(o, s.width, m, t)];
        }

    const std::size_t k_meta = p.meta_length;
    g.d_meta_kernel.reserve(p.kernel_count() * k_meta);
    for (std::size_t idx = 0; idx < p.kernel_count(); ++idx) {
        const auto a = interp_linear_adjoint<T>(std::span<const T>(g.d_kernel.data() + idx * n, n), k_meta);
        g.d_meta_kernel.insert(g.d_meta_kernel.end(), a.begin(), a.end());
    }
    g.d_meta_pe.reserve(p.in_channels * k_meta);
    for (std::size_t c = 0; c < p.in_channels; ++c) {
        const auto a = interp_linear_adjoint<T>(std::span<const T>(g.d_pe.data() + c * n, n), k_meta);
        g.d_meta_pe.insert(g.d_meta_pe.end(), a.begin(), a.end());
    }
    return g;
}

#define PARC_INSTANTIATE(T)                                                                           \
    template struct ParcParams<T>;                                                                    \
    template ResampledParc<T> resample<T>(const ParcParams<T>&, std::size_t);                         \
    template Shape parc_output_shape<T>(const Shape&, const ResampledParc<T>&);                       \
    template Tensor4<T> add_positional<T>(const Tensor4<T>&, const ResampledParc<T>&);                \
    template Tensor4<T> parc_forward<T>(const Tensor4<T>&, const ParcParams<T>&);                     \
    template Tensor4<T> parc_forward<T>(const Tensor4<T>&, const ResampledParc<T>&);                  \
    template Tensor4<T> parc_forward_via_concat<T>(const Tensor4<T>&, const ParcParams<T>&);          \
    template Tensor4<T> parc_forward_via_concat<T>(const Tensor4<T>&, const ResampledParc<T>&);       \
    template ParcGradients<T> parc_backward<T>(const Tensor4<T>&, const ParcParams<T>&, const Tensor4<T>&);

PARC_INSTANTIATE(float)
PARC_INSTANTIATE(double)

#undef PARC_INSTANTIATE

}  // namespace parc
