#pragma once

// Central-difference check of parc_backward on one small random instance.

#include <array>
#include <functional>
#include <numeric>

#include "oracles.hpp"
#include "parc/fixture.hpp"
#include "parc/init.hpp"
#include "parc/parc.hpp"

namespace parc::gradcheck {

struct Instance {
    Tensor4<double> x, dy;
    ParcParams<double> p;
};

inline double objective(const Instance& in) {
    const auto y = parc_forward(in.x, in.p);
    return std::inner_product(y.data().begin(), y.data().end(), in.dy.data().begin(), 0.0);
}

inline std::vector<double> fd_all(Instance& in, std::vector<double>& values, double step) {
    std::vector<double> out(values.size());
    const std::function<double()> f = [&] { return objective(in); };
    for (std::size_t n = 0; n < values.size(); ++n) out[n] = oracle::central_difference(f, values[n], step);
    return out;
}

inline constexpr std::array<const char*, 6> kNames{"dx", "d_kernel", "d_pe", "d_bias", "d_meta_kernel", "d_meta_pe"};

/// Worst relative error per gradient output (order as kNames). The trial
/// index picks orientation, depthwise/dense and whether K differs from N.
inline std::array<double, 6> gradient_errors(int trial, std::uint64_t seed, double step = 1e-5) {
    const bool dense = trial % 3 == 2;
    const Orientation o = trial % 2 == 0 ? Orientation::H : Orientation::V;
    const Shape s{1 + static_cast<std::size_t>(trial % 2), 2, 4, 3};
    const std::size_t n = s.axis_length(o);
    Instance in;
    in.x = random_tensor<double>(s, seed);
    const std::size_t k_meta = trial % 4 < 2 ? n : 5;
    in.p = dense ? random_dense<double>(2, 3, k_meta, o, seed + 1) : random_depthwise<double>(2, k_meta, o, seed + 1);
    Shape os = s;
    os.channels = in.p.out_channels;
    in.dy = random_tensor<double>(os, seed + 2);

    const auto g = parc_backward(in.x, in.p, in.dy);

    std::vector<double> xs(in.x.data().begin(), in.x.data().end());
    const std::function<double()> fx = [&] {
        std::copy(xs.begin(), xs.end(), in.x.data().begin());
        return objective(in);
    };
    std::vector<double> fd_x(xs.size());
    for (std::size_t e = 0; e < xs.size(); ++e) fd_x[e] = oracle::central_difference(fx, xs[e], step);
    std::copy(xs.begin(), xs.end(), in.x.data().begin());

    std::array<double, 6> err{};
    err[0] = oracle::max_relative_error({g.dx.data().begin(), g.dx.data().end()}, fd_x);
    err[3] = oracle::max_relative_error(g.d_bias, fd_all(in, in.p.bias, step));
    err[4] = oracle::max_relative_error(g.d_meta_kernel, fd_all(in, in.p.meta_kernel, step));
    err[5] = oracle::max_relative_error(g.d_meta_pe, fd_all(in, in.p.meta_pe, step));

    // Length-N gradients: evaluate at meta length N with the resampled taps.
    Instance at_n = in;
    const auto r = resample(in.p, n);
    at_n.p.meta_length = n;
    at_n.p.meta_kernel = r.kernel;
    at_n.p.meta_pe = r.pe;
    err[1] = oracle::max_relative_error(g.d_kernel, fd_all(at_n, at_n.p.meta_kernel, step));
    err[2] = oracle::max_relative_error(g.d_pe, fd_all(at_n, at_n.p.meta_pe, step));
    return err;
}

}  // namespace parc::gradcheck
