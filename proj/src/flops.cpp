#include "parc/flops.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace parc {

namespace {

void require_positive(std::uint64_t v, const char* what) {
    if (v == 0) throw std::invalid_argument(std::string(what) + " must be positive");
}

void require_even_channels(std::uint64_t c) {
    require_positive(c, "channels");
    if (c % 2 != 0)
        throw std::invalid_argument("ParC splits channels evenly between ParC-H and ParC-V; channel count " +
                                    std::to_string(c) + " is odd");
}

}  // namespace

unsigned ceil_log2(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("ceil_log2: n must be positive");
    unsigned l = 0;
    while ((std::uint64_t{1} << l) < n) ++l;
    return l;
}

MulCount flops_dwconv2d(std::uint64_t c, std::uint64_t h, std::uint64_t w, std::uint64_t kh, std::uint64_t kw) {
    require_positive(c, "channels");
    require_positive(h, "height");
    require_positive(w, "width");
    require_positive(kh, "kernel height");
    require_positive(kw, "kernel width");
    return c * h * w * kh * kw;
}

MulCount flops_conv2d_dense(std::uint64_t ci, std::uint64_t co, std::uint64_t h, std::uint64_t w, std::uint64_t kh,
                            std::uint64_t kw) {
    require_positive(co, "output channels");
    return co * flops_dwconv2d(ci, h, w, kh, kw);
}

MulCount flops_parc(std::uint64_t c, std::uint64_t h, std::uint64_t w) {
    require_even_channels(c);
    require_positive(h, "height");
    require_positive(w, "width");
    return (c / 2) * h * w * (h + w);
}

MulCount flops_fast_parc(std::uint64_t c, std::uint64_t h, std::uint64_t w) {
    require_even_channels(c);
    require_positive(h, "height");
    require_positive(w, "width");
    const MulCount lh = ceil_log2(h), lw = ceil_log2(w);
    return 2 * c * h * w * (lh + lw) + c * h * lh + c * w * lw + 4 * c * h * w;
}

MulCount flops_self_attention_asymptotic(std::uint64_t c, std::uint64_t h, std::uint64_t w) {
    require_positive(c, "channels");
    require_positive(h, "height");
    require_positive(w, "width");
    return c * h * h * w * w + c * c * h * w;
}

const char* to_string(OpKind k) {
    switch (k) {
        case OpKind::DwConv2d: return "dwconv2d";
        case OpKind::Conv2d: return "conv2d";
        case OpKind::Parc: return "parc";
        case OpKind::FastParc: return "fast_parc";
        case OpKind::SelfAttentionAsymptotic: return "self_attention_asymptotic";
    }
    return "?";
}

OpSpec parse_op(const std::string& name) {
    auto kernel_suffix = [&](std::size_t prefix) -> std::uint64_t {
        const std::string digits = name.substr(prefix);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) return 0;
        return std::stoull(digits);
    };
    if (name == "parc") return {OpKind::Parc, 0, name};
    if (name == "fastparc") return {OpKind::FastParc, 0, name};
    if (name == "attention") return {OpKind::SelfAttentionAsymptotic, 0, name};
    if (name.rfind("dw", 0) == 0)
        if (const auto k = kernel_suffix(2); k > 0) return {OpKind::DwConv2d, k, name};
    if (name.rfind("conv", 0) == 0)
        if (const auto k = kernel_suffix(4); k > 0) return {OpKind::Conv2d, k, name};
    throw std::invalid_argument("unknown op '" + name + "' (valid: dw<K>, conv<K>, parc, fastparc, attention)");
}

FlopsReport flops_report(const OpSpec& op, std::uint64_t batch, std::uint64_t channels, std::uint64_t height,
                         std::uint64_t width) {
    require_positive(batch, "batch");
    FlopsReport r{op, batch, channels, channels, height, width, 0, false};
    MulCount per_item = 0;
    switch (op.kind) {
        case OpKind::DwConv2d: per_item = flops_dwconv2d(channels, height, width, op.kernel, op.kernel); break;
        case OpKind::Conv2d:
            per_item = flops_conv2d_dense(channels, channels, height, width, op.kernel, op.kernel);
            break;
        case OpKind::Parc: per_item = flops_parc(channels, height, width); break;
        case OpKind::FastParc: per_item = flops_fast_parc(channels, height, width); break;
        case OpKind::SelfAttentionAsymptotic:
            per_item = flops_self_attention_asymptotic(channels, height, width);
            r.asymptotic = true;
            break;
    }
    r.multiplications = per_item * batch;
    return r;
}

std::vector<CurvePoint> complexity_curve(const OpSpec& op, std::uint64_t channels,
                                         const std::vector<std::uint64_t>& resolutions) {
    std::vector<CurvePoint> out;
    out.reserve(resolutions.size());
    for (const auto r : resolutions) out.push_back({r, flops_report(op, 1, channels, r, r).multiplications});
    return out;
}

void write_curve_csv(std::ostream& os, const std::vector<std::pair<OpSpec, std::vector<CurvePoint>>>& curves,
                     std::uint64_t channels) {
    os << "op,channels,resolution,mul_count\n";
    for (const auto& [op, points] : curves)
        for (const auto& pt : points) os << op.name << ',' << channels << ',' << pt.resolution << ',' << pt.multiplications << '\n';
}

std::string format_millions(MulCount count, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, static_cast<double>(count) / 1e6);
    return buf;
}

}  // namespace parc
