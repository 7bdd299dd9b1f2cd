#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace parc {

// Multiplication counts for the benchmarked operators. Additions are not
// counted. All counts are for one batch item; FlopsReport scales by batch.

using MulCount = std::uint64_t;

/// ceil(log2(n)) for n >= 1 (0 for n == 1).
unsigned ceil_log2(std::uint64_t n);

MulCount flops_dwconv2d(std::uint64_t channels, std::uint64_t height, std::uint64_t width, std::uint64_t kernel_h,
                        std::uint64_t kernel_w);

MulCount flops_conv2d_dense(std::uint64_t in_channels, std::uint64_t out_channels, std::uint64_t height,
                            std::uint64_t width, std::uint64_t kernel_h, std::uint64_t kernel_w);

/// Half the channels run ParC-H (K = H), the other half ParC-V (K = W):
/// C*H*W*(H+W)/2. Throws std::invalid_argument for odd C.
MulCount flops_parc(std::uint64_t channels, std::uint64_t height, std::uint64_t width);

/// FFT form of flops_parc, counting a base-2 FFT of length N as
/// (N/2)*ceil(log2 N) complex multiplies and 4 real MULs per complex MUL:
///   2CHW(L_H + L_W) + C*H*L_H + C*W*L_W + 4CHW,  L_N = ceil(log2 N).
/// Throws std::invalid_argument for odd C.
MulCount flops_fast_parc(std::uint64_t channels, std::uint64_t height, std::uint64_t width);

/// Order-of-magnitude self-attention cost C*H^2*W^2 + C^2*H*W. No constant
/// factors are known, so reports built from it are flagged asymptotic.
MulCount flops_self_attention_asymptotic(std::uint64_t channels, std::uint64_t height, std::uint64_t width);

enum class OpKind { DwConv2d, Conv2d, Parc, FastParc, SelfAttentionAsymptotic };

/// One operator configuration. `kernel` is used by the convolution kinds.
struct OpSpec {
    OpKind kind = OpKind::DwConv2d;
    std::uint64_t kernel = 3;
    std::string name;
};

/// Parses "dw3", "dw7", "dwK", "convK", "parc", "fastparc", "attention".
/// Throws std::invalid_argument listing the accepted names.
OpSpec parse_op(const std::string& name);
const char* to_string(OpKind k);

struct FlopsReport {
    OpSpec op;
    std::uint64_t batch = 1;
    std::uint64_t in_channels = 0;
    std::uint64_t out_channels = 0;
    std::uint64_t height = 0;
    std::uint64_t width = 0;
    MulCount multiplications = 0;
    bool asymptotic = false;
};

/// Square-kernel report for `op` at (batch, C, H, W). Dense conv uses C for
/// both channel counts.
FlopsReport flops_report(const OpSpec& op, std::uint64_t batch, std::uint64_t channels, std::uint64_t height,
                         std::uint64_t width);

struct CurvePoint {
    std::uint64_t resolution;
    MulCount multiplications;
};

/// Evaluates `op` at H = W = r for each resolution, batch 1.
std::vector<CurvePoint> complexity_curve(const OpSpec& op, std::uint64_t channels,
                                         const std::vector<std::uint64_t>& resolutions);

/// Writes `op,channels,resolution,mul_count` rows (header always present).
void write_curve_csv(std::ostream& os, const std::vector<std::pair<OpSpec, std::vector<CurvePoint>>>& curves,
                     std::uint64_t channels);

/// Value in millions rounded to `decimals` places, as printed in a table.
std::string format_millions(MulCount count, int decimals);

}  // namespace parc
