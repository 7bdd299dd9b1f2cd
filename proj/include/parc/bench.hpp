#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "parc/fixture.hpp"
#include "parc/flops.hpp"
#include "parc/parc.hpp"

namespace parc {

struct BenchConfig {
    std::uint64_t batch = 1;
    std::uint64_t channels = 96;
    std::vector<std::uint64_t> resolutions{28, 56, 112, 224};
    std::vector<std::string> ops{"dw3", "dw7", "parc", "fastparc"};
    std::size_t warmup = 200;
    std::size_t iters = 100;
    Precision precision = Precision::F32;
    std::uint64_t seed = 0;
    std::size_t meta_length = kDefaultMetaLength;
    /// Run library kernels on thread_cap() workers instead of one.
    bool parallel = false;
    /// Fraction of samples dropped from each tail before the mean/std.
    double trim_fraction = 0.0;

    /// Throws std::invalid_argument on zero counts or unknown ops.
    void validate() const;
};

struct BenchRecord {
    std::string op;
    std::uint64_t resolution = 0;
    std::uint64_t batch = 0;
    std::uint64_t channels = 0;
    Precision precision = Precision::F32;
    MulCount mul_count = 0;
    double latency_ms_mean = 0.0;
    double latency_ms_std = 0.0;
    std::size_t iters = 0;
    std::string host;
};

struct BenchTable {
    std::vector<BenchRecord> records;

    const BenchRecord* find(const std::string& op, std::uint64_t resolution) const;

    /// Header: op,resolution,batch,channels,precision,mul_count,
    ///         latency_ms_mean,latency_ms_std,iters,host
    void write_csv(std::ostream& os) const;
    void write_markdown(std::ostream& os) const;
};

inline constexpr const char* kBenchCsvHeader =
    "op,resolution,batch,channels,precision,mul_count,latency_ms_mean,latency_ms_std,iters,host";

/// Ops run_bench can execute: dw<K> (odd K), parc, fastparc.
std::vector<std::string> bench_op_names();

struct LatencyStats {
    double mean = 0.0;
    double stddev = 0.0;  // population
};

/// Mean and population standard deviation after dropping
/// floor(trim_fraction * n) samples from each end of the sorted sample.
LatencyStats summarize_latency(std::vector<double> samples_ms, double trim_fraction = 0.0);

std::string host_descriptor();

/// Quotes a CSV field per RFC 4180 when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// Times every (op, resolution) pair. One input is allocated per pair and
/// reused; warmup iterations are untimed and each measured iteration is
/// timed separately on a steady clock. `progress` (optional) sees each
/// record as it completes.
BenchTable run_bench(const BenchConfig& cfg, const std::function<void(const BenchRecord&)>& progress = {});

/// Smallest resolution (ascending) at which op_a's mean latency is strictly
/// below op_b's. Throws std::invalid_argument unless both ops share at least
/// two resolutions.
std::optional<std::uint64_t> crossover(const BenchTable& table, const std::string& op_a, const std::string& op_b);

}  // namespace parc
