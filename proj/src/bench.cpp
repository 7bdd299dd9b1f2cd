#include "parc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <sys/utsname.h>

#include "parc/conv_baseline.hpp"
#include "parc/fast_parc.hpp"
#include "parc/init.hpp"
#include "parc/parallel.hpp"

namespace parc {

namespace {

/// Restores the library thread count on scope exit.
class ThreadScope {
public:
    explicit ThreadScope(bool parallel) : saved_(thread_count()) { set_thread_count(parallel ? thread_cap() : 1); }
    ~ThreadScope() { set_thread_count(saved_); }
    ThreadScope(const ThreadScope&) = delete;
    ThreadScope& operator=(const ThreadScope&) = delete;

private:
    std::size_t saved_;
};

bool is_bench_op(const OpSpec& op) {
    return (op.kind == OpKind::DwConv2d && op.kernel % 2 == 1) || op.kind == OpKind::Parc ||
           op.kind == OpKind::FastParc;
}

std::string valid_ops_message() {
    std::string s;
    for (const auto& n : bench_op_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
}

OpSpec parse_bench_op(const std::string& name) {
    OpSpec op;
    try {
        op = parse_op(name);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("unknown bench op '" + name + "' (valid: " + valid_ops_message() + ")");
    }
    if (!is_bench_op(op))
        throw std::invalid_argument("op '" + name + "' has no executable kernel (valid: " + valid_ops_message() + ")");
    return op;
}

/// One operator instance with its input and parameters prepared up front.
/// run() executes only the operator and returns a value read from the output.
template <typename T>
std::function<double()> make_runner(const OpSpec& op, const BenchConfig& cfg, std::uint64_t res) {
    const auto sink = [](const Tensor4<T>& y) { return static_cast<double>(y.data()[y.size() / 2]); };

    if (op.kind == OpKind::DwConv2d) {
        auto x = std::make_shared<const Tensor4<T>>(random_tensor<T>({cfg.batch, cfg.channels, res, res}, cfg.seed));
        auto p = std::make_shared<ZeroPadConv2dParams<T>>();
        p->kernel_size = op.kernel;
        const auto w = random_tensor<T>({1, cfg.channels, op.kernel, op.kernel}, cfg.seed + 1);
        p->kernels.assign(w.data().begin(), w.data().end());
        return [x, p, sink] { return sink(dwconv2d_zeropad(*x, *p)); };
    }

    // ParC and Fast-ParC: ParC-H on the first C/2 channels, ParC-V on the
    // rest. The halves are materialized once so the split is not timed.
    const std::uint64_t half = cfg.channels / 2;
    auto xh = std::make_shared<const Tensor4<T>>(random_tensor<T>({cfg.batch, half, res, res}, cfg.seed));
    auto xv = std::make_shared<const Tensor4<T>>(random_tensor<T>({cfg.batch, half, res, res}, cfg.seed + 2));
    const auto ph = random_depthwise<T>(half, cfg.meta_length, Orientation::H, cfg.seed + 3);
    const auto pv = random_depthwise<T>(half, cfg.meta_length, Orientation::V, cfg.seed + 4);

    if (op.kind == OpKind::Parc) {
        auto rh = std::make_shared<const ResampledParc<T>>(resample(ph, res));
        auto rv = std::make_shared<const ResampledParc<T>>(resample(pv, res));
        return [xh, xv, rh, rv, sink] { return sink(parc_forward(*xh, *rh)) + sink(parc_forward(*xv, *rv)); };
    }
    auto fh = std::make_shared<const FastParc<T>>(ph, res);
    auto fv = std::make_shared<const FastParc<T>>(pv, res);
    return [xh, xv, fh, fv, sink] { return sink(fh->forward(*xh)) + sink(fv->forward(*xv)); };
}

template <typename T>
BenchRecord time_op(const OpSpec& op, const BenchConfig& cfg, std::uint64_t res, const std::string& host) {
    auto run = make_runner<T>(op, cfg, res);
    volatile double guard = 0.0;
    for (std::size_t k = 0; k < cfg.warmup; ++k) guard = guard + run();

    std::vector<double> samples;
    samples.reserve(cfg.iters);
    for (std::size_t k = 0; k < cfg.iters; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        guard = guard + run();
        const auto t1 = std::chrono::steady_clock::now();
        samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    const LatencyStats stats = summarize_latency(std::move(samples), cfg.trim_fraction);

    BenchRecord r;
    r.op = op.name;
    r.resolution = res;
    r.batch = cfg.batch;
    r.channels = cfg.channels;
    r.precision = cfg.precision;
    r.mul_count = flops_report(op, cfg.batch, cfg.channels, res, res).multiplications;
    r.latency_ms_mean = stats.mean;
    r.latency_ms_std = stats.stddev;
    r.iters = cfg.iters;
    r.host = host;
    return r;
}

std::string read_cpu_model() {
    std::ifstream in("/proc/cpuinfo");
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                auto v = line.substr(colon + 1);
                v.erase(0, v.find_first_not_of(' '));
                return v;
            }
        }
    }
    return "unknown-cpu";
}

}  // namespace

void BenchConfig::validate() const {
    if (batch == 0 || channels == 0) throw std::invalid_argument("bench: batch and channels must be >= 1");
    if (warmup == 0 || iters == 0) throw std::invalid_argument("bench: warmup and iters must be >= 1");
    if (trim_fraction < 0.0 || trim_fraction >= 0.5) throw std::invalid_argument("bench: trim fraction must be in [0, 0.5)");
    for (const auto r : resolutions)
        if (r == 0) throw std::invalid_argument("bench: resolutions must be >= 1");
    for (const auto& name : ops) {
        const OpSpec op = parse_bench_op(name);
        if ((op.kind == OpKind::Parc || op.kind == OpKind::FastParc) && channels % 2 != 0)
            throw std::invalid_argument("bench: op '" + name + "' needs an even channel count");
    }
}

std::vector<std::string> bench_op_names() { return {"dw3", "dw7", "dw<K>", "parc", "fastparc"}; }

LatencyStats summarize_latency(std::vector<double> samples, double trim_fraction) {
    if (samples.empty()) return {};
    std::sort(samples.begin(), samples.end());
    const auto drop = static_cast<std::size_t>(std::floor(trim_fraction * static_cast<double>(samples.size())));
    const auto first = samples.begin() + static_cast<std::ptrdiff_t>(drop);
    const auto last = samples.end() - static_cast<std::ptrdiff_t>(drop);
    if (first >= last) return {};
    const auto n = static_cast<double>(last - first);
    double mean = 0.0;
    for (auto it = first; it != last; ++it) mean += *it;
    mean /= n;
    double var = 0.0;
    for (auto it = first; it != last; ++it) var += (*it - mean) * (*it - mean);
    return {mean, std::sqrt(var / n)};
}

std::string host_descriptor() {
    std::ostringstream os;
    os << read_cpu_model();
    utsname u{};
    if (uname(&u) == 0) os << " / " << u.sysname << ' ' << u.machine;
    os << " / " << std::thread::hardware_concurrency() << " hw threads";
    return os.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

const BenchRecord* BenchTable::find(const std::string& op, std::uint64_t resolution) const {
    for (const auto& r : records)
        if (r.op == op && r.resolution == resolution) return &r;
    return nullptr;
}

void BenchTable::write_csv(std::ostream& os) const {
    os << kBenchCsvHeader << '\n';
    const auto old_flags = os.flags();
    const auto old_prec = os.precision(6);
    os.setf(std::ios::fixed, std::ios::floatfield);
    for (const auto& r : records) {
        os << csv_field(r.op) << ',' << r.resolution << ',' << r.batch << ',' << r.channels << ','
           << to_string(r.precision) << ',' << r.mul_count << ',' << r.latency_ms_mean << ',' << r.latency_ms_std << ','
           << r.iters << ',' << csv_field(r.host) << '\n';
    }
    os.flags(old_flags);
    os.precision(old_prec);
}

void BenchTable::write_markdown(std::ostream& os) const {
    os << "| Resolution | Operation | FLOPs (M) | Latency (ms) | Row |\n";
    os << "|---|---|---|---|---|\n";
    std::size_t row = 0;
    char buf[64];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%.3f ± %.3f", r.latency_ms_mean, r.latency_ms_std);
        os << "| " << r.resolution << 'x' << r.resolution << " | " << r.op << " | "
           << format_millions(r.mul_count, 2) << " | " << buf << " | " << ++row << " |\n";
    }
}

BenchTable run_bench(const BenchConfig& cfg, const std::function<void(const BenchRecord&)>& progress) {
    cfg.validate();
    std::vector<OpSpec> ops;
    for (const auto& name : cfg.ops) ops.push_back(parse_bench_op(name));

    const ThreadScope threads(cfg.parallel);
    const std::string host = host_descriptor();
    BenchTable table;
    for (const auto res : cfg.resolutions) {
        for (const auto& op : ops) {
            BenchRecord r = cfg.precision == Precision::F32 ? time_op<float>(op, cfg, res, host)
                                                            : time_op<double>(op, cfg, res, host);
            if (progress) progress(r);
            table.records.push_back(std::move(r));
        }
    }
    return table;
}

std::optional<std::uint64_t> crossover(const BenchTable& table, const std::string& op_a, const std::string& op_b) {
    std::map<std::uint64_t, std::pair<const BenchRecord*, const BenchRecord*>> by_res;
    for (const auto& r : table.records) {
        if (r.op == op_a) by_res[r.resolution].first = &r;
        if (r.op == op_b) by_res[r.resolution].second = &r;
    }
    std::vector<std::pair<std::uint64_t, std::pair<const BenchRecord*, const BenchRecord*>>> shared;
    for (const auto& [res, pair] : by_res)
        if (pair.first && pair.second) shared.emplace_back(res, pair);
    if (shared.size() < 2)
        throw std::invalid_argument("crossover: '" + op_a + "' and '" + op_b +
                                    "' need timings at two or more common resolutions");
    for (const auto& [res, pair] : shared)
        if (pair.first->latency_ms_mean < pair.second->latency_ms_mean) return res;
    return std::nullopt;
}

}  // namespace parc
