#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "parc/bench.hpp"
#include "parc/blocks.hpp"
#include "parc/fast_parc.hpp"
#include "parc/fixture.hpp"
#include "parc/flops.hpp"
#include "parc/init.hpp"
#include "parc/parallel.hpp"

namespace parc::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

Shape parse_shape(const std::string& text) {
    const auto dims = parse_uint_list(text);
    if (dims.size() != 4) throw std::invalid_argument("shape must be B,C,H,W, got '" + text + "'");
    return Shape{dims[0], dims[1], dims[2], dims[3]};
}

std::string sci(double v, int digits = 3) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*e", digits, v);
    return buf;
}

/// Writes to `path`, or to `fallback` when path is empty or "-".
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& write) {
    if (path.empty() || path == "-") {
        write(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    write(f);
    f.flush();
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

// ---------------------------------------------------------------- equiv

struct EquivOptions {
    std::string resolutions = "7,14,28,56";
    std::uint64_t channels = 96;
    std::uint64_t batch = 1;
    std::string precision = "f64";
    std::uint64_t seed = 0;
    std::size_t meta_length = kDefaultMetaLength;
    std::string input;
};

template <typename T>
double equiv_limit(double scale) {
    if constexpr (std::is_same_v<T, double>) return 1e-10 * std::max(1.0, scale);
    return 1e-5;
}

/// Compares the three implementations on one input and orientation.
/// Returns false if any pair exceeds the precision's limit.
template <typename T>
bool equiv_case(const Tensor4<T>& x, Orientation o, std::uint64_t seed, std::size_t meta_length, std::ostream& out,
                const std::string& label) {
    const auto p = random_depthwise<T>(x.shape().channels, meta_length, o, seed);
    const Tensor4<T> spatial = parc_forward(x, p);
    const Tensor4<T> concat = parc_forward_via_concat(x, p);
    const Tensor4<T> fourier = fast_parc_forward(x, p);
    const double limit = equiv_limit<T>(max_abs(spatial));

    struct Pair {
        const char* name;
        const Tensor4<T>* a;
        const Tensor4<T>* b;
    };
    const Pair pairs[] = {{"spatial/concat", &spatial, &concat},
                          {"spatial/fft", &spatial, &fourier},
                          {"concat/fft", &concat, &fourier}};
    bool ok = true;
    for (const auto& pr : pairs) {
        const double mx = max_abs_diff(*pr.a, *pr.b);
        const double mean = mean_abs_diff(*pr.a, *pr.b);
        const bool pass = mx <= limit;
        ok = ok && pass;
        char line[160];
        std::snprintf(line, sizeof line, "%-8s %-4s %-15s %-11s %-11s %-11s %s\n", label.c_str(), to_string(o),
                      pr.name, sci(mx).c_str(), sci(mean).c_str(), sci(limit, 1).c_str(), pass ? "ok" : "FAIL");
        out << line;
    }
    return ok;
}

template <typename T>
bool equiv_run(const EquivOptions& opt, const std::optional<Tensor4<T>>& fixture, std::ostream& out) {
    char head[160];
    std::snprintf(head, sizeof head, "%-8s %-4s %-15s %-11s %-11s %-11s %s\n", "res", "axis", "pair", "max_abs",
                  "mean_abs", "limit", "status");
    out << head;
    bool ok = true;
    if (fixture) {
        const Shape s = fixture->shape();
        const std::string label = std::to_string(s.height) + "x" + std::to_string(s.width);
        for (const auto o : {Orientation::H, Orientation::V})
            ok = equiv_case(*fixture, o, opt.seed + (o == Orientation::V), opt.meta_length, out, label) && ok;
        return ok;
    }
    for (const auto r : parse_uint_list(opt.resolutions)) {
        const auto x = random_tensor<T>({opt.batch, opt.channels, r, r}, opt.seed * 1000003 + r);
        for (const auto o : {Orientation::H, Orientation::V}) {
            const std::uint64_t pseed = opt.seed * 1000003 + 7919 * r + (o == Orientation::V ? 1 : 0);
            ok = equiv_case(x, o, pseed, opt.meta_length, out, std::to_string(r)) && ok;
        }
    }
    return ok;
}

int cmd_equiv(const EquivOptions& opt, std::ostream& out) {
    if (opt.channels == 0 || opt.batch == 0) throw std::invalid_argument("channels and batch must be positive");
    if (opt.meta_length == 0) throw std::invalid_argument("meta length must be positive");
    Precision prec = parse_precision(opt.precision);
    bool ok = false;
    if (!opt.input.empty()) {
        AnyTensor t = read_parc1(opt.input);
        if (std::holds_alternative<Tensor4<float>>(t)) {
            prec = Precision::F32;
            ok = equiv_run<float>(opt, std::get<Tensor4<float>>(t), out);
        } else {
            prec = Precision::F64;
            ok = equiv_run<double>(opt, std::get<Tensor4<double>>(t), out);
        }
    } else {
        if (parse_uint_list(opt.resolutions).empty()) throw std::invalid_argument("at least one resolution is required");
        for (const auto r : parse_uint_list(opt.resolutions))
            if (r == 0) throw std::invalid_argument("resolutions must be positive");
        ok = prec == Precision::F64 ? equiv_run<double>(opt, std::nullopt, out)
                                    : equiv_run<float>(opt, std::nullopt, out);
    }
    out << "precision " << to_string(prec) << ": " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------- flops

struct FlopsOptions {
    std::string ops = "dw3,dw7,parc,fastparc";
    std::uint64_t channels = 96;
    std::string resolutions = "28,56,112,224";
    std::string out;
};

int cmd_flops(const FlopsOptions& opt, std::ostream& out) {
    const auto resolutions = parse_uint_list(opt.resolutions);
    for (const auto r : resolutions)
        if (r == 0) throw std::invalid_argument("resolutions must be positive");
    std::vector<std::pair<OpSpec, std::vector<CurvePoint>>> curves;
    for (const auto& name : parse_name_list(opt.ops)) {
        const OpSpec op = parse_op(name);
        curves.emplace_back(op, complexity_curve(op, opt.channels, resolutions));
    }
    emit(opt.out, out, [&](std::ostream& os) { write_curve_csv(os, curves, opt.channels); });
    return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchOptions {
    BenchConfig cfg;
    std::string resolutions = "28,56,112,224";
    std::string ops = "dw3,dw7,parc,fastparc";
    std::string precision = "f32";
    std::string out;
    std::string markdown;
};

int cmd_bench(BenchOptions opt, bool verbose, std::ostream& out, std::ostream& err) {
    opt.cfg.resolutions = parse_uint_list(opt.resolutions);
    opt.cfg.ops = parse_name_list(opt.ops);
    opt.cfg.precision = parse_precision(opt.precision);
    opt.cfg.validate();

    std::function<void(const BenchRecord&)> progress;
    if (verbose)
        progress = [&err](const BenchRecord& r) {
            err << r.op << " @" << r.resolution << ": " << r.latency_ms_mean << " ms +- " << r.latency_ms_std << "\n";
        };
    const BenchTable table = run_bench(opt.cfg, progress);
    emit(opt.out, out, [&](std::ostream& os) { table.write_csv(os); });
    if (!opt.markdown.empty()) emit(opt.markdown, out, [&](std::ostream& os) { table.write_markdown(os); });

    const auto has = [&](const std::string& op) { return std::count(opt.cfg.ops.begin(), opt.cfg.ops.end(), op) > 0; };
    if (has("fastparc") && has("parc") && opt.cfg.resolutions.size() >= 2) {
        const auto res = crossover(table, "fastparc", "parc");
        err << "crossover(fastparc, parc): " << (res ? std::to_string(*res) : std::string("none")) << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------- demo-block

struct DemoOptions {
    std::string block = "metaformer";
    std::string shape = "1,8,9,11";
    std::uint64_t seed = 0;
    std::size_t meta_length = kDefaultMetaLength;
};

std::uint64_t fnv1a(std::span<const double> v) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const double d : v) {
        auto bits = std::bit_cast<std::uint64_t>(d);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

void print_map(const Tensor4<double>& d, std::size_t c, std::ostream& out) {
    const Shape s = d.shape();
    if (s.height > 40 || s.width > 80) return;
    for (std::size_t i = 0; i < s.height; ++i) {
        out << "    ";
        for (std::size_t j = 0; j < s.width; ++j) out << (d(0, c, i, j) != 0.0 ? '#' : '.');
        out << "\n";
    }
}

int cmd_demo_block(const DemoOptions& opt, std::ostream& out) {
    const Shape s = parse_shape(opt.shape);
    if (s.numel() == 0) throw std::invalid_argument("shape dims must be positive");
    if (s.channels % 2 != 0) throw std::invalid_argument("blocks need an even channel count");
    const auto x = random_tensor<double>(s, opt.seed);
    std::function<Tensor4<double>(const Tensor4<double>&)> f;
    bool metaformer = false;
    if (opt.block == "metaformer") {
        metaformer = true;
        auto p = random_metaformer<double>(s.channels, opt.meta_length, opt.seed + 1);
        f = [p = std::move(p)](const Tensor4<double>& t) { return metaformer_block_forward(t, p); };
    } else if (opt.block == "convnet") {
        auto p = random_convnet_mixer<double>(s.channels, opt.meta_length, opt.seed + 1);
        f = [p = std::move(p)](const Tensor4<double>& t) { return convnet_mixer_forward(t, p); };
    } else {
        throw std::invalid_argument("unknown block '" + opt.block + "' (expected metaformer or convnet)");
    }

    const auto y = f(x);
    double sum = 0, abs_sum = 0;
    for (const double v : y.data()) {
        sum += v;
        abs_sum += std::abs(v);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(y.data())));
    out << "block " << opt.block << " shape " << s.str() << " seed " << opt.seed << "\n";
    out << "checksum fnv1a=" << buf;
    std::snprintf(buf, sizeof buf, "%.17g", sum);
    out << " sum=" << buf;
    std::snprintf(buf, sizeof buf, "%.17g", abs_sum);
    out << " abs_sum=" << buf << "\n";

    const std::size_t pi = s.height / 2, pj = s.width / 2;
    bool ok = true;
    for (const std::size_t c : {std::size_t{0}, s.channels / 2}) {
        const auto d = perturbation_response(f, x, 0, c, pi, pj);
        std::size_t bad = 0, touched_channels = 0;
        for (std::size_t oc = 0; oc < s.channels; ++oc) {
            std::size_t nz = 0;
            for (std::size_t i = 0; i < s.height; ++i)
                for (std::size_t j = 0; j < s.width; ++j) {
                    const bool hit = d(0, oc, i, j) != 0.0;
                    nz += hit;
                    bool expect = true;
                    if (!metaformer) expect = oc == c && (c < s.channels / 2 ? j == pj : i == pi);
                    bad += hit != expect;
                }
            touched_channels += nz > 0;
        }
        ok = ok && bad == 0;
        out << "perturb (0," << c << "," << pi << "," << pj << "): " << touched_channels << " output channels touched, "
            << (metaformer ? "expected full-plane support" : c < s.channels / 2 ? "expected column" : "expected row")
            << ", " << bad << " positions off-contract\n";
        print_map(d, c, out);
    }
    out << "receptive field: " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------- gen-fixture

struct FixtureOptions {
    std::string shape;
    std::uint64_t seed = 0;
    std::string precision = "f64";
    std::string out;
};

int cmd_gen_fixture(const FixtureOptions& opt, std::ostream& out) {
    const Shape s = parse_shape(opt.shape);
    const Precision p = parse_precision(opt.precision);
    const AnyTensor t = p == Precision::F64 ? AnyTensor(random_tensor<double>(s, opt.seed))
                                            : AnyTensor(random_tensor<float>(s, opt.seed));
    write_parc1(opt.out, t);
    out << "wrote " << opt.out << " (" << to_string(p) << ", shape " << s.str() << ", seed " << opt.seed << ")\n";
    return kExitOk;
}

}  // namespace

std::vector<std::string> parse_name_list(const std::string& text) {
    std::vector<std::string> names;
    if (trim(text).empty()) return names;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
        names.push_back(item);
    }
    return names;
}

std::vector<std::uint64_t> parse_uint_list(const std::string& text) {
    std::vector<std::uint64_t> values;
    for (const auto& item : parse_name_list(text)) {
        if (item.find_first_not_of("0123456789") != std::string::npos || item.size() > 18)
            throw std::invalid_argument("expected a non-negative integer, got '" + item + "'");
        values.push_back(std::stoull(item));
    }
    return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"ParC / Fast-ParC operator toolkit", "parc"};
    app.require_subcommand(1);
    app.fallthrough();
    std::size_t threads = 1;
    bool verbose = false;
    app.add_option("--threads", threads, "Worker threads for library kernels (capped by PARC_THREADS)")
        ->check(CLI::PositiveNumber);
    app.add_flag("-v,--verbose", verbose, "Progress output on stderr");

    EquivOptions eq;
    auto* equiv = app.add_subcommand("equiv", "Compare spatial, concat and FFT ParC on random inputs");
    equiv->add_option("--resolutions", eq.resolutions, "Comma-separated H = W values")->capture_default_str();
    equiv->add_option("--channels", eq.channels, "Channel count")->capture_default_str();
    equiv->add_option("--batch", eq.batch, "Batch size")->capture_default_str();
    equiv->add_option("--precision", eq.precision, "f32 or f64")->capture_default_str();
    equiv->add_option("--seed", eq.seed, "Generator seed")->capture_default_str();
    equiv->add_option("--meta-len", eq.meta_length, "Meta kernel length K")->capture_default_str();
    equiv->add_option("--input", eq.input, "PARC1 fixture to use as the input instead of random data");

    FlopsOptions fl;
    auto* flops = app.add_subcommand("flops", "Multiplication counts as CSV");
    flops->add_option("--ops", fl.ops, "Comma-separated ops (dwK, convK, parc, fastparc, attention)")
        ->capture_default_str();
    flops->add_option("--channels", fl.channels, "Channel count")->capture_default_str();
    flops->add_option("--resolutions", fl.resolutions, "Comma-separated H = W values (may be empty)")
        ->capture_default_str();
    flops->add_option("--out", fl.out, "Output CSV path (default stdout)");

    BenchOptions bo;
    auto* bench = app.add_subcommand("bench", "Single-operator latency benchmark");
    bench->add_option("--channels", bo.cfg.channels, "Channel count")->capture_default_str();
    bench->add_option("--batch", bo.cfg.batch, "Batch size")->capture_default_str();
    bench->add_option("--resolutions", bo.resolutions, "Comma-separated H = W values")->capture_default_str();
    bench->add_option("--ops", bo.ops, "Comma-separated ops (dwK, parc, fastparc)")->capture_default_str();
    bench->add_option("--warmup", bo.cfg.warmup, "Untimed warmup iterations")->capture_default_str();
    bench->add_option("--iters", bo.cfg.iters, "Timed iterations")->capture_default_str();
    bench->add_option("--precision", bo.precision, "f32 or f64")->capture_default_str();
    bench->add_option("--seed", bo.cfg.seed, "Generator seed")->capture_default_str();
    bench->add_option("--meta-len", bo.cfg.meta_length, "Meta kernel length K")->capture_default_str();
    bench->add_option("--trim", bo.cfg.trim_fraction, "Fraction trimmed from each tail")
        ->check(CLI::Range(0.0, 0.49))
        ->capture_default_str();
    bench->add_option("--out", bo.out, "Output CSV path (default stdout)");
    bench->add_option("--markdown", bo.markdown, "Also write a markdown table to this path");
    bench->add_flag("--parallel", bo.cfg.parallel, "Use all available worker threads");

    DemoOptions dm;
    auto* demo = app.add_subcommand("demo-block", "Run a block and report its receptive field");
    demo->add_option("--block", dm.block, "metaformer or convnet")
        ->check(CLI::IsMember({"metaformer", "convnet"}))
        ->capture_default_str();
    demo->add_option("--shape", dm.shape, "B,C,H,W")->capture_default_str();
    demo->add_option("--seed", dm.seed, "Generator seed")->capture_default_str();
    demo->add_option("--meta-len", dm.meta_length, "Meta kernel length K")->capture_default_str();

    FixtureOptions fx;
    auto* gen = app.add_subcommand("gen-fixture", "Write a seeded random tensor in PARC1 format");
    gen->add_option("--shape", fx.shape, "B,C,H,W")->required();
    gen->add_option("--seed", fx.seed, "Generator seed")->capture_default_str();
    gen->add_option("--precision", fx.precision, "f32 or f64")->capture_default_str();
    gen->add_option("--out", fx.out, "Output path")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    set_thread_count(threads);
    try {
        if (*equiv) return cmd_equiv(eq, out);
        if (*flops) return cmd_flops(fl, out);
        if (*bench) return cmd_bench(bo, verbose, out, err);
        if (*demo) return cmd_demo_block(dm, out);
        if (*gen) return cmd_gen_fixture(fx, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace parc::cli
