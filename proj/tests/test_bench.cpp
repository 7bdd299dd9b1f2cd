#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parc/bench.hpp"

using namespace parc;

namespace {

BenchTable synthetic(const std::vector<std::pair<std::uint64_t, std::pair<double, double>>>& rows) {
    BenchTable t;
    for (const auto& [res, ms] : rows) {
        BenchRecord a;
        a.op = "fastparc";
        a.resolution = res;
        a.latency_ms_mean = ms.first;
        BenchRecord b = a;
        b.op = "parc";
        b.latency_ms_mean = ms.second;
        t.records.push_back(a);
        t.records.push_back(b);
    }
    return t;
}

}  // namespace

TEST_CASE("summarize_latency") {
    const auto s = summarize_latency({1, 2, 3, 4});
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.stddev == doctest::Approx(std::sqrt(1.25)));
    const auto t = summarize_latency({100, 2, 2, 2, 2, 2, 2, 2, 2, 0}, 0.1);
    CHECK(t.mean == doctest::Approx(2.0));
    CHECK(t.stddev == doctest::Approx(0.0));
    CHECK(summarize_latency({}).mean == 0.0);
}

TEST_CASE("crossover") {
    CHECK(crossover(synthetic({{28, {2, 1}}, {56, {3, 4}}, {112, {5, 9}}, {224, {8, 30}}}), "fastparc", "parc") == 56u);
    CHECK_FALSE(crossover(synthetic({{28, {2, 1}}, {56, {5, 4}}}), "fastparc", "parc").has_value());
    // Ascending scan regardless of record order.
    CHECK(crossover(synthetic({{224, {1, 2}}, {28, {1, 2}}}), "fastparc", "parc") == 28u);
    CHECK_THROWS_AS(crossover(synthetic({{28, {1, 2}}}), "fastparc", "parc"), std::invalid_argument);
    CHECK_THROWS_AS(crossover(synthetic({{28, {1, 2}}, {56, {1, 2}}}), "fastparc", "dw3"), std::invalid_argument);
}

TEST_CASE("config validation") {
    BenchConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.iters = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = BenchConfig{};
    cfg.warmup = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = BenchConfig{};
    cfg.ops = {"dw3", "winograd"};
    try {
        cfg.validate();
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("fastparc") != std::string::npos);
    }
    cfg = BenchConfig{};
    cfg.channels = 95;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("a small run has the expected structure") {
    BenchConfig cfg;
    cfg.channels = 8;
    cfg.resolutions = {7, 14};
    cfg.warmup = 1;
    cfg.iters = 3;
    std::size_t seen = 0;
    const auto table = run_bench(cfg, [&](const BenchRecord&) { ++seen; });
    REQUIRE(table.records.size() == 8);
    CHECK(seen == 8);
    for (const auto& r : table.records) {
        const auto report = flops_report(parse_op(r.op), r.batch, r.channels, r.resolution, r.resolution);
        CHECK(r.mul_count == report.multiplications);
        CHECK(r.latency_ms_mean >= 0.0);
        CHECK(r.latency_ms_std >= 0.0);
        CHECK(r.iters == 3);
        CHECK(r.precision == Precision::F32);
    }
    CHECK(table.find("parc", 14) != nullptr);
    CHECK(table.find("parc", 15) == nullptr);

    cfg.precision = Precision::F64;
    const auto again = run_bench(cfg);
    REQUIRE(again.records.size() == table.records.size());
    for (std::size_t i = 0; i < again.records.size(); ++i) {
        CHECK(again.records[i].op == table.records[i].op);
        CHECK(again.records[i].resolution == table.records[i].resolution);
        CHECK(again.records[i].mul_count == table.records[i].mul_count);
    }

    std::ostringstream csv;
    table.write_csv(csv);
    const std::string text = csv.str();
    CHECK(text.rfind(std::string(kBenchCsvHeader) + "\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 9);

    std::ostringstream md;
    table.write_markdown(md);
    CHECK(md.str().find("| parc") != std::string::npos);
}

TEST_CASE("default configuration covers 16 pairs") {
    const BenchConfig cfg;
    CHECK(cfg.ops.size() * cfg.resolutions.size() == 16);
    CHECK(flops_report(parse_op("parc"), 1, cfg.channels, 56, 56).multiplications == 16'859'136u);
}

TEST_CASE("unknown op at run time") {
    BenchConfig cfg;
    cfg.ops = {"bogus"};
    CHECK_THROWS_AS(run_bench(cfg), std::invalid_argument);
}

TEST_CASE("csv quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK_FALSE(host_descriptor().empty());
}
