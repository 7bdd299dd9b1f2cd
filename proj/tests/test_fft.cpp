#include <doctest.h>

#include "properties.hpp"

using namespace parc;
using cd = std::complex<double>;

namespace {

void check_bins(const std::vector<cd>& got, const std::vector<cd>& want, double tol) {
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
        CHECK(got[k].real() == doctest::Approx(want[k].real()).epsilon(tol).scale(1.0));
        CHECK(got[k].imag() == doctest::Approx(want[k].imag()).epsilon(tol).scale(1.0));
    }
}

}  // namespace

TEST_CASE("dft_naive examples") {
    check_bins(dft_naive<double>(std::vector<double>{1, 0, 0, 0}).bins, {1, 1, 1, 1}, 1e-15);
    check_bins(dft_naive<double>(std::vector<double>{1, 1, 1, 1}).bins, {4, 0, 0, 0}, 1e-15);
    check_bins(dft_naive<double>(std::vector<double>{1, 2, 3, 4}).bins, {{10, 0}, {-2, 2}, {-2, 0}, {-2, -2}}, 1e-15);
}

TEST_CASE("fft of [1,2,3,4] matches the hand-evaluated spectrum") {
    const FftPlan<double> plan(4);
    const std::vector<cd> x{1, 2, 3, 4};
    check_bins(fft<double>(x, plan).bins, {{10, 0}, {-2, 2}, {-2, 0}, {-2, -2}}, 1e-15);
}

TEST_CASE("plan strategies") {
    CHECK(FftPlan<double>(64).strategy() == FftStrategy::Radix2);
    CHECK(FftPlan<double>(56).strategy() == FftStrategy::MixedRadix);
    CHECK(FftPlan<double>(224).strategy() == FftStrategy::MixedRadix);
    CHECK(FftPlan<double>(7).strategy() == FftStrategy::MixedRadix);
    CHECK(FftPlan<double>(17).strategy() == FftStrategy::Bluestein);
    CHECK(FftPlan<double>(2 * 101).strategy() == FftStrategy::Bluestein);
    CHECK(FftPlan<double>(1).size() == 1);
    CHECK_THROWS_AS(FftPlan<double>(0), std::invalid_argument);
}

TEST_CASE("fft matches dft_naive for every length 1..128") {
    Xoshiro256ss rng(2024);
    for (std::size_t n = 1; n <= 128; ++n) {
        CAPTURE(n);
        REQUIRE(props::fft_vs_naive(n, rng) <= 1e-10);
    }
    for (const std::size_t n : {211, 257, 360, 1000}) {
        CAPTURE(n);
        REQUIRE(props::fft_vs_naive(n, rng) <= 1e-10);
    }
}

TEST_CASE("ifft(fft(x)) round-trips") {
    Xoshiro256ss rng(5);
    for (const std::size_t n : {56, 97, 4096, 4095}) {
        const FftPlan<double> plan(n);
        std::vector<cd> x(n);
        for (auto& v : x) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const auto back = ifft(fft<double>(x, plan), plan);
        CAPTURE(n);
        CHECK(oracle::relative_l_inf(back, x) <= 1e-10);
    }
}

TEST_CASE("real transforms") {
    Xoshiro256ss rng(6);
    SUBCASE("odd length 7 has 4 half-spectrum bins") {
        const FftPlan<double> plan(7);
        const auto x = props::random_real(7, rng);
        const auto s = rfft<double>(x, plan);
        CHECK(s.bins.size() == 4);
        CHECK(s.half);
    }
    for (const std::size_t n : {1, 2, 3, 7, 8, 14, 17, 28, 56, 112, 224}) {
        CAPTURE(n);
        const FftPlan<double> plan(n);
        const auto x = props::random_real(n, rng);
        const auto half = rfft<double>(x, plan);
        const auto full = dft_naive<double>(std::span<const double>(x));
        REQUIRE(half.bins.size() == n / 2 + 1);
        for (std::size_t k = 0; k < half.bins.size(); ++k) CHECK(std::abs(half.bins[k] - full.bins[k]) <= 1e-12 * n);
        // Bin 0 and (even N) bin N/2 of a real input are real.
        CHECK(std::abs(half.bins[0].imag()) <= 1e-12 * std::abs(half.bins[0]) + 1e-13);
        if (n % 2 == 0) CHECK(std::abs(half.bins[n / 2].imag()) <= 1e-12 * n);
        const auto back = irfft(half, plan);
        for (std::size_t t = 0; t < n; ++t) CHECK(back[t] == doctest::Approx(x[t]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("real pair transforms separate two lines") {
    Xoshiro256ss rng(8);
    for (const std::size_t n : {5, 6, 19, 56}) {
        const FftPlan<double> plan(n);
        auto ws = plan.make_workspace();
        const auto a = props::random_real(n, rng), b = props::random_real(n, rng);
        std::vector<cd> ha(n / 2 + 1), hb(n / 2 + 1);
        plan.forward_real_pair(a, b, ha, hb, ws);
        const auto fa = dft_naive<double>(std::span<const double>(a)), fb = dft_naive<double>(std::span<const double>(b));
        for (std::size_t k = 0; k <= n / 2; ++k) {
            CHECK(std::abs(ha[k] - fa.bins[k]) <= 1e-12 * n);
            CHECK(std::abs(hb[k] - fb.bins[k]) <= 1e-12 * n);
        }
        std::vector<double> ra(n), rb(n);
        plan.inverse_real_pair(ha, hb, ra, rb, ws);
        for (std::size_t t = 0; t < n; ++t) {
            CHECK(ra[t] == doctest::Approx(a[t]).epsilon(1e-12).scale(1.0));
            CHECK(rb[t] == doctest::Approx(b[t]).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("length mismatch is an error") {
    const FftPlan<double> plan(8);
    const std::vector<cd> x(7);
    CHECK_THROWS_AS(fft<double>(x, plan), std::invalid_argument);
    const std::vector<double> r(9);
    CHECK_THROWS_AS(rfft<double>(r, plan), std::invalid_argument);
    CHECK_THROWS_AS(irfft(Spectrum<double>{7, true, std::vector<cd>(4)}, plan), std::invalid_argument);
}

TEST_CASE("single precision plans stay near float epsilon") {
    Xoshiro256ss rng(9);
    for (const std::size_t n : {28, 56, 112, 224, 97}) {
        const FftPlan<float> plan(n);
        std::vector<std::complex<float>> x(n);
        for (auto& v : x) v = {static_cast<float>(rng.uniform(-1, 1)), static_cast<float>(rng.uniform(-1, 1))};
        const auto back = ifft(fft<float>(x, plan), plan);
        double worst = 0;
        for (std::size_t t = 0; t < n; ++t) worst = std::max(worst, static_cast<double>(std::abs(back[t] - x[t])));
        CAPTURE(n);
        CHECK(worst <= 1e-5);
    }
}

TEST_CASE("Fourier identities behind the Fast-ParC equivalence") {
    Xoshiro256ss rng(31);
    for (std::size_t n = 1; n <= 16; ++n) {
        const FftPlan<double> plan(n);
        CAPTURE(n);
        for (int draw = 0; draw < 10; ++draw) {
            REQUIRE(props::periodic_sum_invariance(n, rng) <= 1e-10);
            REQUIRE(props::flip_conjugates_spectrum(n, rng, plan) <= 1e-10);
            REQUIRE(props::shift_modulates_spectrum(n, rng, plan) <= 1e-10);
            REQUIRE(props::correlation_rewrite(n, rng) <= 1e-10);
            REQUIRE(props::fourier_form_matches_correlation(n, rng, plan) <= 1e-10);
        }
    }
}
