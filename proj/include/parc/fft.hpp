#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace parc {

template <typename T>
using Complex = std::complex<T>;

/// DFT bins of a length-N sequence. `half` spectra hold floor(N/2)+1 bins
/// of a real input; full spectra hold N.
template <typename T>
struct Spectrum {
    std::size_t source_length = 0;
    bool half = false;
    std::vector<Complex<T>> bins;
};

enum class FftStrategy { Radix2, MixedRadix, Bluestein };

const char* to_string(FftStrategy s);

/// Largest prime factor handled by direct butterflies; lengths with a larger
/// prime factor go through Bluestein.
inline constexpr std::size_t kMaxDirectRadix = 13;

/// Scratch buffers for one transform. A plan is immutable and may be shared
/// across threads; workspaces may not.
template <typename T>
struct FftWorkspace {
    std::vector<Complex<T>> a, b, c;
};

/// Precomputed plan for complex DFTs of one length N >= 1.
///
/// Power-of-two and smooth lengths run a mixed-radix Stockham autosort
/// (radix 4, 2, 3, 5 and generic small primes). Lengths with a prime factor
/// above kMaxDirectRadix use Bluestein's chirp-z over a power-of-two plan.
template <typename T>
class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const { return n_; }
    FftStrategy strategy() const { return strategy_; }
    /// Radices in stage order (empty for Bluestein).
    const std::vector<std::size_t>& radices() const { return radices_; }

    FftWorkspace<T> make_workspace() const;

    /// X_k = sum_n x_n exp(-2 pi i nk/N). `in` and `out` may alias.
    void forward(std::span<const Complex<T>> in, std::span<Complex<T>> out, FftWorkspace<T>& ws) const;
    /// x_n = (1/N) sum_k X_k exp(+2 pi i nk/N). `in` and `out` may alias.
    void inverse(std::span<const Complex<T>> in, std::span<Complex<T>> out, FftWorkspace<T>& ws) const;

    /// Half spectra (floor(N/2)+1 bins each) of two real sequences from one
    /// complex transform.
    void forward_real_pair(std::span<const T> a, std::span<const T> b, std::span<Complex<T>> a_half,
                           std::span<Complex<T>> b_half, FftWorkspace<T>& ws) const;
    /// Inverse of forward_real_pair. Inputs are treated as Hermitian half
    /// spectra; imaginary parts of bin 0 (and N/2 for even N) are ignored.
    void inverse_real_pair(std::span<const Complex<T>> a_half, std::span<const Complex<T>> b_half, std::span<T> a,
                           std::span<T> b, FftWorkspace<T>& ws) const;

private:
    struct Stage {
        std::size_t radix;
        std::size_t span;                  // product of earlier radices
        std::vector<Complex<T>> twiddles;  // span * (radix - 1)
    };

    void stockham(std::span<const Complex<T>> in, std::span<Complex<T>> out, FftWorkspace<T>& ws) const;
    void bluestein(std::span<const Complex<T>> in, std::span<Complex<T>> out, FftWorkspace<T>& ws) const;
    void check_length(std::size_t got) const;

    std::size_t n_;
    FftStrategy strategy_;
    std::vector<std::size_t> radices_;
    std::vector<Stage> stages_;
    // cos(2 pi m/p) and sin(2 pi m/p) per odd radix p > 4, indexed by p.
    std::vector<std::vector<T>> odd_cos_, odd_sin_;

    // Bluestein state.
    std::unique_ptr<const FftPlan> inner_;
    std::vector<Complex<T>> chirp_;
    std::vector<Complex<T>> chirp_filter_;
};

/// O(N^2) DFT straight from the definition. Test oracle only.
template <typename T>
Spectrum<T> dft_naive(std::span<const Complex<T>> x);
template <typename T>
Spectrum<T> dft_naive(std::span<const T> x);

/// Full-spectrum forward transform; throws std::invalid_argument if the
/// plan length differs from x.size().
template <typename T>
Spectrum<T> fft(std::span<const Complex<T>> x, const FftPlan<T>& plan);
/// Inverse of a full spectrum, normalized by 1/N.
template <typename T>
std::vector<Complex<T>> ifft(const Spectrum<T>& s, const FftPlan<T>& plan);

/// Half spectrum of a real sequence.
template <typename T>
Spectrum<T> rfft(std::span<const T> x, const FftPlan<T>& plan);
/// Real sequence from a half spectrum, normalized by 1/N.
template <typename T>
std::vector<T> irfft(const Spectrum<T>& s, const FftPlan<T>& plan);

}  // namespace parc
