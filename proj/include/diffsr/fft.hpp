#pragma once

#include <complex>
#include <span>
#include <vector>

namespace diffsr {

/// Complex frequency bins of a real frame after the orthonormal transform
/// (forward and inverse both scale by 1/sqrt(N), so Parseval holds with the
/// one-sided sum |X0|^2 + 2*sum|Xk|^2 + |XN/2|^2).
struct Spectrum {
    std::vector<std::complex<double>> bins;  // frame_length/2 + 1 entries
    int frame_length = 0;
    bool orthonormal = true;

    int bin_count() const { return static_cast<int>(bins.size()); }
};

/// Radix-2 real FFT plan with precomputed twiddles. Power-of-two sizes only;
/// anything else is rejected rather than silently padded.
class RfftPlan {
public:
    explicit RfftPlan(int frame_length);

    int frame_length() const { return n_; }
    int bin_count() const { return n_ / 2 + 1; }

    Spectrum forward(std::span<const double> frame) const;
    std::vector<double> inverse(const Spectrum& spec) const;

    /// In-place complex FFT used by both directions (size n, inverse flag).
    void transform(std::vector<std::complex<double>>& data, bool inverse) const;

private:
    int n_;
    std::vector<int> bitrev_;
    std::vector<std::complex<double>> twiddle_;      // forward
    std::vector<std::complex<double>> twiddle_inv_;  // inverse
};

/// One-shot helpers (construct a plan internally).
Spectrum rfft(std::span<const double> frame);
std::vector<double> irfft(const Spectrum& spec);

bool is_power_of_two(int n);

}  // namespace diffsr
