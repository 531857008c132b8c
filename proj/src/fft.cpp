#include "diffsr/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace diffsr {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

RfftPlan::RfftPlan(int frame_length) : n_(frame_length) {
    if (n_ < 2 || !is_power_of_two(n_))
        throw std::invalid_argument("RfftPlan: frame length must be a power of two >= 2");
    bitrev_.resize(n_);
    int log2n = 0;
    while ((1 << log2n) < n_) ++log2n;
    for (int i = 0; i < n_; ++i) {
        int r = 0;
        for (int b = 0; b < log2n; ++b)
            if (i & (1 << b)) r |= 1 << (log2n - 1 - b);
        bitrev_[i] = r;
    }
    twiddle_.resize(n_ / 2);
    twiddle_inv_.resize(n_ / 2);
    for (int k = 0; k < n_ / 2; ++k) {
        const double ang = -2.0 * kPi * k / n_;
        twiddle_[k] = {std::cos(ang), std::sin(ang)};
        twiddle_inv_[k] = {std::cos(ang), -std::sin(ang)};
    }
}

void RfftPlan::transform(std::vector<std::complex<double>>& data, bool inverse) const {
    if (static_cast<int>(data.size()) != n_)
        throw std::invalid_argument("RfftPlan::transform: size mismatch");
    for (int i = 0; i < n_; ++i) {
        const int j = bitrev_[i];
        if (i < j) std::swap(data[i], data[j]);
    }
    const auto& tw = inverse ? twiddle_inv_ : twiddle_;
    for (int len = 2; len <= n_; len <<= 1) {
        const int half = len >> 1;
        const int step = n_ / len;
        for (int start = 0; start < n_; start += len) {
            for (int k = 0; k < half; ++k) {
                const std::complex<double> w = tw[k * step];
                const std::complex<double> u = data[start + k];
                const std::complex<double> v = data[start + k + half] * w;
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
    }
}

Spectrum RfftPlan::forward(std::span<const double> frame) const {
    if (static_cast<int>(frame.size()) != n_)
        throw std::invalid_argument("rfft: frame length does not match plan");
    std::vector<std::complex<double>> buf(n_);
    for (int i = 0; i < n_; ++i) buf[i] = frame[i];
    transform(buf, false);
    Spectrum out;
    out.frame_length = n_;
    out.bins.assign(buf.begin(), buf.begin() + (n_ / 2 + 1));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (auto& b : out.bins) b *= scale;
    return out;
}

std::vector<double> RfftPlan::inverse(const Spectrum& spec) const {
    if (spec.frame_length != n_ || spec.bin_count() != n_ / 2 + 1)
        throw std::invalid_argument("irfft: spectrum does not match plan");
    constexpr double kHermitianTol = 1e-9;
    if (std::abs(spec.bins.front().imag()) > kHermitianTol ||
        std::abs(spec.bins.back().imag()) > kHermitianTol)
        throw std::invalid_argument("irfft: DC and Nyquist bins must be real");
    std::vector<std::complex<double>> buf(n_);
    for (int k = 0; k <= n_ / 2; ++k) buf[k] = spec.bins[k];
    buf[0] = {spec.bins[0].real(), 0.0};
    buf[n_ / 2] = {spec.bins[n_ / 2].real(), 0.0};
    for (int k = 1; k < n_ / 2; ++k) buf[n_ - k] = std::conj(spec.bins[k]);
    transform(buf, true);
    std::vector<double> out(n_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (int i = 0; i < n_; ++i) out[i] = buf[i].real() * scale;
    return out;
}

Spectrum rfft(std::span<const double> frame) {
    if (frame.size() < 2 || frame.size() % 2 != 0)
        throw std::invalid_argument("rfft: frame must be even and non-empty");
    RfftPlan plan(static_cast<int>(frame.size()));
    return plan.forward(frame);
}

std::vector<double> irfft(const Spectrum& spec) {
    RfftPlan plan(spec.frame_length);
    return plan.inverse(spec);
}

}  // namespace diffsr
