#include "diffsr/signal.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace diffsr {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

// Reflect index fold (no edge repeat), valid for any i when n >= 2.
std::size_t reflect_index(long long i, std::size_t n) {
    if (n == 1) return 0;
    const long long period = 2 * (static_cast<long long>(n) - 1);
    long long j = std::llabs(i) % period;
    if (j >= static_cast<long long>(n)) j = period - j;
    return static_cast<std::size_t>(j);
}
}  // namespace

void Waveform::validate() const {
    if (sample_rate <= 0) throw std::invalid_argument("Waveform: sample_rate must be positive");
    if (samples.empty()) throw std::invalid_argument("Waveform: empty signal");
    for (double v : samples)
        if (!std::isfinite(v)) throw std::invalid_argument("Waveform: non-finite sample");
}

double bessel_i0(double x) {
    // power series; converges quickly for the beta range used here
    const double y = x * x / 4.0;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 64; ++k) {
        term *= y / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

std::vector<double> make_window(WindowKind kind, int length, double kaiser_beta) {
    if (length <= 0) throw std::invalid_argument("make_window: length must be positive");
    std::vector<double> w(length, 1.0);
    switch (kind) {
        case WindowKind::rectangular:
            break;
        case WindowKind::hann:
            // periodic hann, COLA-friendly
            for (int i = 0; i < length; ++i)
                w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * i / length));
            break;
        case WindowKind::kaiser: {
            const double denom = bessel_i0(kaiser_beta);
            const double half = (length - 1) / 2.0;
            for (int i = 0; i < length; ++i) {
                const double r = (i - half) / half;
                w[i] = bessel_i0(kaiser_beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / denom;
            }
            break;
        }
    }
    return w;
}

std::vector<Spectrum> stft(const Waveform& w, const StftConfig& cfg) {
    if (cfg.hop <= 0) throw std::invalid_argument("stft: hop must be positive");
    if (cfg.hop > cfg.frame_length) throw std::invalid_argument("stft: hop > frame_length");
    if (w.samples.size() < static_cast<std::size_t>(cfg.frame_length))
        throw std::invalid_argument("stft: signal shorter than one frame");
    const int frame = cfg.frame_length;
    const std::size_t n = w.samples.size();
    const std::size_t padded = n + frame;  // frame/2 on both ends
    const std::size_t n_frames = (padded - frame) / cfg.hop + 1;

    const auto win = make_window(cfg.window, frame, cfg.kaiser_beta);
    RfftPlan plan(frame);
    std::vector<Spectrum> out;
    out.reserve(n_frames);
    std::vector<double> buf(frame);
    for (std::size_t m = 0; m < n_frames; ++m) {
        const long long start = static_cast<long long>(m) * cfg.hop - frame / 2;
        for (int i = 0; i < frame; ++i)
            buf[i] = w.samples[reflect_index(start + i, n)] * win[i];
        out.push_back(plan.forward(buf));
    }
    return out;
}

Waveform istft(const std::vector<Spectrum>& frames, const StftConfig& cfg, std::size_t out_length,
               int sample_rate) {
    if (out_length == 0) return Waveform({}, sample_rate);  // degenerate trim, not an error
    if (frames.empty()) throw std::invalid_argument("istft: no frames");
    const int frame = cfg.frame_length;
    for (const auto& f : frames)
        if (f.frame_length != frame) throw std::invalid_argument("istft: inconsistent frame sizes");
    const auto win = make_window(cfg.window, frame, cfg.kaiser_beta);
    RfftPlan plan(frame);

    const std::size_t padded = (frames.size() - 1) * cfg.hop + frame;
    std::vector<double> acc(padded, 0.0), wsum(padded, 0.0);
    for (std::size_t m = 0; m < frames.size(); ++m) {
        const auto rec = plan.inverse(frames[m]);
        const std::size_t start = m * cfg.hop;
        for (int i = 0; i < frame; ++i) {
            acc[start + i] += rec[i] * win[i];
            wsum[start + i] += win[i] * win[i];
        }
    }
    Waveform out;
    out.sample_rate = sample_rate;
    out.samples.assign(out_length, 0.0);
    const std::size_t off = static_cast<std::size_t>(frame / 2);
    for (std::size_t i = 0; i < out_length; ++i) {
        const std::size_t j = i + off;
        if (j < padded && wsum[j] > 1e-12) out.samples[i] = acc[j] / wsum[j];
    }
    return out;
}

std::string to_string(WindowKind kind) {
    switch (kind) {
        case WindowKind::hann: return "hann";
        case WindowKind::rectangular: return "rectangular";
        case WindowKind::kaiser: return "kaiser";
    }
    return "hann";
}

WindowKind window_from_string(const std::string& name) {
    if (name == "hann") return WindowKind::hann;
    if (name == "rectangular" || name == "rect") return WindowKind::rectangular;
    if (name == "kaiser") return WindowKind::kaiser;
    throw std::invalid_argument("unknown window: " + name);
}

}  // namespace diffsr
