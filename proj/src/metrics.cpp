#include "diffsr/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace diffsr {

void LsdConfig::validate(int sample_rate) const {
    if (power_floor <= 0) throw std::invalid_argument("LsdConfig: power floor must be positive");
    if (!is_power_of_two(frame_length))
        throw std::invalid_argument("LsdConfig: frame_length must be a power of two");
    if (hop <= 0 || hop > frame_length) throw std::invalid_argument("LsdConfig: bad hop");
    if (band) {
        if (band->first < 0 || band->second > sample_rate / 2.0 || band->first >= band->second)
            throw std::invalid_argument("LsdConfig: band outside [0, rate/2]");
    }
}

double lsd(const Waveform& reference, const Waveform& estimate, const LsdConfig& cfg) {
    reference.validate();
    estimate.validate();
    if (reference.sample_rate != estimate.sample_rate)
        throw std::invalid_argument("lsd: sample rate mismatch");
    if (reference.samples.size() != estimate.samples.size())
        throw std::invalid_argument("lsd: length mismatch");
    cfg.validate(reference.sample_rate);

    StftConfig sc{cfg.frame_length, cfg.hop, cfg.window};
    const auto ref_frames = stft(reference, sc);
    const auto est_frames = stft(estimate, sc);
    const int nb = cfg.frame_length / 2 + 1;

    int k_lo = 0, k_hi = nb;
    if (cfg.band) {
        const double hz_per_bin =
            static_cast<double>(reference.sample_rate) / cfg.frame_length;
        k_lo = static_cast<int>(std::ceil(cfg.band->first / hz_per_bin - 1e-9));
        k_hi = static_cast<int>(std::ceil(cfg.band->second / hz_per_bin - 1e-9));
        k_lo = std::max(0, k_lo);
        k_hi = std::min(nb, k_hi);
        if (k_hi <= k_lo) throw std::invalid_argument("lsd: empty band");
    }

    double acc = 0.0;
    const std::size_t n_frames = std::min(ref_frames.size(), est_frames.size());
    for (std::size_t m = 0; m < n_frames; ++m) {
        double frame_acc = 0.0;
        for (int k = k_lo; k < k_hi; ++k) {
            const double pr = std::norm(ref_frames[m].bins[k]) + cfg.power_floor;
            const double pe = std::norm(est_frames[m].bins[k]) + cfg.power_floor;
            const double d = std::log10(pr) - std::log10(pe);
            frame_acc += d * d;
        }
        acc += std::sqrt(frame_acc / (k_hi - k_lo));
    }
    return acc / static_cast<double>(n_frames);
}

double lsd_lf(const Waveform& reference, const Waveform& estimate, int h, LsdConfig cfg) {
    if (h / 2.0 >= reference.sample_rate / 2.0)
        throw std::invalid_argument("lsd_lf: h/2 must be below the Nyquist frequency");
    cfg.band = std::make_pair(0.0, h / 2.0);
    return lsd(reference, estimate, cfg);
}

double band_energy_ratio(const Waveform& x, double split_hz) {
    x.validate();
    if (split_hz <= 0 || split_hz >= x.sample_rate / 2.0)
        throw std::invalid_argument("band_energy_ratio: split must be inside (0, rate/2)");
    std::size_t n = 2;
    while (n < x.samples.size()) n <<= 1;
    std::vector<double> padded(n, 0.0);
    std::copy(x.samples.begin(), x.samples.end(), padded.begin());
    const auto X = rfft(padded);
    const double hz_per_bin = static_cast<double>(x.sample_rate) / n;
    double hi = 0.0, total = 0.0;
    for (int k = 0; k < X.bin_count(); ++k) {
        const double w = (k == 0 || k == X.bin_count() - 1) ? 1.0 : 2.0;
        const double p = w * std::norm(X.bins[k]);
        total += p;
        if (k * hz_per_bin >= split_hz) hi += p;
    }
    return total > 0.0 ? hi / total : 0.0;
}

}  // namespace diffsr
