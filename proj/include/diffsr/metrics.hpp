#pragma once

#include <optional>

#include "diffsr/signal.hpp"

namespace diffsr {

struct LsdConfig {
    int frame_length = 2048;
    int hop = 512;
    WindowKind window = WindowKind::hann;
    double power_floor = 1e-9;
    std::optional<std::pair<double, double>> band;  // [f_lo, f_hi) in Hz

    void validate(int sample_rate) const;
};

/// Log-spectral distance, log10 of power convention:
/// mean over frames of sqrt(mean over in-band bins of
/// (log10(|S|^2 + eps) - log10(|S_hat|^2 + eps))^2).
double lsd(const Waveform& reference, const Waveform& estimate, const LsdConfig& cfg = {});

/// LSD restricted to bins with center frequency below h/2.
double lsd_lf(const Waveform& reference, const Waveform& estimate, int h,
              LsdConfig cfg = {});

/// Energy above split_hz divided by total energy (whole-signal rfft,
/// zero-padded to a power of two). Silence maps to 0.
double band_energy_ratio(const Waveform& x, double split_hz);

}  // namespace diffsr
