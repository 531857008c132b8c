#pragma once

#include <span>
#include <string>
#include <vector>

#include "diffsr/fft.hpp"

namespace diffsr {

/// Mono audio signal. Samples are dimensionless amplitudes, nominally in
/// [-1, 1]; the rate is carried with the data so resampling operators can
/// check their contracts.
struct Waveform {
    std::vector<double> samples;
    int sample_rate = 0;

    Waveform() = default;
    Waveform(std::vector<double> s, int rate) : samples(std::move(s)), sample_rate(rate) {}

    std::size_t size() const { return samples.size(); }
    double duration_seconds() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }

    /// Throws if the rate is non-positive, the signal is empty, or any sample
    /// is non-finite.
    void validate() const;
};

enum class WindowKind { hann, rectangular, kaiser };

struct StftConfig {
    int frame_length = 1024;
    int hop = 256;
    WindowKind window = WindowKind::hann;
    double kaiser_beta = 8.0;  // only used for WindowKind::kaiser
};

std::vector<double> make_window(WindowKind kind, int length, double kaiser_beta = 8.0);

/// Modified Bessel I0, used by Kaiser windows and the sinc resampler.
double bessel_i0(double x);

/// Center-aligned STFT: the signal is reflect-padded by frame_length/2 at
/// both ends; frames start every `hop` samples. frame count =
/// floor((padded - frame)/hop) + 1.
std::vector<Spectrum> stft(const Waveform& w, const StftConfig& cfg);

/// Weighted overlap-add inverse with COLA normalization (synthesis window =
/// analysis window, normalized by the accumulated squared window). Output is
/// trimmed/padded to out_length.
Waveform istft(const std::vector<Spectrum>& frames, const StftConfig& cfg, std::size_t out_length,
               int sample_rate);

std::string to_string(WindowKind kind);
WindowKind window_from_string(const std::string& name);

}  // namespace diffsr
