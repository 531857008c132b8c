#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diffsr/signal.hpp"

namespace diffsr {

enum class FilterKind { sinc_kaiser, stft_mask };
enum class EdgeMode { reflect, zero, circular };

/// Parameters of the downsample/upsample pair and of the composite lowpass
/// built from them. cutoff_hz is always min(l, h)/2.
struct FilterSpec {
    FilterKind kind = FilterKind::sinc_kaiser;
    int source_rate = 0;  // l
    int target_rate = 0;  // h
    double cutoff_hz = 0.0;

    // sinc_kaiser design
    int zero_crossings = 128;
    double rolloff = 0.962;
    double kaiser_beta = 14.769656;  // ~100 dB Kaiser parameter

    // stft_mask design
    StftConfig stft{1024, 256, WindowKind::hann};

    EdgeMode edge_mode = EdgeMode::reflect;

    static FilterSpec sinc(int source_rate, int target_rate);
    static FilterSpec mask(int source_rate, int target_rate, StftConfig stft_cfg = {1024, 256, WindowKind::hann});

    void validate() const;
    std::string kind_name() const;
};

/// Windowed-sinc rational-ratio resampler; taps precomputed per polyphase
/// branch, evaluated symmetrically around each output position (zero phase).
class SincResampler {
public:
    SincResampler(int src_rate, int dst_rate, const FilterSpec& spec);

    std::vector<double> apply(std::span<const double> x, EdgeMode edge) const;
    std::size_t output_length(std::size_t n) const;
    int half_width() const { return half_width_; }

private:
    int src_, dst_;
    long long num_, den_;  // position of output m is m*num_/den_ input samples
    int half_width_;
    struct Branch {
        int lo;
        std::vector<double> taps;
    };
    std::vector<Branch> branches_;
};

/// Precomputed lowpass F_{h/2} = upsample(downsample(.)) plus the individual
/// legs. Immutable after construction; apply methods are pure.
class LowpassOperator {
public:
    explicit LowpassOperator(const FilterSpec& spec);

    const FilterSpec& spec() const { return spec_; }

    Waveform downsample(const Waveform& x) const;
    Waveform upsample(const Waveform& y) const;
    /// upsample(downsample(x)): same rate and length as x.
    Waveform compose(const Waveform& x) const;
    /// compose() on raw samples at the source rate.
    std::vector<double> compose(std::span<const double> x) const;

    /// STFT-domain masking at the source rate (stft_mask kind only).
    std::vector<double> apply_mask(std::span<const double> x) const;
    /// Analysis frames of apply_mask after masking; bins >= cutoff are zero.
    std::vector<Spectrum> masked_frames(std::span<const double> x) const;

    int first_masked_bin() const;  // in the stft frame, stft_mask kind

private:
    FilterSpec spec_;
    std::optional<SincResampler> down_, up_;
    std::optional<RfftPlan> mask_plan_;
    std::vector<double> mask_window_;
};

Waveform downsample(const Waveform& x, const FilterSpec& spec);
Waveform upsample(const Waveform& y, int target_rate, const FilterSpec& spec);
Waveform lowpass_compose(const Waveform& x, const FilterSpec& spec);

/// |c_w| of the composite filter sampled uniformly on [0, l/2].
std::vector<double> frequency_response(const FilterSpec& spec, int n_points);

/// Natural cubic spline interpolation to a higher rate (baseline, no
/// anti-imaging filter).
Waveform spline_upsample(const Waveform& y, int target_rate);

}  // namespace diffsr
