#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "diffsr/predictor.hpp"
#include "diffsr/resample.hpp"
#include "diffsr/rng.hpp"
#include "diffsr/schedule.hpp"
#include "diffsr/signal.hpp"

namespace diffsr {

struct SamplerConfig {
    int steps = 50;
    double eta = 0.0;  // MCG step size; 0 disables the gradient correction
    FilterSpec filter;
    std::uint64_t seed = 0;

    bool mcg_enabled() const { return eta > 0.0; }
    void validate() const;
};

/// Per-step diagnostics: residual ||y_hat - F(x_hat)|| before inpainting and
/// the MCG gradient norm (0 when disabled). T-1 records.
struct SamplerTrace {
    struct Step {
        int t = 0;
        double residual = 0.0;
        double grad_norm = 0.0;
    };
    std::vector<Step> steps;
};

/// Ancestral sampling of the reverse chain from z_T ~ N(0, I).
std::vector<double> sample_unconditional(const NoisePredictor& predictor,
                                         const NoiseSchedule& schedule, std::size_t length,
                                         Rng& rng);

/// Conditional sampling: frequency-band inpainting plus optional MCG, with
/// the lowpass applied in the time domain. Output rate = filter source rate,
/// length = len(upsample(y)).
Waveform sample_conditional(const NoisePredictor& predictor, const NoiseSchedule& schedule,
                            const Waveform& y, const SamplerConfig& cfg, Rng& rng,
                            SamplerTrace* trace = nullptr);

/// d/dz_t ||y_hat - F(x_hat(z_t))||^2 through the predictor vjp; the filter
/// adjoint is approximated by the filter itself (zero-phase design).
std::vector<double> mcg_gradient(const NoisePredictor& predictor, const NoiseSchedule& schedule,
                                 int t, std::span<const double> z_t,
                                 std::span<const double> y_hat, const LowpassOperator& filter);

}  // namespace diffsr
