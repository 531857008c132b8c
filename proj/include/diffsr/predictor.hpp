#pragma once

#include <memory>
#include <span>
#include <vector>

#include "diffsr/fft.hpp"

namespace diffsr {

/// Contract for the noise predictor eps_hat(z; delta). Implementations must
/// be pure given their parameters and are shared across sampler workers.
class NoisePredictor {
public:
    virtual ~NoisePredictor() = default;

    /// Epsilon estimate, same length as z.
    virtual std::vector<double> predict(std::span<const double> z, double delta) const = 0;

    /// Gradient of <predict(z, delta), cotangent> with respect to z.
    virtual std::vector<double> vjp(std::span<const double> z, double delta,
                                    std::span<const double> cotangent) const = 0;
};

/// Stationary Gaussian prior, diagonal in the orthonormal rfft basis.
/// psd[k] is the total (complex) variance of bin k; frame_length/2 + 1 bins.
struct GaussianPriorSpec {
    std::vector<double> psd;
    int frame_length = 0;

    void validate() const;
    int bin_count() const { return frame_length / 2 + 1; }

    /// Linear interpolation of the PSD onto another frame length (same
    /// underlying spectral density, new resolution).
    GaussianPriorSpec resampled(int new_frame_length) const;
};

/// Closed-form MMSE noise predictor for a stationary Gaussian prior:
/// per bin, E[X|Z] = a v Z / (a^2 v + s^2) and eps_hat = (Z - a E[X|Z])/s
/// with a^2 = phi(delta), s^2 = phi(-delta). Linear in z and self-adjoint,
/// so the vjp applies the same per-bin scaling to the cotangent.
class GaussianMmsePredictor : public NoisePredictor {
public:
    explicit GaussianMmsePredictor(GaussianPriorSpec prior);

    std::vector<double> predict(std::span<const double> z, double delta) const override;
    std::vector<double> vjp(std::span<const double> z, double delta,
                            std::span<const double> cotangent) const override;

    /// Denoised estimate (z - s*eps_hat)/a, equal per bin to E[X|Z].
    std::vector<double> denoise(std::span<const double> z, double delta) const;

    const GaussianPriorSpec& prior() const { return prior_; }

private:
    std::vector<double> scale_bins(std::span<const double> v, double delta) const;
    GaussianPriorSpec prior_;
    RfftPlan plan_;
};

}  // namespace diffsr
