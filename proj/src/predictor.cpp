#include "diffsr/predictor.hpp"

#include <cmath>
#include <stdexcept>

#include "diffsr/schedule.hpp"

namespace diffsr {

void GaussianPriorSpec::validate() const {
    if (frame_length < 2 || frame_length % 2 != 0)
        throw std::invalid_argument("GaussianPriorSpec: frame_length must be even and >= 2");
    if (static_cast<int>(psd.size()) != frame_length / 2 + 1)
        throw std::invalid_argument("GaussianPriorSpec: psd must have frame_length/2 + 1 entries");
    for (double v : psd)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("GaussianPriorSpec: psd entries must be positive finite");
}

GaussianPriorSpec GaussianPriorSpec::resampled(int new_frame_length) const {
    validate();
    GaussianPriorSpec out;
    out.frame_length = new_frame_length;
    const int nb = new_frame_length / 2 + 1;
    out.psd.resize(nb);
    const int ob = bin_count();
    for (int k = 0; k < nb; ++k) {
        const double pos = static_cast<double>(k) * (ob - 1) / (nb - 1);
        const int i = std::min(static_cast<int>(pos), ob - 2);
        const double fr = pos - i;
        out.psd[k] = (1.0 - fr) * psd[i] + fr * psd[i + 1];
    }
    out.validate();
    return out;
}

GaussianMmsePredictor::GaussianMmsePredictor(GaussianPriorSpec prior)
    : prior_(std::move(prior)), plan_(prior_.frame_length) {
    prior_.validate();
}

std::vector<double> GaussianMmsePredictor::scale_bins(std::span<const double> v,
                                                      double delta) const {
    if (static_cast<int>(v.size()) != prior_.frame_length)
        throw std::invalid_argument("GaussianMmsePredictor: input length != frame_length");
    const double a2 = sigmoid(delta);
    const double s2 = sigmoid(-delta);
    const double s = std::sqrt(s2);
    Spectrum spec = plan_.forward(v);
    // eps_hat bin = s/(a^2 v_k + s^2) * Z_k  (real scaling per bin)
    for (int k = 0; k < spec.bin_count(); ++k)
        spec.bins[k] *= s / (a2 * prior_.psd[k] + s2);
    return plan_.inverse(spec);
}

std::vector<double> GaussianMmsePredictor::predict(std::span<const double> z,
                                                   double delta) const {
    return scale_bins(z, delta);
}

std::vector<double> GaussianMmsePredictor::vjp(std::span<const double> z, double delta,
                                               std::span<const double> cotangent) const {
    if (z.size() != cotangent.size())
        throw std::invalid_argument("GaussianMmsePredictor::vjp: length mismatch");
    // linear and self-adjoint (real diagonal in the orthonormal rfft basis)
    return scale_bins(cotangent, delta);
}

std::vector<double> GaussianMmsePredictor::denoise(std::span<const double> z,
                                                   double delta) const {
    const double a = std::sqrt(sigmoid(delta));
    const double s = std::sqrt(sigmoid(-delta));
    auto eps = predict(z, delta);
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = (z[i] - s * eps[i]) / a;
    return out;
}

}  // namespace diffsr
