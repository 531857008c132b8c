#pragma once

#include <span>
#include <vector>

namespace diffsr {

/// Log-SNR endpoints: delta_max at t=1 (least noisy), delta_min at t=T.
struct ScheduleEndpoints {
    double delta_max = 10.0;
    double delta_min = 0.0;
};

/// Coefficients of the reverse posterior q(z_{t-1} | z_t, x):
/// mean = coef_z * z_t + coef_x * x, variance var * I.
struct PosteriorCoeffs {
    double coef_z = 0.0;
    double coef_x = 0.0;
    double var = 0.0;
};

double sigmoid(double x);

/// Discretized log-SNR schedule with derived alpha/sigma. All math in
/// 64-bit; sigma_bar^2 is computed via expm1 to avoid cancellation for
/// small steps.
class NoiseSchedule {
public:
    NoiseSchedule(ScheduleEndpoints endpoints, int steps, std::vector<double> delta);

    int steps() const { return T_; }
    const ScheduleEndpoints& endpoints() const { return endpoints_; }
    const std::vector<double>& deltas() const { return delta_; }

    // t is 1-based, 1 <= t <= T
    double delta(int t) const;
    double alpha(int t) const;
    double sigma(int t) const;
    double alpha2(int t) const { double a = alpha(t); return a * a; }
    double sigma2(int t) const { double s = sigma(t); return s * s; }

    PosteriorCoeffs posterior(int t) const;  // 2 <= t <= T

private:
    ScheduleEndpoints endpoints_;
    int T_;
    std::vector<double> delta_, alpha_, sigma_;
};

/// delta_t = (t-1)/(T-1) * delta_min + (T-t)/(T-1) * delta_max
NoiseSchedule linear_logsnr_schedule(ScheduleEndpoints endpoints, int steps);

PosteriorCoeffs posterior_coeffs(const NoiseSchedule& schedule, int t);

/// z_t = alpha_t x + sigma_t eps
std::vector<double> forward_marginal(const NoiseSchedule& schedule, int t,
                                     std::span<const double> x, std::span<const double> eps);

/// z_upsilon = sqrt(phi(upsilon)) x + sqrt(phi(-upsilon)) eps, phi = sigmoid
std::vector<double> continuous_latent(ScheduleEndpoints endpoints, double upsilon,
                                      std::span<const double> x, std::span<const double> eps);

}  // namespace diffsr
