#include "diffsr/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace diffsr {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

NoiseSchedule::NoiseSchedule(ScheduleEndpoints endpoints, int steps, std::vector<double> delta)
    : endpoints_(endpoints), T_(steps), delta_(std::move(delta)) {
    if (T_ < 2) throw std::invalid_argument("NoiseSchedule: need at least 2 steps");
    if (endpoints_.delta_max <= endpoints_.delta_min)
        throw std::invalid_argument("NoiseSchedule: delta_max must exceed delta_min");
    if (static_cast<int>(delta_.size()) != T_)
        throw std::invalid_argument("NoiseSchedule: delta size mismatch");
    for (int i = 1; i < T_; ++i)
        if (!(delta_[i] < delta_[i - 1]))
            throw std::invalid_argument("NoiseSchedule: delta must be strictly decreasing");
    alpha_.resize(T_);
    sigma_.resize(T_);
    for (int i = 0; i < T_; ++i) {
        alpha_[i] = std::sqrt(sigmoid(delta_[i]));
        sigma_[i] = std::sqrt(sigmoid(-delta_[i]));
    }
}

double NoiseSchedule::delta(int t) const {
    if (t < 1 || t > T_) throw std::invalid_argument("NoiseSchedule: t out of range");
    return delta_[t - 1];
}
double NoiseSchedule::alpha(int t) const {
    if (t < 1 || t > T_) throw std::invalid_argument("NoiseSchedule: t out of range");
    return alpha_[t - 1];
}
double NoiseSchedule::sigma(int t) const {
    if (t < 1 || t > T_) throw std::invalid_argument("NoiseSchedule: t out of range");
    return sigma_[t - 1];
}

PosteriorCoeffs NoiseSchedule::posterior(int t) const {
    if (t < 2 || t > T_) throw std::invalid_argument("posterior_coeffs: need 2 <= t <= T");
    const double dd = delta_[t - 1] - delta_[t - 2];  // negative
    const double one_m = -std::expm1(dd);             // 1 - exp(dd) in (0, 1)
    const double a_prev = alpha_[t - 2], a_cur = alpha_[t - 1];
    const double s2_prev = sigma_[t - 2] * sigma_[t - 2];
    const double s2_cur = sigma_[t - 1] * sigma_[t - 1];
    PosteriorCoeffs c;
    const double sbar2 = std::max(s2_cur * one_m, 1e-20);
    c.coef_z = (a_cur / a_prev) * s2_prev / s2_cur;
    c.coef_x = a_prev * (sbar2 / s2_cur);
    c.var = std::max(s2_prev * (sbar2 / s2_cur), 1e-20);
    return c;
}

NoiseSchedule linear_logsnr_schedule(ScheduleEndpoints endpoints, int steps) {
    if (steps < 2) throw std::invalid_argument("linear_logsnr_schedule: steps must be >= 2");
    std::vector<double> delta(steps);
    for (int t = 1; t <= steps; ++t) {
        delta[t - 1] = (static_cast<double>(t - 1) / (steps - 1)) * endpoints.delta_min +
                       (static_cast<double>(steps - t) / (steps - 1)) * endpoints.delta_max;
    }
    delta.front() = endpoints.delta_max;  // exact endpoints
    delta.back() = endpoints.delta_min;
    return NoiseSchedule(endpoints, steps, std::move(delta));
}

PosteriorCoeffs posterior_coeffs(const NoiseSchedule& schedule, int t) {
    return schedule.posterior(t);
}

std::vector<double> forward_marginal(const NoiseSchedule& schedule, int t,
                                     std::span<const double> x, std::span<const double> eps) {
    if (x.size() != eps.size())
        throw std::invalid_argument("forward_marginal: x and eps length mismatch");
    const double a = schedule.alpha(t), s = schedule.sigma(t);
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = a * x[i] + s * eps[i];
    return z;
}

std::vector<double> continuous_latent(ScheduleEndpoints endpoints, double upsilon,
                                      std::span<const double> x, std::span<const double> eps) {
    if (upsilon < endpoints.delta_min || upsilon > endpoints.delta_max)
        throw std::invalid_argument("continuous_latent: upsilon outside [delta_min, delta_max]");
    if (x.size() != eps.size())
        throw std::invalid_argument("continuous_latent: x and eps length mismatch");
    const double a = std::sqrt(sigmoid(upsilon));
    const double s = std::sqrt(sigmoid(-upsilon));
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = a * x[i] + s * eps[i];
    return z;
}

}  // namespace diffsr
