#include "diffsr/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace diffsr {

namespace {
double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void check_finite(std::span<const double> v, int t) {
    for (double x : v)
        if (!std::isfinite(x))
            throw std::runtime_error("sampler: non-finite latent at step t=" + std::to_string(t));
}

std::vector<double> apply_lowpass(const LowpassOperator& op, std::span<const double> x) {
    return op.compose(x);
}
}  // namespace

void SamplerConfig::validate() const {
    if (steps < 2) throw std::invalid_argument("SamplerConfig: steps must be >= 2");
    if (!std::isfinite(eta) || eta < 0)
        throw std::invalid_argument("SamplerConfig: eta must be finite and >= 0");
    filter.validate();
}

std::vector<double> sample_unconditional(const NoisePredictor& predictor,
                                         const NoiseSchedule& schedule, std::size_t length,
                                         Rng& rng) {
    const int T = schedule.steps();
    std::vector<double> z = rng.normal_vector(length);
    std::vector<double> eps(length);
    for (int t = T; t >= 2; --t) {
        const double a = schedule.alpha(t), s = schedule.sigma(t);
        const auto eps_hat = predictor.predict(z, schedule.delta(t));
        check_finite(eps_hat, t);
        const auto pc = schedule.posterior(t);
        const double sd = std::sqrt(pc.var);
        rng.fill_normal(eps);
        for (std::size_t i = 0; i < length; ++i) {
            const double xhat = (z[i] - s * eps_hat[i]) / a;
            z[i] = pc.coef_z * z[i] + pc.coef_x * xhat + sd * eps[i];
        }
        check_finite(z, t - 1);
    }
    const double a1 = schedule.alpha(1), s1 = schedule.sigma(1);
    const auto eps_hat = predictor.predict(z, schedule.endpoints().delta_max);
    std::vector<double> out(length);
    for (std::size_t i = 0; i < length; ++i) out[i] = (z[i] - s1 * eps_hat[i]) / a1;
    return out;
}

std::vector<double> mcg_gradient(const NoisePredictor& predictor, const NoiseSchedule& schedule,
                                 int t, std::span<const double> z_t,
                                 std::span<const double> y_hat, const LowpassOperator& filter) {
    const double a = schedule.alpha(t), s = schedule.sigma(t);
    const auto eps_hat = predictor.predict(z_t, schedule.delta(t));
    std::vector<double> xhat(z_t.size());
    for (std::size_t i = 0; i < z_t.size(); ++i) xhat[i] = (z_t[i] - s * eps_hat[i]) / a;

    auto fx = apply_lowpass(filter, xhat);
    std::vector<double> resid(z_t.size());
    for (std::size_t i = 0; i < z_t.size(); ++i) resid[i] = y_hat[i] - fx[i];
    // cotangent on x_hat: -2 F^T (y_hat - F x_hat); F^T ~= F (zero phase)
    auto cot = apply_lowpass(filter, resid);
    for (double& c : cot) c *= -2.0;
    // pull back through x_hat = (z - s eps_hat)/a
    const auto pv = predictor.vjp(z_t, schedule.delta(t), cot);
    std::vector<double> g(z_t.size());
    for (std::size_t i = 0; i < z_t.size(); ++i) g[i] = (cot[i] - s * pv[i]) / a;
    return g;
}

Waveform sample_conditional(const NoisePredictor& predictor, const NoiseSchedule& schedule,
                            const Waveform& y, const SamplerConfig& cfg, Rng& rng,
                            SamplerTrace* trace) {
    cfg.validate();
    y.validate();
    if (cfg.steps != schedule.steps())
        throw std::invalid_argument("sample_conditional: cfg.steps != schedule steps");
    if (y.sample_rate != cfg.filter.target_rate)
        throw std::invalid_argument("sample_conditional: input rate != filter target rate");
    if (cfg.filter.target_rate > cfg.filter.source_rate)
        throw std::invalid_argument("sample_conditional: filter must upscale (h <= l)");
    const double expect_cut = std::min(cfg.filter.source_rate, cfg.filter.target_rate) / 2.0;
    if (std::abs(cfg.filter.cutoff_hz - expect_cut) > 1e-9)
        throw std::invalid_argument("sample_conditional: filter cutoff must be h/2");

    LowpassOperator op(cfg.filter);
    const Waveform y_up = op.upsample(y);
    const std::vector<double>& y_hat = y_up.samples;
    const std::size_t n = y_hat.size();
    const int T = schedule.steps();

    std::vector<double> z = rng.normal_vector(n);  // p(z_T | y_hat) = p(z_T)
    std::vector<double> noise(n);
    for (int t = T; t >= 2; --t) {
        const double a = schedule.alpha(t), s = schedule.sigma(t);
        const auto eps_hat = predictor.predict(z, schedule.delta(t));
        check_finite(eps_hat, t);
        std::vector<double> xhat(n);
        for (std::size_t i = 0; i < n; ++i) xhat[i] = (z[i] - s * eps_hat[i]) / a;

        auto fx = apply_lowpass(op, xhat);
        std::vector<double> g;
        double grad_norm = 0.0;
        if (cfg.mcg_enabled()) {
            // gradient of the pre-replacement residual, as in the listing
            std::vector<double> resid(n);
            for (std::size_t i = 0; i < n; ++i) resid[i] = y_hat[i] - fx[i];
            auto cot = apply_lowpass(op, resid);
            for (double& c : cot) c *= -2.0;
            const auto pv = predictor.vjp(z, schedule.delta(t), cot);
            g.resize(n);
            for (std::size_t i = 0; i < n; ++i) g[i] = (cot[i] - s * pv[i]) / a;
            grad_norm = norm2(g);
        }
        if (trace) {
            double r2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = y_hat[i] - fx[i];
                r2 += d * d;
            }
            trace->steps.push_back({t, std::sqrt(r2), grad_norm});
        }
        // inpainting: keep the observed low band, fill the rest from x_hat
        for (std::size_t i = 0; i < n; ++i) xhat[i] = y_hat[i] + xhat[i] - fx[i];

        const auto pc = schedule.posterior(t);
        std::vector<double> mu(n);
        for (std::size_t i = 0; i < n; ++i) mu[i] = pc.coef_z * z[i] + pc.coef_x * xhat[i];
        if (cfg.mcg_enabled()) {
            const auto fg = apply_lowpass(op, g);
            for (std::size_t i = 0; i < n; ++i) mu[i] -= cfg.eta * (g[i] - fg[i]);
        }
        const double sd = std::sqrt(pc.var);
        rng.fill_normal(noise);
        for (std::size_t i = 0; i < n; ++i) z[i] = mu[i] + sd * noise[i];
        check_finite(z, t - 1);
    }
    const double a1 = schedule.alpha(1), s1 = schedule.sigma(1);
    const auto eps_hat = predictor.predict(z, schedule.endpoints().delta_max);
    Waveform out;
    out.sample_rate = cfg.filter.source_rate;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = (z[i] - s1 * eps_hat[i]) / a1;
    check_finite(out.samples, 1);
    return out;
}

}  // namespace diffsr
