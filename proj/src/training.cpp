#include "diffsr/training.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diffsr {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}  // namespace

void TrainConfig::validate() const {
    if (learning_rate <= 0) throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
    if (ema_momentum < 0 || ema_momentum >= 1)
        throw std::invalid_argument("TrainConfig: ema_momentum must be in [0, 1)");
    if (steps <= 0 || batch <= 0 || segment_length <= 0)
        throw std::invalid_argument("TrainConfig: steps, batch, segment_length must be positive");
}

ContinuousLossGrad continuous_diffusion_loss_grad(const ToyUdmConfig& cfg,
                                                  std::span<const float> params,
                                                  ScheduleEndpoints endpoints,
                                                  std::span<const double> x,
                                                  std::span<const double> eps, double upsilon) {
    const auto z = continuous_latent(endpoints, upsilon, x, eps);
    ToyUdmEngine<float> engine(cfg, params);
    std::vector<float> zf(z.begin(), z.end());
    const auto eps_hat = engine.forward(zf, static_cast<float>(upsilon));

    const double range = endpoints.delta_max - endpoints.delta_min;
    double sq = 0.0;
    std::vector<float> cot(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double d = eps[i] - static_cast<double>(eps_hat[i]);
        sq += d * d;
        cot[i] = static_cast<float>(-range * d);  // d/d eps_hat of (range/2) * ||eps-eps_hat||^2
    }
    ContinuousLossGrad out;
    out.loss = 0.5 * range * sq;
    engine.vjp(zf, static_cast<float>(upsilon), cot, nullptr, &out.grad);
    return out;
}

double continuous_diffusion_loss(const NoisePredictor& predictor, ScheduleEndpoints endpoints,
                                 std::span<const double> x, Rng& rng) {
    const double upsilon = rng.uniform(endpoints.delta_min, endpoints.delta_max);
    const auto eps = rng.normal_vector(x.size());
    const auto z = continuous_latent(endpoints, upsilon, x, eps);
    const auto eps_hat = predictor.predict(z, upsilon);
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = eps[i] - eps_hat[i];
        sq += d * d;
    }
    return 0.5 * (endpoints.delta_max - endpoints.delta_min) * sq;
}

double discrete_diffusion_loss(const NoisePredictor& predictor, const NoiseSchedule& schedule,
                               std::span<const double> x, Rng& rng, int n_mc) {
    if (n_mc < 1) throw std::invalid_argument("discrete_diffusion_loss: n_mc must be >= 1");
    double total = 0.0;
    std::vector<double> eps(x.size());
    for (int draw = 0; draw < n_mc; ++draw) {
        for (int t = 2; t <= schedule.steps(); ++t) {
            rng.fill_normal(eps);
            const double a = schedule.alpha(t), s = schedule.sigma(t);
            std::vector<double> z(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) z[i] = a * x[i] + s * eps[i];
            const auto eps_hat = predictor.predict(z, schedule.delta(t));
            const auto pc = schedule.posterior(t);
            if (!(pc.var > 0.0)) throw std::runtime_error("discrete_diffusion_loss: var <= 0");
            double sq = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double xhat = (z[i] - s * eps_hat[i]) / a;
                const double d = x[i] - xhat;
                sq += d * d;
            }
            total += pc.coef_x * pc.coef_x * sq / (2.0 * pc.var);
        }
    }
    return total / n_mc;
}

VlbReport vlb(const NoisePredictor& predictor, const NoiseSchedule& schedule,
              std::span<const double> x, Rng& rng, int n_mc) {
    if (n_mc < 1) throw std::invalid_argument("vlb: n_mc must be >= 1");
    const double dmax = schedule.endpoints().delta_max;
    const double n = static_cast<double>(x.size());
    const double a1 = schedule.alpha(1), s1 = schedule.sigma(1);

    // E_{q(z1|x)} log p(x|z1) with p(x|z1) = N(z1/alpha1, exp(-delta_max) I)
    double recon = 0.0;
    std::vector<double> eps(x.size());
    for (int draw = 0; draw < n_mc; ++draw) {
        rng.fill_normal(eps);
        double sq = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double z1 = a1 * x[i] + s1 * eps[i];
            const double d = x[i] - z1 / a1;
            sq += d * d;
        }
        recon += -0.5 * n * (kLog2Pi - dmax) - 0.5 * std::exp(dmax) * sq;
    }
    recon /= n_mc;

    // KL(q(z_T|x) || N(0, I)) in closed form
    const double aT = schedule.alpha(schedule.steps());
    const double sT2 = schedule.sigma2(schedule.steps());
    double prior_kl = 0.0;
    for (double xi : x) prior_kl += 0.5 * (aT * aT * xi * xi + sT2 - 1.0 - std::log(sT2));

    VlbReport r;
    r.reconstruction_term = recon;
    r.prior_kl = prior_kl;
    r.diffusion_loss = discrete_diffusion_loss(predictor, schedule, x, rng, n_mc);
    r.total = -(recon - prior_kl - r.diffusion_loss);
    return r;
}

namespace {
std::vector<double> random_segment(const std::vector<Waveform>& corpus, int segment, Rng& rng) {
    const std::size_t pick =
        std::min(corpus.size() - 1, static_cast<std::size_t>(rng.uniform() * corpus.size()));
    const auto& s = corpus[pick].samples;
    std::vector<double> seg(static_cast<std::size_t>(segment));
    if (s.size() >= seg.size()) {
        const std::size_t max_start = s.size() - seg.size();
        const std::size_t start =
            std::min(max_start, static_cast<std::size_t>(rng.uniform() * (max_start + 1)));
        std::copy(s.begin() + start, s.begin() + start + seg.size(), seg.begin());
    } else {
        for (std::size_t i = 0; i < seg.size(); ++i) {  // cyclic fill for short items
            seg[i] = s[i % s.size()];
        }
    }
    return seg;
}
}  // namespace

TrainResult train(const TrainConfig& cfg, const ToyUdmConfig& model_cfg,
                  const std::vector<Waveform>& corpus, std::vector<float> init_params,
                  const std::function<void(const LossRecord&)>& on_log) {
    cfg.validate();
    model_cfg.validate();
    if (corpus.empty()) throw std::invalid_argument("train: empty corpus");
    const auto layout = toy_udm_layout(model_cfg);
    if (init_params.size() != layout.total)
        throw std::invalid_argument("train: init parameter size mismatch");

    TrainResult result;
    std::vector<float> params = std::move(init_params);
    std::vector<float> ema = params;
    std::vector<double> m(params.size(), 0.0), v(params.size(), 0.0);
    Rng rng(cfg.seed, /*stream=*/0x7a11);

    double ema_loss = 0.0;
    bool ema_loss_init = false;
    std::vector<float> last_good = params;

    for (int step = 1; step <= cfg.steps; ++step) {
        std::vector<double> grad(params.size(), 0.0);
        double loss_sum = 0.0;
        for (int b = 0; b < cfg.batch; ++b) {
            const auto x = random_segment(corpus, cfg.segment_length, rng);
            const double upsilon = rng.uniform(cfg.endpoints.delta_min, cfg.endpoints.delta_max);
            const auto eps = rng.normal_vector(x.size());
            const auto lg =
                continuous_diffusion_loss_grad(model_cfg, params, cfg.endpoints, x, eps, upsilon);
            loss_sum += lg.loss;
            for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += lg.grad[i];
        }
        const double loss = loss_sum / cfg.batch;
        if (!std::isfinite(loss)) {
            result.aborted = true;
            result.abort_step = step;
            params = last_good;
            break;
        }
        last_good = params;

        const double bc1 = 1.0 - std::pow(cfg.adam_beta1, step);
        const double bc2 = 1.0 - std::pow(cfg.adam_beta2, step);
        for (std::size_t i = 0; i < params.size(); ++i) {
            const double g = grad[i] / cfg.batch;
            m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * g;
            v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * g * g;
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            params[i] -= static_cast<float>(cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_eps));
        }
        for (std::size_t i = 0; i < params.size(); ++i)
            ema[i] = static_cast<float>(cfg.ema_momentum * ema[i] +
                                        (1.0 - cfg.ema_momentum) * params[i]);

        if (!ema_loss_init) {
            ema_loss = loss;
            ema_loss_init = true;
        } else {
            ema_loss = 0.99 * ema_loss + 0.01 * loss;
        }
        if (step == 1 || step % 100 == 0 || step == cfg.steps) {
            LossRecord rec{step, loss, ema_loss};
            result.history.push_back(rec);
            if (on_log) on_log(rec);
        }
    }
    result.params = std::move(params);
    result.ema_params = std::move(ema);
    return result;
}

Waveform make_ar1(std::size_t length, int sample_rate, double coeff, double rms, Rng& rng) {
    std::vector<double> x(length, 0.0);
    const double drive = std::sqrt(std::max(1e-12, 1.0 - coeff * coeff));
    double prev = rng.normal();  // stationary start
    x[0] = prev;
    for (std::size_t i = 1; i < length; ++i) {
        prev = coeff * prev + drive * rng.normal();
        x[i] = prev;
    }
    double e = 0.0;
    for (double s : x) e += s * s;
    const double scale = rms / std::max(1e-12, std::sqrt(e / length));
    for (double& s : x) s *= scale;
    return Waveform(std::move(x), sample_rate);
}

Waveform make_harmonic(std::size_t length, int sample_rate, double f0, int partials, double rms,
                       Rng& rng) {
    std::vector<double> x(length, 0.0);
    for (int k = 1; k <= partials; ++k) {
        const double f = f0 * k;
        if (f >= sample_rate / 2.0) break;
        const double phase = rng.uniform(0.0, kTwoPi);
        const double amp = 1.0 / k;
        for (std::size_t i = 0; i < length; ++i)
            x[i] += amp * std::sin(kTwoPi * f * i / sample_rate + phase);
    }
    double e = 0.0;
    for (double s : x) e += s * s;
    const double scale = rms / std::max(1e-12, std::sqrt(e / length));
    for (double& s : x) s *= scale;
    return Waveform(std::move(x), sample_rate);
}

Waveform make_chirp(std::size_t length, int sample_rate, double f_start, double f_end, double rms) {
    std::vector<double> x(length);
    double phase = 0.0;
    for (std::size_t i = 0; i < length; ++i) {
        const double frac = static_cast<double>(i) / length;
        const double f = f_start + (f_end - f_start) * frac;
        phase += kTwoPi * f / sample_rate;
        x[i] = std::sin(phase);
    }
    const double scale = rms / std::sqrt(0.5);
    for (double& s : x) s *= scale;
    return Waveform(std::move(x), sample_rate);
}

}  // namespace diffsr
