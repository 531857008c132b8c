#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "diffsr/predictor.hpp"
#include "diffsr/rng.hpp"
#include "diffsr/schedule.hpp"
#include "diffsr/signal.hpp"
#include "diffsr/toy_udm.hpp"

namespace diffsr {

struct TrainConfig {
    double learning_rate = 0.0002;
    int steps = 20000;
    int batch = 8;
    double ema_momentum = 0.9999;
    int segment_length = 256;
    std::uint64_t seed = 0;
    ScheduleEndpoints endpoints{10.0, 0.0};
    // Adam defaults; recorded in checkpoints
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;

    void validate() const;
};

/// Negative-VLB decomposition in nats. total = -(reconstruction - prior_kl
/// - diffusion_loss).
struct VlbReport {
    double reconstruction_term = 0.0;
    double prior_kl = 0.0;
    double diffusion_loss = 0.0;
    double total = 0.0;
};

struct LossRecord {
    int step = 0;
    double loss = 0.0;
    double ema_loss = 0.0;
};

struct TrainResult {
    std::vector<float> params;
    std::vector<float> ema_params;
    std::vector<LossRecord> history;
    bool aborted = false;
    int abort_step = -1;
};

/// Single-draw continuous diffusion loss (delta_max-delta_min)/2 *
/// ||eps - eps_hat(z_u; u)||^2 for an explicit (eps, upsilon) draw, with the
/// parameter gradient from the predictor vjp.
struct ContinuousLossGrad {
    double loss = 0.0;
    std::vector<float> grad;
};

ContinuousLossGrad continuous_diffusion_loss_grad(const ToyUdmConfig& cfg,
                                                  std::span<const float> params,
                                                  ScheduleEndpoints endpoints,
                                                  std::span<const double> x,
                                                  std::span<const double> eps, double upsilon);

/// Same loss with internal draws, any predictor, value only.
double continuous_diffusion_loss(const NoisePredictor& predictor, ScheduleEndpoints endpoints,
                                 std::span<const double> x, Rng& rng);

/// Monte Carlo estimate of the discrete diffusion loss
/// sum_t KL(q(z_{t-1}|z_t,x) || p(z_{t-1}|z_t)); each KL is
/// coef_x^2 ||x - x_hat||^2 / (2 var) since both Gaussians share var.
double discrete_diffusion_loss(const NoisePredictor& predictor, const NoiseSchedule& schedule,
                               std::span<const double> x, Rng& rng, int n_mc);

VlbReport vlb(const NoisePredictor& predictor, const NoiseSchedule& schedule,
              std::span<const double> x, Rng& rng, int n_mc);

/// Adam + EMA optimization of the toy UDM on the continuous loss.
/// Non-finite loss aborts and returns the last good parameters.
TrainResult train(const TrainConfig& cfg, const ToyUdmConfig& model_cfg,
                  const std::vector<Waveform>& corpus, std::vector<float> init_params,
                  const std::function<void(const LossRecord&)>& on_log = {});

// synthetic desk-scale corpora
Waveform make_ar1(std::size_t length, int sample_rate, double coeff, double rms, Rng& rng);
Waveform make_harmonic(std::size_t length, int sample_rate, double f0, int partials, double rms,
                       Rng& rng);
Waveform make_chirp(std::size_t length, int sample_rate, double f_start, double f_end, double rms);

}  // namespace diffsr
