#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "diffsr/predictor.hpp"

namespace diffsr {

/// Miniature unconditional dilated-conv noise predictor. Gated residual
/// blocks over a single waveform channel; the log-SNR scalar enters through
/// a sinusoidal embedding -> MLP -> per-layer channel bias.
struct ToyUdmConfig {
    int residual_layers = 4;
    int channels = 16;
    std::vector<int> dilation_cycle = {1, 2, 4, 8};
    int kernel_size = 3;
    int embed_dim = 32;

    void validate() const;
    /// One-sided receptive field in samples (derived quantity).
    int receptive_field() const;
};

struct TensorSpec {
    std::string name;
    std::vector<int> shape;
    std::size_t offset = 0;  // in floats
    std::size_t size = 0;
};

struct ParamLayout {
    std::vector<TensorSpec> tensors;
    std::size_t total = 0;

    const TensorSpec& find(const std::string& name) const;
};

ParamLayout toy_udm_layout(const ToyUdmConfig& cfg);

/// Fan-in-scaled centered-uniform init; final projection zero-initialized so
/// the untrained predictor outputs zeros.
std::vector<float> toy_udm_init(const ToyUdmConfig& cfg, std::uint64_t seed);

/// Forward/backward engine. Parameters are float32 storage; Real selects the
/// compute precision (float in production, double for gradient checks).
template <typename Real>
class ToyUdmEngine {
public:
    ToyUdmEngine(ToyUdmConfig cfg, std::span<const float> params);

    std::vector<Real> forward(std::span<const Real> z, Real delta) const;

    /// Reverse pass; either output pointer may be null to skip that gradient.
    void vjp(std::span<const Real> z, Real delta, std::span<const Real> cotangent,
             std::vector<Real>* grad_z, std::vector<Real>* grad_params) const;

    const ToyUdmConfig& config() const { return cfg_; }
    std::size_t param_count() const { return params_.size(); }

private:
    struct Tape;
    void run_forward(std::span<const Real> z, Real delta, Tape& tape) const;

    ToyUdmConfig cfg_;
    ParamLayout layout_;
    std::vector<Real> params_;
};

/// NoisePredictor adapter over the float32 engine.
class ToyUdmPredictor : public NoisePredictor {
public:
    ToyUdmPredictor(ToyUdmConfig cfg, std::vector<float> params);

    std::vector<double> predict(std::span<const double> z, double delta) const override;
    std::vector<double> vjp(std::span<const double> z, double delta,
                            std::span<const double> cotangent) const override;

    /// Parameter gradient of <predict(z, delta), cotangent>.
    std::vector<float> param_vjp(std::span<const double> z, double delta,
                                 std::span<const double> cotangent) const;

    const ToyUdmConfig& config() const { return cfg_; }
    const std::vector<float>& params() const { return params_; }

private:
    ToyUdmConfig cfg_;
    std::vector<float> params_;
    ToyUdmEngine<float> engine_;
};

/// Free-function forms of the predictor contract.
std::vector<double> toy_udm_predict(const ToyUdmConfig& cfg, std::span<const float> params,
                                    std::span<const double> z, double delta);
std::pair<std::vector<double>, std::vector<float>> toy_udm_vjp(const ToyUdmConfig& cfg,
                                                               std::span<const float> params,
                                                               std::span<const double> z,
                                                               double delta,
                                                               std::span<const double> cotangent);

}  // namespace diffsr
