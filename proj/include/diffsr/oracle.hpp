#pragma once

#include <complex>
#include <span>
#include <vector>

#include "diffsr/predictor.hpp"
#include "diffsr/rng.hpp"
#include "diffsr/signal.hpp"

namespace diffsr {

/// Exact per-bin posterior p(X_k | observed low bins) for a diagonal
/// Gaussian prior: observed bins are noiseless point masses at Y_hat,
/// unobserved bins keep the prior marginal.
struct GaussianPosterior {
    std::vector<std::complex<double>> mean;  // per bin
    std::vector<double> var;                 // total complex variance per bin
    int cutoff_bin = 0;                      // bins < cutoff are observed
    int frame_length = 0;
};

GaussianPosterior analytic_conditional(const GaussianPriorSpec& prior, const Waveform& y_hat,
                                       int cutoff_bin);

/// Draw a time-domain sample from the diagonal-in-frequency prior.
std::vector<double> sample_prior(const GaussianPriorSpec& prior, Rng& rng);

/// Draw from a GaussianPosterior (observed bins fixed at the mean).
std::vector<double> sample_posterior(const GaussianPosterior& posterior, Rng& rng);

/// Exact diagonal-Gaussian negative log-likelihood of x, in nats.
double gaussian_nll(const GaussianPriorSpec& prior, std::span<const double> x);

struct DistributionReport {
    std::vector<double> observed_mean_error;   // per observed bin, |mean - Y_hat|
    std::vector<double> observed_resid_std;    // per observed bin (per real coordinate)
    std::vector<double> unobserved_var_ratio;  // per unobserved bin, E|X|^2 / prior
    std::vector<double> unobserved_mean_abs;   // per unobserved bin, |empirical mean|
    double max_observed_mean_error = 0.0;
    double max_observed_resid_std = 0.0;
    double min_var_ratio = 0.0;
    double max_var_ratio = 0.0;
    bool pass = false;
};

/// Compares empirical per-bin statistics of `samples` against the posterior.
/// Pass criteria: observed-bin mean error <= 3 e^{-delta_max/2} + 3 MC-stderr
/// and unobserved-bin variance ratios within [0.85, 1.15].
DistributionReport empirical_distribution_test(const std::vector<std::vector<double>>& samples,
                                               const GaussianPosterior& posterior,
                                               double delta_max);

}  // namespace diffsr
