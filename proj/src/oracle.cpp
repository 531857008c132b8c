#include "diffsr/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace diffsr {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

GaussianPosterior analytic_conditional(const GaussianPriorSpec& prior, const Waveform& y_hat,
                                       int cutoff_bin) {
    prior.validate();
    if (static_cast<int>(y_hat.samples.size()) != prior.frame_length)
        throw std::invalid_argument("analytic_conditional: y_hat length != frame_length");
    const int nb = prior.bin_count();
    if (cutoff_bin < 0 || cutoff_bin > nb)
        throw std::invalid_argument("analytic_conditional: cutoff bin out of range");
    const auto Y = rfft(y_hat.samples);
    GaussianPosterior post;
    post.cutoff_bin = cutoff_bin;
    post.frame_length = prior.frame_length;
    post.mean.resize(nb);
    post.var.resize(nb);
    for (int k = 0; k < nb; ++k) {
        if (k < cutoff_bin) {
            post.mean[k] = Y.bins[k];
            post.var[k] = 0.0;
        } else {
            post.mean[k] = 0.0;
            post.var[k] = prior.psd[k];
        }
    }
    return post;
}

std::vector<double> sample_prior(const GaussianPriorSpec& prior, Rng& rng) {
    prior.validate();
    const int n = prior.frame_length;
    const int nb = prior.bin_count();
    Spectrum s;
    s.frame_length = n;
    s.bins.resize(nb);
    s.bins[0] = rng.normal() * std::sqrt(prior.psd[0]);
    for (int k = 1; k < nb - 1; ++k) {
        const double sd = std::sqrt(prior.psd[k] / 2.0);
        s.bins[k] = {rng.normal() * sd, rng.normal() * sd};
    }
    s.bins[nb - 1] = rng.normal() * std::sqrt(prior.psd[nb - 1]);
    return irfft(s);
}

std::vector<double> sample_posterior(const GaussianPosterior& posterior, Rng& rng) {
    const int n = posterior.frame_length;
    const int nb = n / 2 + 1;
    Spectrum s;
    s.frame_length = n;
    s.bins.resize(nb);
    for (int k = 0; k < nb; ++k) {
        if (posterior.var[k] <= 0.0) {
            s.bins[k] = posterior.mean[k];
        } else if (k == 0 || k == nb - 1) {
            s.bins[k] = posterior.mean[k] + rng.normal() * std::sqrt(posterior.var[k]);
        } else {
            const double sd = std::sqrt(posterior.var[k] / 2.0);
            s.bins[k] = posterior.mean[k] + std::complex<double>(rng.normal() * sd, rng.normal() * sd);
        }
    }
    // DC/Nyquist bins of a real signal are real-valued
    s.bins[0] = {s.bins[0].real(), 0.0};
    s.bins[nb - 1] = {s.bins[nb - 1].real(), 0.0};
    return irfft(s);
}

double gaussian_nll(const GaussianPriorSpec& prior, std::span<const double> x) {
    prior.validate();
    if (static_cast<int>(x.size()) != prior.frame_length)
        throw std::invalid_argument("gaussian_nll: x length != frame_length");
    const auto X = rfft(x);
    const int nb = prior.bin_count();
    // orthonormal real coordinates: DC, sqrt(2) Re/Im per interior bin, Nyquist
    double nll = 0.5 * prior.frame_length * kLog2Pi;
    nll += 0.5 * (std::log(prior.psd[0]) + X.bins[0].real() * X.bins[0].real() / prior.psd[0]);
    for (int k = 1; k < nb - 1; ++k) {
        const double re = X.bins[k].real(), im = X.bins[k].imag();
        nll += 0.5 * (2.0 * std::log(prior.psd[k]) +
                      2.0 * (re * re + im * im) / prior.psd[k]);
    }
    const double xn = X.bins[nb - 1].real();
    nll += 0.5 * (std::log(prior.psd[nb - 1]) + xn * xn / prior.psd[nb - 1]);
    return nll;
}

DistributionReport empirical_distribution_test(const std::vector<std::vector<double>>& samples,
                                               const GaussianPosterior& posterior,
                                               double delta_max) {
    if (samples.size() < 500)
        throw std::invalid_argument("empirical_distribution_test: need at least 500 samples");
    const int n = posterior.frame_length;
    const int nb = n / 2 + 1;
    const std::size_t count = samples.size();

    std::vector<std::complex<double>> mean(nb, 0.0);
    std::vector<double> power(nb, 0.0);
    std::vector<double> resid_sq(nb, 0.0);  // per real coordinate, observed bins
    for (const auto& s : samples) {
        if (static_cast<int>(s.size()) != n)
            throw std::invalid_argument("empirical_distribution_test: sample length mismatch");
        const auto X = rfft(s);
        for (int k = 0; k < nb; ++k) {
            mean[k] += X.bins[k];
            power[k] += std::norm(X.bins[k]);
            if (k < posterior.cutoff_bin) {
                const auto d = X.bins[k] - posterior.mean[k];
                const int ncoord = (k == 0 || k == nb - 1) ? 1 : 2;
                resid_sq[k] += std::norm(d) / ncoord;
            }
        }
    }
    DistributionReport rep;
    rep.min_var_ratio = 1e300;
    rep.max_var_ratio = -1e300;
    const double noise_floor = std::exp(-delta_max / 2.0);
    bool ok = true;
    for (int k = 0; k < nb; ++k) {
        mean[k] /= static_cast<double>(count);
        power[k] /= static_cast<double>(count);
        if (k < posterior.cutoff_bin) {
            const double err = std::abs(mean[k] - posterior.mean[k]);
            const double rstd = std::sqrt(resid_sq[k] / count);
            rep.observed_mean_error.push_back(err);
            rep.observed_resid_std.push_back(rstd);
            rep.max_observed_mean_error = std::max(rep.max_observed_mean_error, err);
            rep.max_observed_resid_std = std::max(rep.max_observed_resid_std, rstd);
            const double stderr_k = rstd / std::sqrt(static_cast<double>(count)) + 1e-12;
            if (err > 3.0 * noise_floor + 3.0 * stderr_k) ok = false;
        } else {
            const double ratio = power[k] / posterior.var[k];
            rep.unobserved_var_ratio.push_back(ratio);
            rep.unobserved_mean_abs.push_back(std::abs(mean[k]));
            rep.min_var_ratio = std::min(rep.min_var_ratio, ratio);
            rep.max_var_ratio = std::max(rep.max_var_ratio, ratio);
            if (ratio < 0.85 || ratio > 1.15) ok = false;
        }
    }
    rep.pass = ok;
    return rep;
}

}  // namespace diffsr
