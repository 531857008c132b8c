#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "diffsr/oracle.hpp"

using namespace diffsr;

namespace {
GaussianPriorSpec two_level_prior(int n) {
    GaussianPriorSpec p;
    p.frame_length = n;
    p.psd.assign(n / 2 + 1, 0.5);
    for (int k = 0; k < (n / 2 + 1) / 2; ++k) p.psd[k] = 2.0;
    return p;
}
}  // namespace

TEST_CASE("analytic_conditional: cutoff 0 is the prior, full cutoff is a point mass") {
    const auto prior = two_level_prior(64);
    Rng rng(1);
    const auto y = sample_prior(prior, rng);
    const Waveform yh(y, 16000);

    const auto p0 = analytic_conditional(prior, yh, 0);
    for (int k = 0; k < 33; ++k) {
        CHECK(p0.var[k] == prior.psd[k]);
        CHECK(std::abs(p0.mean[k]) == 0.0);
    }
    const auto pall = analytic_conditional(prior, yh, 33);
    const auto Y = rfft(y);
    for (int k = 0; k < 33; ++k) {
        CHECK(pall.var[k] == 0.0);
        CHECK(std::abs(pall.mean[k] - Y.bins[k]) == 0.0);
    }
    const auto pmid = analytic_conditional(prior, yh, 16);
    for (int k = 0; k < 16; ++k) CHECK(pmid.var[k] == 0.0);
    for (int k = 16; k < 33; ++k) CHECK(pmid.var[k] == prior.psd[k]);

    CHECK_THROWS_AS(analytic_conditional(prior, yh, 34), std::invalid_argument);
    CHECK_THROWS_AS(analytic_conditional(prior, yh, -1), std::invalid_argument);
}

TEST_CASE("empirical self-test: posterior samples pass, prior samples fail") {
    const auto prior = two_level_prior(64);
    Rng rng(2);
    const auto x = sample_prior(prior, rng);
    const Waveform yh(x, 16000);
    const auto post = analytic_conditional(prior, yh, 16);

    std::vector<std::vector<double>> good, bad;
    for (int i = 0; i < 1200; ++i) {
        good.push_back(sample_posterior(post, rng));
        bad.push_back(sample_prior(prior, rng));
    }
    const auto rep_good = empirical_distribution_test(good, post, 10.0);
    CHECK(rep_good.pass);
    CHECK(rep_good.max_observed_resid_std < 1e-12);  // observed bins are exact draws

    const auto rep_bad = empirical_distribution_test(bad, post, 10.0);
    CHECK_FALSE(rep_bad.pass);  // negative control: observed bins are not pinned

    CHECK_THROWS_AS(
        empirical_distribution_test(std::vector<std::vector<double>>(10, x), post, 10.0),
        std::invalid_argument);
}

TEST_CASE("sample_prior reproduces the psd") {
    const auto prior = two_level_prior(64);
    Rng rng(3);
    std::vector<double> power(33, 0.0);
    const int draws = 4000;
    for (int i = 0; i < draws; ++i) {
        const auto s = sample_prior(prior, rng);
        const auto X = rfft(s);
        for (int k = 0; k < 33; ++k) power[k] += std::norm(X.bins[k]);
    }
    for (int k = 0; k < 33; ++k) {
        const double ratio = power[k] / draws / prior.psd[k];
        CHECK(ratio > 0.85);
        CHECK(ratio < 1.15);
    }
}

TEST_CASE("gaussian_nll closed forms") {
    GaussianPriorSpec unit;
    unit.frame_length = 16;
    unit.psd.assign(9, 1.0);
    std::vector<double> zero(16, 0.0);
    CHECK(gaussian_nll(unit, zero) ==
          doctest::Approx(0.5 * 16 * std::log(2.0 * 3.14159265358979323846)).epsilon(1e-12));

    // one prior-standard-deviation vector adds n/2 nats
    Rng rng(4);
    auto x = sample_prior(unit, rng);
    // scale x so that its frequency-domain quadratic form is exactly n
    const auto X = rfft(x);
    double quad = X.bins[0].real() * X.bins[0].real();
    for (int k = 1; k < 8; ++k) quad += 2.0 * std::norm(X.bins[k]);
    quad += X.bins[8].real() * X.bins[8].real();
    const double scale = std::sqrt(16.0 / quad);
    for (double& v : x) v *= scale;
    CHECK(gaussian_nll(unit, x) ==
          doctest::Approx(0.5 * 16 * std::log(2.0 * 3.14159265358979323846) + 0.5 * 16)
              .epsilon(1e-9));

    // scaling all prior variances by 4 shifts the NLL by the closed-form amount
    GaussianPriorSpec wide = unit;
    for (double& v : wide.psd) v = 4.0;
    const double nll_unit = gaussian_nll(unit, x);
    const double nll_wide = gaussian_nll(wide, x);
    // +n/2 log 4 on the normalizer, quadratic term divided by 4
    const double expect = nll_unit + 0.5 * 16 * std::log(4.0) - (0.5 * 16) * (1.0 - 0.25);
    CHECK(nll_wide == doctest::Approx(expect).epsilon(1e-9));
}
