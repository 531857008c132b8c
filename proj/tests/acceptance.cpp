// Acceptance suite: prints one PASS/FAIL line per criterion and exits with
// the number of failures. Every threshold is pinned here, not configurable.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "diffsr/metrics.hpp"
#include "diffsr/oracle.hpp"
#include "diffsr/predictor.hpp"
#include "diffsr/resample.hpp"
#include "diffsr/rng.hpp"
#include "diffsr/sampler.hpp"
#include "diffsr/schedule.hpp"
#include "diffsr/toy_udm.hpp"
#include "diffsr/training.hpp"

using namespace diffsr;

namespace {

int g_failures = 0;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(const char* id, bool pass, const std::string& detail, double secs) {
    std::printf("[%s] %s %s (%.1f s)\n", id, pass ? "PASS" : "FAIL", detail.c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

GaussianPriorSpec two_level_prior(int n, double lo_v = 2.0, double hi_v = 0.5) {
    GaussianPriorSpec p;
    p.frame_length = n;
    const int nb = n / 2 + 1;
    p.psd.assign(nb, hi_v);
    for (int k = 0; k < nb / 2; ++k) p.psd[k] = lo_v;
    return p;
}

GaussianPriorSpec white_prior(int n, double v = 1.0) {
    GaussianPriorSpec p;
    p.frame_length = n;
    p.psd.assign(n / 2 + 1, v);
    return p;
}

FilterSpec block_mask(int l, int frame) {
    return FilterSpec::mask(l, l / 2, StftConfig{frame, frame, WindowKind::rectangular});
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// ---------------------------------------------------------------- A1
void run_a1() {
    Timer timer;
    const int n = 64, T = 1000, draws = 2000;
    const auto prior = two_level_prior(n);
    GaussianMmsePredictor pred(prior);
    const auto sch = linear_logsnr_schedule({10.0, -10.0}, T);

    std::vector<std::complex<double>> mean(n / 2 + 1, 0.0);
    std::vector<double> power(n / 2 + 1, 0.0);
    for (int i = 0; i < draws; ++i) {
        Rng rng(12345, static_cast<std::uint64_t>(i));
        const auto s = sample_unconditional(pred, sch, n, rng);
        const auto X = rfft(s);
        for (int k = 0; k <= n / 2; ++k) {
            mean[k] += X.bins[k];
            power[k] += std::norm(X.bins[k]);
        }
    }
    double worst_ratio_lo = 1e9, worst_ratio_hi = -1e9, worst_mean_sig = 0.0;
    bool pass = true;
    for (int k = 0; k <= n / 2; ++k) {
        const double ratio = power[k] / draws / prior.psd[k];
        worst_ratio_lo = std::min(worst_ratio_lo, ratio);
        worst_ratio_hi = std::max(worst_ratio_hi, ratio);
        if (ratio < 0.9 || ratio > 1.1) pass = false;
        const double band = 3.0 * std::sqrt(prior.psd[k] / draws);
        const double m = std::abs(mean[k] / static_cast<double>(draws));
        worst_mean_sig = std::max(worst_mean_sig, m / band);
        if (m > band) pass = false;
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "unconditional oracle: var ratio [%.3f, %.3f] within +/-10%%, worst mean %.2fx "
                  "of 3-sigma band (T=%d, %d draws)",
                  worst_ratio_lo, worst_ratio_hi, worst_mean_sig, T, draws);
    report("A1", pass && timer.seconds() < 120.0, buf, timer.seconds());
}

// ---------------------------------------------------------------- A2
void run_a2() {
    Timer timer;
    const int n = 64, T = 1000, draws = 2000, cutoff = 16;
    const double dmax = 10.0;
    const auto prior = two_level_prior(n);
    GaussianMmsePredictor pred(prior);
    const auto sch = linear_logsnr_schedule({dmax, -10.0}, T);

    Rng xr(777);
    const auto x = sample_prior(prior, xr);
    SamplerConfig cfg;
    cfg.steps = T;
    cfg.eta = 0.0;
    cfg.filter = block_mask(16000, n);  // cutoff bin 16 of 33
    const auto y = downsample(Waveform(x, 16000), cfg.filter);
    LowpassOperator op(cfg.filter);
    const Waveform y_hat = op.upsample(y);
    const auto post = analytic_conditional(prior, y_hat, cutoff);

    std::vector<std::vector<double>> samples;
    samples.reserve(draws);
    for (int i = 0; i < draws; ++i) {
        Rng rng(4300, static_cast<std::uint64_t>(i));
        samples.push_back(sample_conditional(pred, sch, y, cfg, rng).samples);
    }
    const auto rep = empirical_distribution_test(samples, post, dmax);
    const double resid_bound = 2.0 * std::exp(-dmax / 2.0);
    bool pass = rep.pass;
    if (rep.max_observed_resid_std > resid_bound) pass = false;
    if (rep.min_var_ratio < 0.85 || rep.max_var_ratio > 1.15) pass = false;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "conditional oracle: observed resid std %.5f <= %.5f, unobserved var ratio "
                  "[%.3f, %.3f] within +/-15%% (T=%d, %d draws)",
                  rep.max_observed_resid_std, resid_bound, rep.min_var_ratio, rep.max_var_ratio,
                  T, draws);
    report("A2", pass && timer.seconds() < 300.0, buf, timer.seconds());
}

// ---------------------------------------------------------------- A3
void run_a3() {
    Timer timer;
    const int rate = 16000, h = 8000;
    // small 16 kHz model trained briefly on harmonic-plus-noise material;
    // low-frequency retention comes from the sampler, not model quality
    ToyUdmConfig mcfg;
    TrainConfig tcfg;
    tcfg.steps = 5000;
    tcfg.batch = 4;
    tcfg.segment_length = 256;
    tcfg.learning_rate = 5e-4;
    tcfg.seed = 11;
    Rng cr(900);
    std::vector<Waveform> corpus;
    for (int i = 0; i < 6; ++i) {
        auto w = make_harmonic(rate * 2, rate, 120.0 + 40.0 * i, 40, 0.22, cr);
        Rng nr(901 + i);
        for (auto& s : w.samples) s += 0.01 * nr.normal();
        corpus.push_back(std::move(w));
    }
    const auto tr = train(tcfg, mcfg, corpus, toy_udm_init(mcfg, 12));
    ToyUdmPredictor pred(mcfg, tr.ema_params);

    // held-out utterance
    Rng ur(950);
    auto ref = make_harmonic(16384, rate, 149.0, 40, 0.22, ur);
    Rng nr(951);
    for (auto& s : ref.samples) s += 0.01 * nr.normal();

    SamplerConfig cfg;
    cfg.steps = 50;
    cfg.eta = 0.0;
    cfg.filter = FilterSpec::sinc(rate, h);
    const auto sch = linear_logsnr_schedule({10.0, 0.0}, cfg.steps);
    const auto y = downsample(ref, cfg.filter);
    Rng sr(952);
    const auto out = sample_conditional(pred, sch, y, cfg, sr);

    LsdConfig lc;
    lc.frame_length = 2048;
    lc.hop = 512;
    const double lf_out = lsd_lf(ref, out, h, lc);

    // simulated-input protocol: reference plus N(0, e^{-10}) noise
    Rng simr(953);
    auto sim = ref;
    for (auto& s : sim.samples) s += std::exp(-5.0) * simr.normal();
    const double lf_sim = lsd_lf(ref, sim, h, lc);

    const bool pass = lf_out <= 2.0 * lf_sim;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "low-frequency retention: LSD-LF(output)=%.4f <= 2 x LSD-LF(simulated)=%.4f",
                  lf_out, 2.0 * lf_sim);
    report("A3", pass, buf, timer.seconds());
}

// ---------------------------------------------------------------- A4
void run_a4() {
    Timer timer;
    const int n = 256;
    const auto prior = white_prior(n);
    GaussianMmsePredictor pred(prior);
    // wide transition band (few zero crossings): the no-MCG chain then
    // genuinely degrades at small T, the regime the MCG correction targets;
    // with the production 128-crossing filter the transition band is too
    // narrow for the exact predictor to show any T dependence
    FilterSpec filter = FilterSpec::sinc(16000, 8000);
    filter.zero_crossings = 8;
    LowpassOperator op(filter);

    Rng xr(4444);
    const auto x = sample_prior(prior, xr);
    const auto y = downsample(Waveform(x, 16000), filter);
    const Waveform yhat = op.upsample(y);

    auto median_residual = [&](int T, double eta) {
        const auto sch = linear_logsnr_schedule({10.0, -10.0}, T);
        SamplerConfig cfg;
        cfg.steps = T;
        cfg.eta = eta;
        cfg.filter = filter;
        std::vector<double> vals;
        for (int seed = 0; seed < 50; ++seed) {
            Rng rng(5000 + seed);
            const auto out = sample_conditional(pred, sch, y, cfg, rng);
            const auto fx = op.compose(out.samples);
            double acc = 0.0;
            for (std::size_t i = 0; i < fx.size(); ++i) {
                const double d = yhat.samples[i] - fx[i];
                acc += d * d;
            }
            vals.push_back(std::sqrt(acc));
        }
        std::sort(vals.begin(), vals.end());
        return 0.5 * (vals[24] + vals[25]);
    };

    // tune eta on the T=25 setting over a fixed grid, as the evaluation
    // protocol prescribes
    const double m25_off = median_residual(25, 0.0);
    double eta_star = 0.0, m25_on = m25_off;
    for (double eta : {0.1, 0.25, 0.5, 1.0}) {
        const double m = median_residual(25, eta);
        if (m < m25_on) {
            m25_on = m;
            eta_star = eta;
        }
    }
    const double m200_off = median_residual(200, 0.0);
    const double m200_on = median_residual(200, eta_star);
    const double gap25 = m25_off - m25_on;
    const double gap200 = m200_off - m200_on;

    const bool pass = (eta_star > 0.0) && (m25_on <= m25_off) && (gap200 <= gap25);
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "MCG direction: T=25 median %.4f (eta=%.2f) <= %.4f (eta=0); gap narrows "
                  "%.4f -> %.4f at T=200",
                  m25_on, eta_star, m25_off, gap25, gap200);
    report("A4", pass, buf, timer.seconds());
}

// ---------------------------------------------------------------- A5
void run_a5() {
    Timer timer;
    const ScheduleEndpoints ep{10.0, 0.0};
    const int n = 2;
    Rng xr(1357);
    const auto x = xr.normal_vector(n);  // fixed scalar-like data
    GaussianMmsePredictor pred(white_prior(n));

    Rng mc(2468);
    double linf = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) linf += continuous_diffusion_loss(pred, ep, x, mc);
    linf /= draws;

    const auto sch = linear_logsnr_schedule(ep, 1000);
    Rng mc2(3579);
    const double lt = discrete_diffusion_loss(pred, sch, x, mc2, 60);
    const double rel = std::abs(linf - lt) / lt;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "loss consistency: L_inf(MC 1e4)=%.4f vs L_T(T=1000)=%.4f, "
                  "rel diff %.3f%% < 5%%", linf, lt, 100.0 * rel);
    report("A5", rel < 0.05, buf, timer.seconds());
}

// ---------------------------------------------------------------- A6
void run_a6() {
    Timer timer;
    bool pass = true;
    double worst_unit = 0.0, worst_coef = 0.0;
    for (int T : {2, 25, 50, 100, 200, 1000}) {
        const auto s = linear_logsnr_schedule({10.0, 0.0}, T);
        if (s.delta(1) != 10.0 || s.delta(T) != 0.0) pass = false;
        for (int t = 1; t <= T; ++t) {
            worst_unit = std::max(worst_unit, std::abs(s.alpha2(t) + s.sigma2(t) - 1.0));
            if (t >= 2) {
                const auto pc = s.posterior(t);
                worst_coef = std::max(
                    worst_coef, std::abs(pc.coef_z * s.alpha(t) + pc.coef_x - s.alpha(t - 1)));
            }
        }
    }
    if (worst_unit > 1e-14 || worst_coef > 1e-12) pass = false;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "schedule identities: endpoints exact, max|a^2+s^2-1|=%.2e <= 1e-14, "
                  "max coef identity err %.2e <= 1e-12 (T in {2..1000})",
                  worst_unit, worst_coef);
    report("A6", pass, buf, timer.seconds());
}

// ---------------------------------------------------------------- A7
void run_a7() {
    Timer timer;
    bool pass = true;
    std::string detail;

    // (a) MCG gradient vs finite differences, analytic predictor, 64-bit.
    {
        const int n = 64;
        GaussianPriorSpec prior;
        prior.frame_length = n;
        prior.psd.resize(n / 2 + 1);
        Rng rr(11);
        for (auto& v : prior.psd) v = 0.4 + rr.uniform();
        GaussianMmsePredictor pred(prior);
        const auto sch = linear_logsnr_schedule({10.0, -10.0}, 10);
        LowpassOperator op(block_mask(16000, n));
        const auto x = sample_prior(prior, rr);
        const auto yhat = op.compose(x);
        const auto z = rr.normal_vector(n);
        const int t = 6;
        const auto g = mcg_gradient(pred, sch, t, z, yhat, op);
        auto objective = [&](const std::vector<double>& zz) {
            const auto xh = pred.denoise(zz, sch.delta(t));
            const auto fx = op.compose(xh);
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += (yhat[i] - fx[i]) * (yhat[i] - fx[i]);
            return acc;
        };
        double worst = 0.0;
        // the objective is exactly quadratic in z, so a large step carries no
        // curvature error and keeps roundoff far below the 1e-8 tolerance
        const double h = 1e-3;
        for (int idx : {0, 7, 21, 42, 63}) {
            auto zp = z, zm = z;
            zp[idx] += h;
            zm[idx] -= h;
            const double fd = (objective(zp) - objective(zm)) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - g[idx]) / std::max(1e-10, std::abs(fd)));
        }
        if (worst > 1e-8) pass = false;
        char b[64];
        std::snprintf(b, sizeof(b), "mcg rel err %.2e", worst);
        detail += b;
    }

    // (b) toy UDM predictor vjp vs 64-bit finite differences (< 1e-4)
    {
        ToyUdmConfig cfg{3, 8, {1, 2, 4}, 3, 16};
        auto params = toy_udm_init(cfg, 21);
        const auto layout = toy_udm_layout(cfg);
        Rng pr(22);
        const auto& ow = layout.find("out.w");
        for (std::size_t i = 0; i < ow.size; ++i)
            params[ow.offset + i] = static_cast<float>(pr.uniform(-0.4, 0.4));
        ToyUdmPredictor pred(cfg, params);
        Rng rr(23);
        const auto z = rr.normal_vector(48);
        const auto c = rr.normal_vector(48);
        const double delta = 1.9;
        const auto g = pred.vjp(z, delta, c);
        ToyUdmEngine<double> twin(cfg, params);
        auto val = [&](const std::vector<double>& zz) {
            const auto out = twin.forward(zz, delta);
            double acc = 0.0;
            for (std::size_t i = 0; i < out.size(); ++i) acc += out[i] * c[i];
            return acc;
        };
        double worst = 0.0;
        const double h = 1e-5;
        for (int idx : {0, 11, 24, 37, 47}) {
            auto zp = z, zm = z;
            zp[idx] += h;
            zm[idx] -= h;
            const double fd = (val(zp) - val(zm)) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - g[idx]) / std::max(1e-6, std::abs(fd)));
        }
        if (worst > 1e-4) pass = false;
        char b[64];
        std::snprintf(b, sizeof(b), ", udm-z rel err %.2e", worst);
        detail += b;
    }

    // (c) training gradient vs finite differences (< 1e-3)
    {
        ToyUdmConfig cfg{2, 6, {1, 2}, 3, 8};
        auto params = toy_udm_init(cfg, 24);
        const auto layout = toy_udm_layout(cfg);
        Rng pr(25);
        const auto& ow = layout.find("out.w");
        for (std::size_t i = 0; i < ow.size; ++i)
            params[ow.offset + i] = static_cast<float>(pr.uniform(-0.4, 0.4));
        const ScheduleEndpoints ep{10.0, 0.0};
        Rng rr(26);
        const auto x = rr.normal_vector(32);
        const auto eps = rr.normal_vector(32);
        const double ups = 4.1;
        const auto lg = continuous_diffusion_loss_grad(cfg, params, ep, x, eps, ups);
        auto loss_at = [&](const std::vector<float>& p) {
            const auto z = continuous_latent(ep, ups, x, eps);
            ToyUdmEngine<double> twin(cfg, p);
            const auto eh = twin.forward(z, ups);
            double sq = 0.0;
            for (std::size_t i = 0; i < eh.size(); ++i) {
                const double d = eps[i] - eh[i];
                sq += d * d;
            }
            return 0.5 * (ep.delta_max - ep.delta_min) * sq;
        };
        Rng pick(27);
        double worst = 0.0;
        int checked = 0;
        for (int trial = 0; trial < 400 && checked < 10; ++trial) {
            const std::size_t idx =
                static_cast<std::size_t>(pick.uniform() * static_cast<double>(params.size()));
            auto pp = params, pm = params;
            pp[idx] += 2e-4f;
            pm[idx] -= 2e-4f;
            const double denom = static_cast<double>(pp[idx]) - static_cast<double>(pm[idx]);
            const double fd = (loss_at(pp) - loss_at(pm)) / denom;
            if (std::abs(fd) < 1e-4) continue;  // skip near-dead coordinates
            worst = std::max(worst, std::abs(fd - lg.grad[idx]) / std::abs(fd));
            ++checked;
        }
        if (worst > 1e-3 || checked < 10) pass = false;
        char b[64];
        std::snprintf(b, sizeof(b), ", train-grad rel err %.2e", worst);
        detail += b;
    }
    report("A7", pass && timer.seconds() < 60.0, "gradient correctness: " + detail,
           timer.seconds());
}

// ---------------------------------------------------------------- A8
void run_a8() {
    Timer timer;
    bool pass = true;
    std::string detail;

    // sinc stopband and DC gain from the measured response
    {
        const auto spec = FilterSpec::sinc(16000, 8000);
        const auto resp = frequency_response(spec, 1601);  // 5 Hz grid
        const double dc = resp[0];
        const int idx_11 = static_cast<int>(std::lround(1.1 * 4000.0 / 8000.0 * 1600));
        const double stop_db = 20.0 * std::log10(resp[idx_11] + 1e-300);
        if (std::abs(dc - 1.0) > 1e-3) pass = false;
        if (stop_db > -60.0) pass = false;
        char b[96];
        std::snprintf(b, sizeof(b), "sinc DC %.5f, %.0f dB at 1.1x cutoff", dc, stop_db);
        detail += b;
    }
    // stft_mask masked bins exactly zero
    {
        const auto spec = FilterSpec::mask(16000, 8000, StftConfig{1024, 256, WindowKind::hann});
        LowpassOperator op(spec);
        Rng rng(31);
        const auto x = rng.normal_vector(8192);
        const auto frames = op.masked_frames(x);
        double worst = 0.0;
        for (const auto& f : frames)
            for (int k = op.first_masked_bin(); k < f.bin_count(); ++k)
                worst = std::max(worst, std::abs(f.bins[k]));
        if (worst != 0.0) pass = false;
        detail += ", mask bins max " + std::to_string(worst);
    }
    // zero phase: cross-correlation peak at lag 0
    {
        Rng rng(32);
        auto x = rng.normal_vector(4096);
        auto X = rfft(x);
        for (int k = static_cast<int>(0.3 * X.bin_count()); k < X.bin_count(); ++k)
            X.bins[k] = 0.0;
        x = irfft(X);
        const auto f = lowpass_compose(Waveform(x, 16000), FilterSpec::sinc(16000, 8000)).samples;
        double best = -1e300;
        int best_lag = -99;
        for (int lag = -6; lag <= 6; ++lag) {
            double acc = 0.0;
            for (std::size_t i = 600; i + 600 < x.size(); ++i)
                acc += x[i] * f[static_cast<std::size_t>(static_cast<long long>(i) + lag)];
            if (acc > best) {
                best = acc;
                best_lag = lag;
            }
        }
        if (best_lag != 0) pass = false;
        detail += ", xcorr peak lag " + std::to_string(best_lag);
    }
    // operator-level filter robustness: conditional sampler LSD under the two
    // filters differs by < 0.05 on the Gaussian oracle
    {
        const int n = 2048, T = 50;
        const auto prior = white_prior(n);
        GaussianMmsePredictor pred(prior);
        const auto sch = linear_logsnr_schedule({10.0, -10.0}, T);
        Rng xr(33);
        const auto x = sample_prior(prior, xr);
        const Waveform ref(x, 16000);

        LsdConfig lc;
        lc.frame_length = 256;
        lc.hop = 64;
        double scores[2] = {0.0, 0.0};
        int fi = 0;
        for (auto spec : {FilterSpec::sinc(16000, 8000), block_mask(16000, n)}) {
            SamplerConfig cfg;
            cfg.steps = T;
            cfg.eta = 0.0;
            cfg.filter = spec;
            const auto y = downsample(ref, spec);
            double acc = 0.0;
            const int reps = 6;
            for (int r = 0; r < reps; ++r) {
                Rng rng(6000 + r);  // same seeds for both filters
                const auto out = sample_conditional(pred, sch, y, cfg, rng);
                acc += lsd(ref, out, lc);
            }
            scores[fi++] = acc / reps;
        }
        const double diff = std::abs(scores[0] - scores[1]);
        if (diff >= 0.05) pass = false;
        char b[128];
        std::snprintf(b, sizeof(b), ", sampler LSD sinc %.4f vs mask %.4f (diff %.4f < 0.05)",
                      scores[0], scores[1], diff);
        detail += b;
    }
    report("A8", pass, "filter contracts: " + detail, timer.seconds());
}

// ---------------------------------------------------------------- A9
void run_a9() {
    Timer timer;
    const int n = 16, T = 50;
    const auto prior = white_prior(n);
    GaussianMmsePredictor pred(prior);
    const auto sch = linear_logsnr_schedule({10.0, 0.0}, T);
    bool pass = true;
    double min_gap = 1e300;
    for (int i = 0; i < 100; ++i) {
        Rng rng(7000 + i);
        const auto x = sample_prior(prior, rng);
        Rng vr(7500 + i);
        const auto rep = vlb(pred, sch, x, vr, 8);
        const double nll = gaussian_nll(prior, x);
        const double gap = rep.total - nll;
        min_gap = std::min(min_gap, gap);
        if (gap < 0.0) pass = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "VLB bound: -VLB >= -log p for 100/100 samples, min gap %.3f nats", min_gap);
    report("A9", pass, buf, timer.seconds());
}

// ---------------------------------------------------------------- A10
void run_a10() {
    Timer timer;
    const int rate = 4000;
    ToyUdmConfig mcfg;
    TrainConfig tcfg;
    tcfg.steps = 20000;
    tcfg.batch = 4;
    tcfg.segment_length = 256;
    tcfg.seed = 77;
    Rng cr(8000);
    std::vector<Waveform> corpus;
    for (int i = 0; i < 8; ++i) corpus.push_back(make_ar1(32768, rate, 0.9, 0.25, cr));

    const auto tr = train(tcfg, mcfg, corpus, toy_udm_init(mcfg, 78));
    ToyUdmPredictor pred(mcfg, tr.ema_params);

    // (a) continuous loss vs the zero predictor, shared draws
    Rng er(8100);
    double trained_loss = 0.0, zero_loss = 0.0;
    const int evals = 300;
    for (int i = 0; i < evals; ++i) {
        Rng seg_rng(8200 + i);
        const auto seg = make_ar1(tcfg.segment_length, rate, 0.9, 0.25, seg_rng);
        const double ups = er.uniform(tcfg.endpoints.delta_min, tcfg.endpoints.delta_max);
        const auto eps = er.normal_vector(seg.size());
        const auto z = continuous_latent(tcfg.endpoints, ups, seg.samples, eps);
        const auto eh = pred.predict(z, ups);
        double sq_t = 0.0, sq_z = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            sq_t += (eps[k] - eh[k]) * (eps[k] - eh[k]);
            sq_z += eps[k] * eps[k];
        }
        trained_loss += 5.0 * sq_t;
        zero_loss += 5.0 * sq_z;
    }
    trained_loss /= evals;
    zero_loss /= evals;
    const double improvement = 1.0 - trained_loss / zero_loss;

    // (b) conditional sampling beats the spline baseline in LSD on held-out data
    const auto sch = linear_logsnr_schedule(tcfg.endpoints, 50);
    SamplerConfig cfg;
    cfg.steps = 50;
    cfg.eta = 0.5;
    cfg.filter = FilterSpec::sinc(rate, rate / 2);
    LsdConfig lc;
    lc.frame_length = 512;
    lc.hop = 128;
    double lsd_model = 0.0, lsd_spline = 0.0;
    const int utt = 4;
    for (int i = 0; i < utt; ++i) {
        Rng hr(8300 + i);
        const auto ref = make_ar1(8192, rate, 0.9, 0.25, hr);
        const auto y = downsample(ref, cfg.filter);
        Rng sr(8400 + i);
        const auto out = sample_conditional(pred, sch, y, cfg, sr);
        lsd_model += lsd(ref, out, lc);
        auto spl = spline_upsample(y, rate);
        spl.samples.resize(ref.samples.size(), 0.0);
        lsd_spline += lsd(ref, spl, lc);
    }
    lsd_model /= utt;
    lsd_spline /= utt;

    const bool pass = improvement >= 0.30 && lsd_model < lsd_spline && timer.seconds() < 1800.0;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "toy training: loss %.1f vs zero-predictor %.1f (%.0f%% better, need >=30%%); "
                  "LSD model %.3f < spline %.3f",
                  trained_loss, zero_loss, 100.0 * improvement, lsd_model, lsd_spline);
    report("A10", pass, buf, timer.seconds());
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::string(argv[1]) == "--quick";
    std::printf("acceptance suite (%s)\n", quick ? "quick" : "full");
    run_a6();
    run_a7();
    run_a5();
    run_a9();
    run_a8();
    run_a1();
    run_a2();
    run_a4();
    if (!quick) {
        run_a3();
        run_a10();
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
