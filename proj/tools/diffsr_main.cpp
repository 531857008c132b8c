// diffsr: degrade / sr / train / eval / validate-oracle / sample-uncond
//
// Exit codes: 0 success, 2 usage or input error, 3 numerical failure.
#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "diffsr/checkpoint.hpp"
#include "diffsr/config_json.hpp"
#include "diffsr/metrics.hpp"
#include "diffsr/oracle.hpp"
#include "diffsr/predictor.hpp"
#include "diffsr/resample.hpp"
#include "diffsr/rng.hpp"
#include "diffsr/sampler.hpp"
#include "diffsr/schedule.hpp"
#include "diffsr/toy_udm.hpp"
#include "diffsr/training.hpp"
#include "diffsr/wav.hpp"

using namespace diffsr;
using nlohmann::json;

namespace {

void write_sidecar(const std::string& out_path, const json& resolved) {
    std::ofstream f(out_path + ".json");
    f << resolved.dump(2) << "\n";
}

FilterSpec build_filter(const std::string& kind, int source_rate, int target_rate, int stft_frame,
                        int stft_hop, const std::string& stft_window) {
    if (kind == "sinc") return FilterSpec::sinc(source_rate, target_rate);
    if (kind == "stft")
        return FilterSpec::mask(source_rate, target_rate,
                                StftConfig{stft_frame, stft_hop, window_from_string(stft_window)});
    throw std::invalid_argument("--filter must be sinc or stft");
}

GaussianPriorSpec load_prior(const std::string& path, int& rate_out) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open prior file " + path);
    json j = json::parse(f);
    require_keys_subset(j, {"sample_rate", "psd"}, "gaussian prior");
    rate_out = j.at("sample_rate").get<int>();
    GaussianPriorSpec prior;
    prior.psd = j.at("psd").get<std::vector<double>>();
    prior.frame_length = static_cast<int>(2 * (prior.psd.size() - 1));
    prior.validate();
    return prior;
}

std::vector<Waveform> load_corpus_dir(const std::string& dir) {
    std::vector<Waveform> corpus;
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".wav") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) corpus.push_back(read_wav(p.string()));
    if (corpus.empty()) throw std::invalid_argument("no .wav files in " + dir);
    for (const auto& w : corpus)
        if (w.sample_rate != corpus.front().sample_rate)
            throw std::invalid_argument("corpus sample rates differ");
    return corpus;
}

json file_config(const std::string& path, const std::vector<std::string>& allowed) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config " + path);
    json j = json::parse(f);
    require_keys_subset(j, allowed, "config");
    return j;
}

/// Output path for input i of a batch: with one input, `out` is the file;
/// with several, `out` is a directory and files keep their stem + suffix.
std::string batch_out_path(const std::vector<std::string>& inputs, const std::string& out,
                           std::size_t i, const std::string& suffix) {
    if (inputs.size() == 1) return out;
    std::filesystem::create_directories(out);
    const auto stem = std::filesystem::path(inputs[i]).stem().string();
    return (std::filesystem::path(out) / (stem + suffix)).string();
}

/// Runs fn(i) over the inputs with up to `jobs` worker threads; the first
/// exception wins and is rethrown.
void parallel_over_files(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min<int>(jobs, static_cast<int>(count)); ++t)
        pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ----------------------------------------------------------------- degrade
int cmd_degrade(const std::vector<std::string>& inputs, const std::string& out, int target_rate,
                const std::string& filter_kind, int stft_frame, int stft_hop,
                const std::string& stft_window, bool pcm16, int jobs) {
    parallel_over_files(inputs.size(), jobs, [&](std::size_t i) {
        const std::string& in = inputs[i];
        const std::string out_path = batch_out_path(inputs, out, i, ".low.wav");
        const auto x = read_wav(in);
        if (target_rate == x.sample_rate) {
            // passthrough plus sidecar
            write_wav(out_path, x, pcm16 ? WavFormat::pcm16 : WavFormat::float32);
            json side{{"command", "degrade"}, {"input", in}, {"output", out_path},
                      {"target_rate", target_rate}, {"passthrough", true}};
            write_sidecar(out_path, side);
            return;
        }
        const auto spec = build_filter(filter_kind, x.sample_rate, target_rate, stft_frame,
                                       stft_hop, stft_window);
        const auto y = downsample(x, spec);
        write_wav(out_path, y, pcm16 ? WavFormat::pcm16 : WavFormat::float32);
        json side{{"command", "degrade"},
                  {"input", in},
                  {"output", out_path},
                  {"filter", filter_spec_to_json(spec)}};
        write_sidecar(out_path, side);
    });
    return 0;
}

// ----------------------------------------------------------------- sr
int cmd_sr(const std::vector<std::string>& inputs, const std::string& out,
           const std::string& ckpt_path, const std::string& prior_path, int steps, double eta,
           std::uint64_t seed, const std::string& filter_kind, int stft_frame, int stft_hop,
           const std::string& stft_window, const std::string& trace_path, bool pcm16, int jobs) {
    std::optional<Checkpoint> ckpt;
    if (!ckpt_path.empty()) ckpt = load_checkpoint(ckpt_path);
    else if (prior_path.empty()) throw std::invalid_argument("need --checkpoint or --gaussian-prior");

    parallel_over_files(inputs.size(), jobs, [&](std::size_t i) {
        const std::string& in = inputs[i];
        const std::string out_path = batch_out_path(inputs, out, i, ".sr.wav");
        const auto y = read_wav(in);
        std::unique_ptr<NoisePredictor> predictor;
        ScheduleEndpoints endpoints{10.0, 0.0};
        int target_rate = 0;
        json model_info;
        if (ckpt) {
            if (ckpt->sample_rate <= y.sample_rate)
                throw std::invalid_argument("checkpoint rate must exceed the input rate");
            predictor = std::make_unique<ToyUdmPredictor>(ckpt->model, ckpt->params);
            endpoints = ckpt->endpoints;
            target_rate = ckpt->sample_rate;
            model_info = {{"checkpoint", ckpt_path}, {"ema", ckpt->ema}};
        } else {
            int prior_rate = 0;
            auto prior = load_prior(prior_path, prior_rate);
            if (prior_rate <= y.sample_rate)
                throw std::invalid_argument("prior rate must exceed the input rate");
            target_rate = prior_rate;
            const std::size_t n_out = static_cast<std::size_t>(
                std::llround(static_cast<double>(y.samples.size()) * target_rate / y.sample_rate));
            if (n_out % 2 != 0)
                throw std::invalid_argument(
                    "output length would be odd; trim the input by one sample");
            prior = prior.resampled(static_cast<int>(n_out));
            predictor = std::make_unique<GaussianMmsePredictor>(prior);
            endpoints = {10.0, -10.0};  // oracle default: full forgetting at t = T
            model_info = {{"gaussian_prior", prior_path}};
        }

        const auto spec = build_filter(filter_kind, target_rate, y.sample_rate, stft_frame,
                                       stft_hop, stft_window);
        SamplerConfig cfg;
        cfg.steps = steps;
        cfg.eta = eta;
        cfg.seed = seed;
        cfg.filter = spec;
        const auto sch = linear_logsnr_schedule(endpoints, steps);
        SamplerTrace trace;
        Rng rng(seed, /*stream=*/i);  // independent stream per file
        const auto result = sample_conditional(*predictor, sch, y, cfg, rng,
                                               trace_path.empty() ? nullptr : &trace);
        write_wav(out_path, result, pcm16 ? WavFormat::pcm16 : WavFormat::float32);
        if (!trace_path.empty()) {
            const std::string tp =
                inputs.size() == 1 ? trace_path : out_path + ".trace.jsonl";
            std::ofstream tf(tp);
            for (const auto& s : trace.steps)
                tf << json{{"t", s.t}, {"residual", s.residual}, {"grad_norm", s.grad_norm}}.dump()
                   << "\n";
        }
        json side{{"command", "sr"},
                  {"input", in},
                  {"output", out_path},
                  {"steps", steps},
                  {"eta", eta},
                  {"seed", seed},
                  {"rng_stream", i},
                  {"model", model_info},
                  {"schedule",
                   {{"delta_max", endpoints.delta_max}, {"delta_min", endpoints.delta_min}}},
                  {"filter", filter_spec_to_json(spec)}};
        write_sidecar(out_path, side);
    });
    return 0;
}

// ----------------------------------------------------------------- train
int cmd_train(const std::string& data_dir, const std::string& synthetic, int rate, int count,
              int length, const std::string& out, int steps, int batch, int segment, double lr,
              double ema, std::uint64_t seed, const std::string& log_path) {
    std::vector<Waveform> corpus;
    if (!data_dir.empty()) {
        corpus = load_corpus_dir(data_dir);
    } else {
        Rng rng(seed, /*stream=*/0xda7a);
        for (int i = 0; i < count; ++i) {
            if (synthetic == "ar1") {
                corpus.push_back(make_ar1(length, rate, 0.9, 0.25, rng));
            } else if (synthetic == "harmonic") {
                corpus.push_back(make_harmonic(length, rate, 100.0 + 30.0 * i, 40, 0.22, rng));
            } else if (synthetic == "chirp") {
                corpus.push_back(make_chirp(length, rate, 50.0 + 20.0 * i, rate * 0.45, 0.22));
            } else if (synthetic == "mixed") {
                const int pick = i % 3;
                if (pick == 0) corpus.push_back(make_ar1(length, rate, 0.9, 0.25, rng));
                else if (pick == 1)
                    corpus.push_back(make_harmonic(length, rate, 100.0 + 30.0 * i, 40, 0.22, rng));
                else
                    corpus.push_back(make_chirp(length, rate, 50.0 + 20.0 * i, rate * 0.45, 0.22));
            } else {
                throw std::invalid_argument("--synthetic must be ar1, harmonic, chirp or mixed");
            }
        }
    }

    ToyUdmConfig mcfg;
    TrainConfig tcfg;
    tcfg.steps = steps;
    tcfg.batch = batch;
    tcfg.segment_length = segment;
    tcfg.learning_rate = lr;
    tcfg.ema_momentum = ema;
    tcfg.seed = seed;

    std::ofstream log_file;
    if (!log_path.empty()) log_file.open(log_path);
    const auto result = train(tcfg, mcfg, corpus, toy_udm_init(mcfg, seed),
                              [&](const LossRecord& rec) {
                                  const json line{{"step", rec.step},
                                                  {"loss", rec.loss},
                                                  {"ema_loss", rec.ema_loss}};
                                  if (log_file.is_open()) log_file << line.dump() << "\n";
                                  if (rec.step % 1000 == 0 || rec.step == 1)
                                      std::fprintf(stderr, "step %d loss %.3f ema %.3f\n",
                                                   rec.step, rec.loss, rec.ema_loss);
                              });
    const json train_cfg{{"learning_rate", lr},       {"steps", steps},
                         {"batch", batch},            {"segment_length", segment},
                         {"ema_momentum", ema},       {"seed", seed},
                         {"adam_betas", {0.9, 0.999}}, {"adam_eps", 1e-8}};

    Checkpoint ck;
    ck.model = mcfg;
    ck.endpoints = tcfg.endpoints;
    ck.sample_rate = corpus.front().sample_rate;
    ck.ema = true;
    ck.params = result.ema_params;
    ck.train_config_json = train_cfg.dump();
    save_checkpoint(out, ck);

    Checkpoint raw = ck;
    raw.ema = false;
    raw.params = result.params;
    save_checkpoint(out + ".raw", raw);

    if (result.aborted) {
        std::fprintf(stderr, "training aborted at step %d (non-finite loss); wrote last good\n",
                     result.abort_step);
        return 3;
    }
    return 0;
}

// ----------------------------------------------------------------- eval
int cmd_eval(const std::vector<std::string>& files, int lf_cutoff, int frame, int hop,
             const std::string& csv_path, const std::string& json_path) {
    if (files.size() < 2 || files.size() % 2 != 0)
        throw std::invalid_argument("eval expects ref/est file pairs");
    LsdConfig cfg;
    cfg.frame_length = frame;
    cfg.hop = hop;
    json rows = json::array();
    double mean_lsd = 0.0, mean_lf = 0.0;
    const std::size_t pairs = files.size() / 2;
    for (std::size_t i = 0; i < pairs; ++i) {
        const auto ref = read_wav(files[2 * i]);
        const auto est = read_wav(files[2 * i + 1]);
        const double d = lsd(ref, est, cfg);
        double dlf = std::numeric_limits<double>::quiet_NaN();
        if (lf_cutoff > 0) dlf = lsd_lf(ref, est, lf_cutoff, cfg);
        rows.push_back({{"reference", files[2 * i]},
                        {"estimate", files[2 * i + 1]},
                        {"lsd", d},
                        {"lsd_lf", lf_cutoff > 0 ? json(dlf) : json(nullptr)}});
        mean_lsd += d;
        if (lf_cutoff > 0) mean_lf += dlf;
        std::printf("%s vs %s: LSD %.3f", files[2 * i].c_str(), files[2 * i + 1].c_str(), d);
        if (lf_cutoff > 0) std::printf("  LSD-LF %.3f", dlf);
        std::printf("\n");
    }
    mean_lsd /= pairs;
    std::printf("mean LSD %.3f\n", mean_lsd);
    if (!csv_path.empty()) {
        std::ofstream c(csv_path);
        c << "reference,estimate,lsd,lsd_lf\n";
        for (const auto& r : rows) {
            c << r["reference"].get<std::string>() << "," << r["estimate"].get<std::string>()
              << "," << r["lsd"].get<double>() << ",";
            if (!r["lsd_lf"].is_null()) c << r["lsd_lf"].get<double>();
            c << "\n";
        }
        c << "mean,," << mean_lsd << ",";
        if (lf_cutoff > 0) c << mean_lf / pairs;
        c << "\n";
    }
    if (!json_path.empty()) {
        json out{{"utterances", rows},
                 {"mean_lsd", mean_lsd},
                 {"notes", "PESQ intentionally not implemented (out of scope)"}};
        if (lf_cutoff > 0) out["mean_lsd_lf"] = mean_lf / pairs;
        std::ofstream jf(json_path);
        jf << out.dump(2) << "\n";
    }
    return 0;
}

// ----------------------------------------------------------------- validate-oracle
int cmd_validate_oracle(bool quick, const std::string& report_path) {
    const int n = 64;
    const int T = quick ? 200 : 1000;
    const int draws = quick ? 600 : 2000;
    GaussianPriorSpec prior;
    prior.frame_length = n;
    prior.psd.assign(n / 2 + 1, 0.5);
    for (int k = 0; k < (n / 2 + 1) / 2; ++k) prior.psd[k] = 2.0;
    GaussianMmsePredictor pred(prior);
    const auto sch = linear_logsnr_schedule({10.0, -10.0}, T);

    // self-test first: posterior draws must pass before the sampler is judged
    Rng xr(777);
    const auto x = sample_prior(prior, xr);
    SamplerConfig cfg;
    cfg.steps = T;
    cfg.filter = FilterSpec::mask(16000, 8000, StftConfig{n, n, WindowKind::rectangular});
    const auto y = downsample(Waveform(x, 16000), cfg.filter);
    LowpassOperator op(cfg.filter);
    const auto post = analytic_conditional(prior, op.upsample(y), 16);

    std::vector<std::vector<double>> self;
    Rng selfr(1);
    for (int i = 0; i < std::max(600, draws / 2); ++i)
        self.push_back(sample_posterior(post, selfr));
    const auto self_rep = empirical_distribution_test(self, post, 10.0);
    if (!self_rep.pass) {
        std::fprintf(stderr, "oracle self-test FAILED; sampler not evaluated\n");
        return 3;
    }

    std::vector<std::vector<double>> samples;
    for (int i = 0; i < draws; ++i) {
        Rng rng(4300, static_cast<std::uint64_t>(i));
        samples.push_back(sample_conditional(pred, sch, y, cfg, rng).samples);
    }
    const auto rep = empirical_distribution_test(samples, post, 10.0);
    std::printf("oracle validation (%s): observed resid std %.5f, mean err %.5f, "
                "var ratio [%.3f, %.3f] -> %s\n",
                quick ? "quick" : "full", rep.max_observed_resid_std, rep.max_observed_mean_error,
                rep.min_var_ratio, rep.max_var_ratio, rep.pass ? "PASS" : "FAIL");
    if (!report_path.empty()) {
        json out{{"quick", quick},
                 {"draws", draws},
                 {"steps", T},
                 {"max_observed_resid_std", rep.max_observed_resid_std},
                 {"max_observed_mean_error", rep.max_observed_mean_error},
                 {"min_var_ratio", rep.min_var_ratio},
                 {"max_var_ratio", rep.max_var_ratio},
                 {"pass", rep.pass}};
        std::ofstream f(report_path);
        f << out.dump(2) << "\n";
    }
    return rep.pass ? 0 : 1;
}

// ----------------------------------------------------------------- sample-uncond
int cmd_sample_uncond(const std::string& out, const std::string& ckpt_path,
                      const std::string& prior_path, int length, int steps, std::uint64_t seed,
                      bool pcm16) {
    Rng rng(seed);
    Waveform w;
    if (!ckpt_path.empty()) {
        const auto ck = load_checkpoint(ckpt_path);
        ToyUdmPredictor pred(ck.model, ck.params);
        const auto sch = linear_logsnr_schedule(ck.endpoints, steps);
        w = Waveform(sample_unconditional(pred, sch, length, rng), ck.sample_rate);
    } else if (!prior_path.empty()) {
        int rate = 0;
        auto prior = load_prior(prior_path, rate);
        if (length % 2 != 0) throw std::invalid_argument("--length must be even");
        prior = prior.resampled(length);
        GaussianMmsePredictor pred(prior);
        const auto sch = linear_logsnr_schedule({10.0, -10.0}, steps);
        w = Waveform(sample_unconditional(pred, sch, length, rng), rate);
    } else {
        throw std::invalid_argument("need --checkpoint or --gaussian-prior");
    }
    write_wav(out, w, pcm16 ? WavFormat::pcm16 : WavFormat::float32);
    json side{{"command", "sample-uncond"}, {"output", out},     {"length", length},
              {"steps", steps},             {"seed", seed}};
    write_sidecar(out, side);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"diffusion-based audio bandwidth extension"};
    app.require_subcommand(1);

    // degrade
    auto* deg = app.add_subcommand("degrade", "lowpass and downsample WAV files");
    std::vector<std::string> deg_in;
    std::string deg_out = "out.wav", deg_filter = "sinc", deg_window = "hann";
    int deg_rate = 0, deg_frame = 1024, deg_hop = 256, deg_jobs = 1;
    bool deg_pcm16 = false;
    deg->add_option("input", deg_in, "input WAV (several allowed; --out becomes a directory)")
        ->required();
    deg->add_option("--target-rate", deg_rate, "output sample rate")->required();
    deg->add_option("--filter", deg_filter, "sinc | stft");
    deg->add_option("--stft-frame", deg_frame);
    deg->add_option("--stft-hop", deg_hop);
    deg->add_option("--stft-window", deg_window);
    deg->add_option("-o,--out", deg_out, "output WAV (or directory for batches)");
    deg->add_option("--jobs", deg_jobs, "worker threads for multi-file batches");
    deg->add_flag("--pcm16", deg_pcm16, "write 16-bit PCM instead of float32");

    // sr
    auto* sr = app.add_subcommand("sr", "super-resolve WAV files via conditional sampling");
    std::vector<std::string> sr_in;
    std::string sr_out = "sr.wav", sr_ckpt, sr_prior, sr_trace, sr_filter = "sinc",
                sr_window = "hann";
    int sr_steps = 50, sr_frame = 1024, sr_hop = 256, sr_jobs = 1;
    double sr_eta = 0.0;
    std::uint64_t sr_seed = 0;
    bool sr_pcm16 = false;
    sr->add_option("input", sr_in, "input WAV (several allowed; --out becomes a directory)")
        ->required();
    sr->add_option("--checkpoint", sr_ckpt, "trained model checkpoint");
    sr->add_option("--gaussian-prior", sr_prior, "analytic Gaussian prior JSON");
    sr->add_option("--steps", sr_steps, "diffusion steps T");
    sr->add_option("--eta", sr_eta, "MCG step size (0 disables)");
    sr->add_option("--seed", sr_seed);
    sr->add_option("--filter", sr_filter, "sinc | stft");
    sr->add_option("--stft-frame", sr_frame);
    sr->add_option("--stft-hop", sr_hop);
    sr->add_option("--stft-window", sr_window);
    sr->add_option("--trace", sr_trace, "write per-step JSONL diagnostics");
    sr->add_option("-o,--out", sr_out);
    sr->add_option("--jobs", sr_jobs, "worker threads for multi-file batches");
    sr->add_flag("--pcm16", sr_pcm16);

    // train
    auto* tr = app.add_subcommand("train", "train the toy predictor");
    std::string tr_data, tr_synth = "ar1", tr_out = "model.udm", tr_log, tr_config;
    int tr_rate = 4000, tr_count = 8, tr_length = 32768, tr_steps = 20000, tr_batch = 4,
        tr_segment = 256;
    double tr_lr = 0.0002, tr_ema = 0.9999;
    std::uint64_t tr_seed = 0;
    tr->add_option("--data", tr_data, "directory of training WAVs");
    tr->add_option("--synthetic", tr_synth, "ar1 | harmonic | chirp | mixed");
    tr->add_option("--rate", tr_rate, "synthetic corpus rate");
    tr->add_option("--count", tr_count, "synthetic corpus size");
    tr->add_option("--length", tr_length, "synthetic item length");
    tr->add_option("--steps", tr_steps);
    tr->add_option("--batch", tr_batch);
    tr->add_option("--segment", tr_segment);
    tr->add_option("--lr", tr_lr);
    tr->add_option("--ema", tr_ema);
    tr->add_option("--seed", tr_seed);
    tr->add_option("--log", tr_log, "JSONL loss log");
    tr->add_option("--config", tr_config, "JSON config (flags override)");
    tr->add_option("-o,--out", tr_out, "checkpoint path");

    // eval
    auto* ev = app.add_subcommand("eval", "LSD between reference/estimate pairs");
    std::vector<std::string> ev_files;
    std::string ev_csv, ev_json;
    int ev_lf = 0, ev_frame = 2048, ev_hop = 512;
    ev->add_option("files", ev_files, "ref est [ref est ...]")->required();
    ev->add_option("--lf-cutoff", ev_lf, "also report LSD below h/2 for this h (Hz)");
    ev->add_option("--frame", ev_frame);
    ev->add_option("--hop", ev_hop);
    ev->add_option("--csv", ev_csv);
    ev->add_option("--json", ev_json);

    // validate-oracle
    auto* vo = app.add_subcommand("validate-oracle", "Gaussian-oracle sampler validation");
    bool vo_quick = false;
    std::string vo_report;
    vo->add_flag("--quick", vo_quick, "reduced samples, < 60 s");
    vo->add_option("--report", vo_report, "write a JSON report");

    // sample-uncond
    auto* su = app.add_subcommand("sample-uncond", "unconditional sampling");
    std::string su_out = "uncond.wav", su_ckpt, su_prior;
    int su_length = 16000, su_steps = 50;
    std::uint64_t su_seed = 0;
    bool su_pcm16 = false;
    su->add_option("--checkpoint", su_ckpt);
    su->add_option("--gaussian-prior", su_prior);
    su->add_option("--length", su_length);
    su->add_option("--steps", su_steps);
    su->add_option("--seed", su_seed);
    su->add_option("-o,--out", su_out);
    su->add_flag("--pcm16", su_pcm16);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (deg->parsed())
            return cmd_degrade(deg_in, deg_out, deg_rate, deg_filter, deg_frame, deg_hop,
                               deg_window, deg_pcm16, deg_jobs);
        if (sr->parsed())
            return cmd_sr(sr_in, sr_out, sr_ckpt, sr_prior, sr_steps, sr_eta, sr_seed, sr_filter,
                          sr_frame, sr_hop, sr_window, sr_trace, sr_pcm16, sr_jobs);
        if (tr->parsed()) {
            if (!tr_config.empty()) {
                const auto cfg = file_config(
                    tr_config, {"steps", "batch", "segment", "lr", "ema", "seed", "rate", "count",
                                "length", "synthetic"});
                if (!tr->count("--steps") && cfg.contains("steps")) tr_steps = cfg["steps"];
                if (!tr->count("--batch") && cfg.contains("batch")) tr_batch = cfg["batch"];
                if (!tr->count("--segment") && cfg.contains("segment")) tr_segment = cfg["segment"];
                if (!tr->count("--lr") && cfg.contains("lr")) tr_lr = cfg["lr"];
                if (!tr->count("--ema") && cfg.contains("ema")) tr_ema = cfg["ema"];
                if (!tr->count("--seed") && cfg.contains("seed"))
                    tr_seed = cfg["seed"].get<std::uint64_t>();
                if (!tr->count("--rate") && cfg.contains("rate")) tr_rate = cfg["rate"];
                if (!tr->count("--count") && cfg.contains("count")) tr_count = cfg["count"];
                if (!tr->count("--length") && cfg.contains("length")) tr_length = cfg["length"];
                if (!tr->count("--synthetic") && cfg.contains("synthetic"))
                    tr_synth = cfg["synthetic"].get<std::string>();
            }
            return cmd_train(tr_data, tr_synth, tr_rate, tr_count, tr_length, tr_out, tr_steps,
                             tr_batch, tr_segment, tr_lr, tr_ema, tr_seed, tr_log);
        }
        if (ev->parsed()) return cmd_eval(ev_files, ev_lf, ev_frame, ev_hop, ev_csv, ev_json);
        if (vo->parsed()) return cmd_validate_oracle(vo_quick, vo_report);
        if (su->parsed())
            return cmd_sample_uncond(su_out, su_ckpt, su_prior, su_length, su_steps, su_seed,
                                     su_pcm16);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
