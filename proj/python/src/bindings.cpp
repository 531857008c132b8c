#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <stdexcept>

#include "diffsr/checkpoint.hpp"
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

namespace py = pybind11;
using namespace diffsr;

namespace {

std::vector<double> to_vec(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
    const double* p = a.data();
    return std::vector<double>(p, p + a.shape(0));
}

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

FilterSpec make_filter(const std::string& kind, int source_rate, int target_rate, int stft_frame,
                       int stft_hop, const std::string& stft_window) {
    if (kind == "sinc") return FilterSpec::sinc(source_rate, target_rate);
    if (kind == "stft")
        return FilterSpec::mask(source_rate, target_rate,
                                StftConfig{stft_frame, stft_hop, window_from_string(stft_window)});
    throw std::invalid_argument("filter kind must be 'sinc' or 'stft'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "diffusion-based audio bandwidth extension core";

    py::class_<ScheduleEndpoints>(m, "ScheduleEndpoints")
        .def(py::init<double, double>(), py::arg("delta_max") = 10.0, py::arg("delta_min") = 0.0)
        .def_readwrite("delta_max", &ScheduleEndpoints::delta_max)
        .def_readwrite("delta_min", &ScheduleEndpoints::delta_min);

    py::class_<NoiseSchedule>(m, "NoiseSchedule")
        .def_property_readonly("steps", &NoiseSchedule::steps)
        .def("delta", &NoiseSchedule::delta)
        .def("alpha", &NoiseSchedule::alpha)
        .def("sigma", &NoiseSchedule::sigma)
        .def("posterior", [](const NoiseSchedule& s, int t) {
            const auto pc = s.posterior(t);
            return py::make_tuple(pc.coef_z, pc.coef_x, pc.var);
        });

    m.def("linear_logsnr_schedule", &linear_logsnr_schedule, py::arg("endpoints"),
          py::arg("steps"));

    py::class_<Waveform>(m, "Waveform")
        .def(py::init([](py::array_t<double, py::array::c_style | py::array::forcecast> samples,
                         int rate) { return Waveform(to_vec(samples), rate); }),
             py::arg("samples"), py::arg("sample_rate"))
        .def_property_readonly("samples", [](const Waveform& w) { return to_array(w.samples); })
        .def_readonly("sample_rate", &Waveform::sample_rate)
        .def("__len__", [](const Waveform& w) { return w.samples.size(); });

    m.def("read_wav", &read_wav, py::arg("path"));
    m.def(
        "write_wav",
        [](const std::string& path, const Waveform& w, const std::string& format) {
            write_wav(path, w, format == "pcm16" ? WavFormat::pcm16 : WavFormat::float32);
        },
        py::arg("path"), py::arg("waveform"), py::arg("format") = "float32");

    m.def("downsample",
          [](const Waveform& x, int target_rate, const std::string& kind, int stft_frame,
             int stft_hop, const std::string& stft_window) {
              return downsample(x, make_filter(kind, x.sample_rate, target_rate, stft_frame,
                                               stft_hop, stft_window));
          },
          py::arg("x"), py::arg("target_rate"), py::arg("kind") = "sinc",
          py::arg("stft_frame") = 1024, py::arg("stft_hop") = 256, py::arg("stft_window") = "hann");
    m.def("upsample",
          [](const Waveform& y, int target_rate, const std::string& kind, int stft_frame,
             int stft_hop, const std::string& stft_window) {
              return upsample(y, target_rate,
                              make_filter(kind, target_rate, y.sample_rate, stft_frame, stft_hop,
                                          stft_window));
          },
          py::arg("y"), py::arg("target_rate"), py::arg("kind") = "sinc",
          py::arg("stft_frame") = 1024, py::arg("stft_hop") = 256, py::arg("stft_window") = "hann");
    m.def("lowpass_compose",
          [](const Waveform& x, int intermediate_rate, const std::string& kind, int stft_frame,
             int stft_hop, const std::string& stft_window) {
              return lowpass_compose(x, make_filter(kind, x.sample_rate, intermediate_rate,
                                                    stft_frame, stft_hop, stft_window));
          },
          py::arg("x"), py::arg("intermediate_rate"), py::arg("kind") = "sinc",
          py::arg("stft_frame") = 1024, py::arg("stft_hop") = 256, py::arg("stft_window") = "hann");
    m.def("spline_upsample", &spline_upsample, py::arg("y"), py::arg("target_rate"));

    m.def("lsd",
          [](const Waveform& ref, const Waveform& est, int frame, int hop) {
              LsdConfig cfg;
              cfg.frame_length = frame;
              cfg.hop = hop;
              return lsd(ref, est, cfg);
          },
          py::arg("reference"), py::arg("estimate"), py::arg("frame") = 2048,
          py::arg("hop") = 512);
    m.def("lsd_lf",
          [](const Waveform& ref, const Waveform& est, int h, int frame, int hop) {
              LsdConfig cfg;
              cfg.frame_length = frame;
              cfg.hop = hop;
              return lsd_lf(ref, est, h, cfg);
          },
          py::arg("reference"), py::arg("estimate"), py::arg("h"), py::arg("frame") = 2048,
          py::arg("hop") = 512);
    m.def("band_energy_ratio", &band_energy_ratio, py::arg("x"), py::arg("split_hz"));

    py::class_<Checkpoint>(m, "Checkpoint")
        .def_readonly("sample_rate", &Checkpoint::sample_rate)
        .def_property_readonly("delta_max",
                               [](const Checkpoint& c) { return c.endpoints.delta_max; })
        .def_property_readonly("delta_min",
                               [](const Checkpoint& c) { return c.endpoints.delta_min; })
        .def_readonly("ema", &Checkpoint::ema);
    m.def("load_checkpoint", &load_checkpoint, py::arg("path"));

    m.def(
        "super_resolve",
        [](const Waveform& y, const Checkpoint& ck, int steps, double eta, std::uint64_t seed,
           const std::string& filter_kind) {
            ToyUdmPredictor pred(ck.model, ck.params);
            const auto sch = linear_logsnr_schedule(ck.endpoints, steps);
            SamplerConfig cfg;
            cfg.steps = steps;
            cfg.eta = eta;
            cfg.seed = seed;
            if (filter_kind == "sinc")
                cfg.filter = FilterSpec::sinc(ck.sample_rate, y.sample_rate);
            else
                cfg.filter = FilterSpec::mask(ck.sample_rate, y.sample_rate);
            Rng rng(seed);
            return sample_conditional(pred, sch, y, cfg, rng);
        },
        py::arg("y"), py::arg("checkpoint"), py::arg("steps") = 50, py::arg("eta") = 0.0,
        py::arg("seed") = 0, py::arg("filter_kind") = "sinc",
        "Conditional sampling of the checkpointed model to its native rate.");

    m.def(
        "super_resolve_gaussian",
        [](const Waveform& y, py::array_t<double, py::array::c_style | py::array::forcecast> psd,
           int target_rate, int steps, double eta, std::uint64_t seed, double delta_max,
           double delta_min, const std::string& filter_kind, int stft_frame, int stft_hop,
           const std::string& stft_window) {
            GaussianPriorSpec prior;
            prior.psd = to_vec(psd);
            prior.frame_length = static_cast<int>(2 * (prior.psd.size() - 1));
            GaussianMmsePredictor pred(prior);
            const auto sch = linear_logsnr_schedule({delta_max, delta_min}, steps);
            SamplerConfig cfg;
            cfg.steps = steps;
            cfg.eta = eta;
            cfg.seed = seed;
            cfg.filter = make_filter(filter_kind, target_rate, y.sample_rate, stft_frame,
                                     stft_hop, stft_window);
            Rng rng(seed);
            return sample_conditional(pred, sch, y, cfg, rng);
        },
        py::arg("y"), py::arg("psd"), py::arg("target_rate"), py::arg("steps") = 50,
        py::arg("eta") = 0.0, py::arg("seed") = 0, py::arg("delta_max") = 10.0,
        py::arg("delta_min") = -10.0, py::arg("filter_kind") = "stft",
        py::arg("stft_frame") = 1024, py::arg("stft_hop") = 256, py::arg("stft_window") = "hann",
        "Conditional sampling with the analytic Gaussian predictor; the psd has "
        "frame_length/2 + 1 entries and pins the latent length.");

    m.def(
        "sample_unconditional_gaussian",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> psd, int steps,
           std::uint64_t seed, double delta_max, double delta_min) {
            GaussianPriorSpec prior;
            prior.psd = to_vec(psd);
            prior.frame_length = static_cast<int>(2 * (prior.psd.size() - 1));
            GaussianMmsePredictor pred(prior);
            const auto sch = linear_logsnr_schedule({delta_max, delta_min}, steps);
            Rng rng(seed);
            return to_array(sample_unconditional(pred, sch, prior.frame_length, rng));
        },
        py::arg("psd"), py::arg("steps") = 1000, py::arg("seed") = 0, py::arg("delta_max") = 10.0,
        py::arg("delta_min") = -10.0);

    m.def(
        "train_toy_udm",
        [](const std::vector<Waveform>& corpus, const std::string& out_path, int steps, int batch,
           int segment_length, double learning_rate, double ema_momentum, std::uint64_t seed) {
            if (corpus.empty()) throw std::invalid_argument("empty corpus");
            ToyUdmConfig mcfg;
            TrainConfig tcfg;
            tcfg.steps = steps;
            tcfg.batch = batch;
            tcfg.segment_length = segment_length;
            tcfg.learning_rate = learning_rate;
            tcfg.ema_momentum = ema_momentum;
            tcfg.seed = seed;
            const auto result = train(tcfg, mcfg, corpus, toy_udm_init(mcfg, seed));
            Checkpoint ck;
            ck.model = mcfg;
            ck.endpoints = tcfg.endpoints;
            ck.sample_rate = corpus.front().sample_rate;
            ck.ema = true;
            ck.params = result.ema_params;
            save_checkpoint(out_path, ck);
            return result.history.empty() ? 0.0 : result.history.back().ema_loss;
        },
        py::arg("corpus"), py::arg("out_path"), py::arg("steps") = 2000, py::arg("batch") = 4,
        py::arg("segment_length") = 256, py::arg("learning_rate") = 0.0002,
        py::arg("ema_momentum") = 0.9999, py::arg("seed") = 0,
        "Small-scale training helper; writes an EMA checkpoint and returns the final "
        "smoothed loss.");

    m.def("make_ar1", [](std::size_t length, int rate, double coeff, double rms,
                         std::uint64_t seed) {
        Rng rng(seed);
        return make_ar1(length, rate, coeff, rms, rng);
    }, py::arg("length"), py::arg("sample_rate"), py::arg("coeff") = 0.9, py::arg("rms") = 0.25,
       py::arg("seed") = 0);
}
