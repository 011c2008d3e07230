/*
Copyright 2026 The sddrt Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
// Python bindings. Audio crosses the boundary as 1-D float64 arrays plus a
// sample rate; results come back as plain dicts.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sddrt/demo.hpp"
#include "sddrt/error.hpp"
#include "sddrt/estimator.hpp"
#include "sddrt/eval.hpp"
#include "sddrt/level.hpp"
#include "sddrt/model_io.hpp"
#include "sddrt/rir_io.hpp"
#include "sddrt/room.hpp"
#include "sddrt/synth.hpp"
#include "sddrt/trainer.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using namespace sddrt;

namespace {

using Samples = py::array_t<double, py::array::c_style | py::array::forcecast>;

AudioBuffer ToBuffer(const Samples& samples, int sample_rate) {
  if (samples.ndim() != 1) throw InvalidArgument("audio must be a 1-D array");
  const double* data = samples.data();
  return AudioBuffer(std::vector<double>(data, data + samples.size()), sample_rate);
}

py::array_t<double> ToArray(const AudioBuffer& buffer) {
  py::array_t<double> out(static_cast<py::ssize_t>(buffer.size()));
  std::copy(buffer.samples().begin(), buffer.samples().end(), out.mutable_data());
  return out;
}

py::dict EstimateDict(const T60Estimate& est) {
  py::dict d;
  d["t60"] = est.t60;
  d["nsv"] = est.nsv.value;
  d["n_negative"] = est.nsv.n_negative;
  d["n_selected"] = est.nsv.n_selected;
  d["clamped"] = est.flags.clamped;
  d["saturated"] = est.flags.saturated;
  return d;
}

py::dict RecordDict(const EvalRecord& r) {
  py::dict d;
  d["item_id"] = r.item_id;
  d["variant"] = r.variant;
  d["noise_type"] = std::string(NoiseTypeName(r.noise_type));
  d["snr_db"] = r.snr_db;
  d["t60_true"] = r.t60_true;
  d["t60_est"] = r.t60_est;
  d["error"] = r.error;
  d["nsv"] = r.nsv;
  d["flags"] = r.flags;
  d["cpu_time"] = r.cpu_time;
  d["audio_duration"] = r.audio_duration;
  return d;
}

std::vector<AudioBuffer> ToBuffers(const std::vector<Samples>& utterances, int sample_rate) {
  std::vector<AudioBuffer> out;
  out.reserve(utterances.size());
  for (const Samples& u : utterances) out.push_back(ToBuffer(u, sample_rate));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Blind reverberation time estimation from decay-slope statistics";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());
  py::register_exception<EstimationError>(m, "EstimationError", error.ptr());

  py::class_<TrainedModel>(m, "Model")
      .def_property_readonly("variant",
                             [](const TrainedModel& t) { return std::string(VariantName(t.mapping.variant)); })
      .def_property_readonly("coefficients", [](const TrainedModel& t) { return t.mapping.coefficients; })
      .def_property_readonly("t60_train_max", [](const TrainedModel& t) { return t.mapping.t60_train_max; })
      .def_property_readonly("target",
                             [](const TrainedModel& t) { return std::string(MappingTargetName(t.mapping.target)); })
      .def_property_readonly("sample_rate", [](const TrainedModel& t) { return t.config.sample_rate; })
      .def_property_readonly("label", [](const TrainedModel& t) { return ModelLabel(t.mapping); })
      .def("save", [](const TrainedModel& t, const fs::path& path) { SaveModel(t, path); })
      .def("to_json", [](const TrainedModel& t) { return ModelToJson(t).dump(); })
      .def("__repr__", [](const TrainedModel& t) { return "<sddrt.Model " + ModelLabel(t.mapping) + ">"; });

  m.def("load_model", &LoadModel, py::arg("path"));

  m.def(
      "make_model",
      [](std::vector<double> coefficients, const std::string& variant, double t60_train_max,
         const std::string& target, int sample_rate) {
        TrainedModel t;
        t.mapping.coefficients = std::move(coefficients);
        t.mapping.variant = ParseVariant(variant);
        t.mapping.t60_train_max = t60_train_max;
        t.mapping.target = ParseMappingTarget(target);
        t.mapping.Validate();
        t.config = EstimatorConfig::Defaults(t.mapping.variant, sample_rate);
        return t;
      },
      py::arg("coefficients"), py::arg("variant") = "mel_band", py::arg("t60_train_max") = 0.95,
      py::arg("target") = "t60", py::arg("sample_rate") = 16000,
      "Model from explicit polynomial coefficients in log10(NSV), constant first.");

  m.def(
      "load_wav",
      [](const fs::path& path) {
        const AudioBuffer b = LoadWav(path);
        return py::make_tuple(ToArray(b), b.sample_rate());
      },
      py::arg("path"), "Returns (samples, sample_rate); int16 is scaled to [-1, 1).");
  m.def(
      "save_wav",
      [](const fs::path& path, const Samples& samples, int sample_rate) {
        SaveWav(ToBuffer(samples, sample_rate), path);
      },
      py::arg("path"), py::arg("samples"), py::arg("sample_rate"));

  m.def(
      "estimate",
      [](const Samples& samples, int sample_rate, const TrainedModel& model) {
        const T60Estimator estimator(model.mapping, model.config);
        const AudioBuffer audio = ToBuffer(samples, sample_rate);
        T60Estimate est;
        {
          py::gil_scoped_release release;
          est = estimator.Estimate(audio);
        }
        return EstimateDict(est);
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("model"));

  m.def(
      "measure_nsv",
      [](const Samples& samples, int sample_rate, const std::string& variant) {
        const SddFrontEnd fe(EstimatorConfig::Defaults(ParseVariant(variant), sample_rate));
        return fe.MeasureNsv(ToBuffer(samples, sample_rate)).value;
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("variant") = "mel_band");

  m.def(
      "spectrogram",
      [](const Samples& samples, int sample_rate, const std::string& variant) {
        const SddFrontEnd fe(EstimatorConfig::Defaults(ParseVariant(variant), sample_rate));
        const BandSpectrogram s = fe.Spectrogram(ToBuffer(samples, sample_rate));
        return py::make_tuple(s.values, s.band_centers, s.frame_times);
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("variant") = "mel_band",
      "Returns (values [bands x frames] in dB, band centres in Hz, frame times in s).");

  m.def(
      "decay_gradients",
      [](const Eigen::MatrixXd& values, double frame_period, int window_frames) {
        BandSpectrogram s;
        s.values = values;
        s.band_centers.resize(values.rows());
        for (Eigen::Index b = 0; b < values.rows(); ++b) s.band_centers[b] = static_cast<double>(b + 1);
        s.frame_times.resize(values.cols());
        for (Eigen::Index l = 0; l < values.cols(); ++l) s.frame_times[l] = frame_period * static_cast<double>(l);
        return DecayGradients(s, window_frames).slopes;
      },
      py::arg("values"), py::arg("frame_period") = 0.016, py::arg("window_frames") = 7,
      "Least-squares slope (dB/s) of every window of every row.");

  m.def(
      "nsv",
      [](const Eigen::MatrixXd& slopes, std::optional<BoolMatrix> selected) {
        GradientMatrix g;
        g.slopes = slopes;
        g.selected = selected ? *selected : BoolMatrix::Constant(slopes.rows(), slopes.cols(), true);
        const NsvStatistic s = ComputeNsv(g);
        return py::make_tuple(s.value, s.n_negative, s.n_selected);
      },
      py::arg("slopes"), py::arg("selected") = py::none(),
      "Negative-side variance of the selected slopes: (value, n_negative, n_selected).");

  m.def(
      "simulate_rir",
      [](double t60, std::optional<std::vector<double>> dims, std::optional<std::vector<double>> source,
         std::optional<std::vector<double>> mic, int sample_rate, std::optional<double> length,
         std::optional<double> absorption, double highpass_hz) {
        RoomSpec spec;
        auto set = [](Vec3& v, const std::optional<std::vector<double>>& in, const char* name) {
          if (!in) return;
          if (in->size() != 3) throw InvalidArgument(std::string(name) + " needs three values");
          for (int i = 0; i < 3; ++i) v[i] = (*in)[i];
        };
        set(spec.dims, dims, "dims");
        set(spec.source, source, "source");
        set(spec.mic, mic, "mic");
        spec.target_t60 = t60;
        spec.sample_rate = sample_rate;
        spec.rir_length = length.value_or(1.5 * t60 + 0.2);
        spec.absorption = absorption;
        spec.highpass_hz = highpass_hz;
        return ToArray(ImageMethodRir(spec).response);
      },
      py::arg("t60"), py::arg("dims") = py::none(), py::arg("source") = py::none(),
      py::arg("mic") = py::none(), py::arg("sample_rate") = 16000, py::arg("length") = py::none(),
      py::arg("absorption") = py::none(), py::arg("highpass_hz") = 50.0,
      "Shoebox-room impulse response by the image method.");

  m.def(
      "measure_t60",
      [](const Samples& rir, int sample_rate) { return MeasureT60(ToBuffer(rir, sample_rate)); },
      py::arg("rir"), py::arg("sample_rate"), "T60 from the Schroeder decay of an impulse response.");
  m.def(
      "schroeder_edc",
      [](const Samples& rir) {
        const double* d = rir.data();
        return SchroederEdc(std::span<const double>(d, rir.size())).curve;
      },
      py::arg("rir"));
  m.def(
      "convolve",
      [](const Samples& a, const Samples& b) {
        const std::vector<double> y =
            Convolve(std::span<const double>(a.data(), a.size()), std::span<const double>(b.data(), b.size()));
        return py::array_t<double>(static_cast<py::ssize_t>(y.size()), y.data());
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "active_speech_level",
      [](const Samples& samples, int sample_rate) { return ActiveSpeechLevel(ToBuffer(samples, sample_rate)); },
      py::arg("samples"), py::arg("sample_rate"));
  m.def(
      "mix_at_snr",
      [](const Samples& speech, const Samples& noise, double snr_db, int sample_rate) {
        return ToArray(MixAtSnr(ToBuffer(speech, sample_rate), ToBuffer(noise, sample_rate), snr_db));
      },
      py::arg("speech"), py::arg("noise"), py::arg("snr_db"), py::arg("sample_rate"));

  m.def(
      "synthesize_speech",
      [](std::uint64_t seed, double duration, int sample_rate, int talker) {
        return ToArray(SynthesizeSpeech(seed, duration, sample_rate, talker));
      },
      py::arg("seed"), py::arg("duration") = 4.0, py::arg("sample_rate") = 16000, py::arg("talker") = 0,
      "Speech-like test signal; no recordings needed.");

  m.def(
      "train",
      [](const std::vector<Samples>& utterances, int sample_rate, const std::string& variant,
         double t60_max, int rooms_per_t60, int order, const std::string& target, std::uint64_t seed,
         int jobs) {
        const std::vector<AudioBuffer> speech = ToBuffers(utterances, sample_rate);
        TrainingOptions options;
        options.t60_grid = DefaultT60Grid(t60_max);
        options.rooms_per_t60 = rooms_per_t60;
        options.seed = seed;
        options.jobs = jobs;
        TrainedModel model;
        model.config = EstimatorConfig::Defaults(ParseVariant(variant), sample_rate);
        FitResult fit;
        {
          py::gil_scoped_release release;
          const TrainingSet set = BuildTrainingSet(speech, options, model.config);
          fit = FitMapping(set.pairs, order, ParseMappingTarget(target), model.config.variant, t60_max);
        }
        model.mapping = fit.model;
        return py::make_tuple(model, fit.report.rms_residual, fit.report.n_pairs);
      },
      py::arg("utterances"), py::arg("sample_rate") = 16000, py::arg("variant") = "mel_band",
      py::arg("t60_max") = 0.95, py::arg("rooms_per_t60") = 3, py::arg("order") = 2,
      py::arg("target") = "log_t60", py::arg("seed") = 1, py::arg("jobs") = 1,
      "Fits a mapping on simulated rooms: returns (model, rms_residual_s, n_pairs).");

  m.def(
      "build_corpus",
      [](const fs::path& manifest, const fs::path& out_dir) {
        py::list items;
        for (const CorpusItem& item : BuildCorpus(manifest, out_dir)) {
          items.append(py::module_::import("json").attr("loads")(CorpusItemToJson(item).dump()));
        }
        return items;
      },
      py::arg("manifest"), py::arg("out_dir"));

  m.def(
      "evaluate",
      [](const fs::path& corpus_index, const TrainedModel& model, int jobs) {
        const std::vector<CorpusItem> items = LoadCorpus(corpus_index);
        EvalOptions options;
        options.jobs = jobs;
        options.sequential_timing = jobs <= 1;
        EvalRun run;
        {
          py::gil_scoped_release release;
          run = RunEval(items, model.mapping, model.config, options);
        }
        py::list records;
        for (const EvalRecord& r : run.records) records.append(RecordDict(r));
        py::list failures;
        for (const EvalFailure& f : run.failures) failures.append(py::make_tuple(f.item_id, f.message));
        return py::make_tuple(records, failures);
      },
      py::arg("corpus_index"), py::arg("model"), py::arg("jobs") = 1,
      "Runs a model over a corpus.json: returns (records, failures).");

  m.def(
      "run_demo",
      [](const fs::path& out_dir, std::uint64_t seed, int jobs) {
        DemoOptions options;
        options.out_dir = out_dir;
        options.seed = seed;
        options.jobs = jobs;
        DemoResult result;
        {
          py::gil_scoped_release release;
          result = RunDemo(options);
        }
        py::dict rtf;
        for (const RtfRow& r : result.rtf) rtf[py::str(r.variant)] = r.rtf;
        py::dict d;
        d["report_dir"] = result.report_dir;
        d["n_items"] = result.corpus.size();
        d["n_records"] = result.records.size();
        d["n_failures"] = result.failures.size();
        d["rtf"] = rtf;
        return d;
      },
      py::arg("out_dir"), py::arg("seed") = 1, py::arg("jobs") = 1,
      "Synthetic end-to-end run: trains, builds a corpus, evaluates, writes reports.");
}
