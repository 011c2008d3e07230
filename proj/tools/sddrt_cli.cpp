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
// Command-line front end: estimate, simulate-rir, build-corpus, train,
// evaluate, rtf and demo.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sddrt/audio.hpp"
#include "sddrt/demo.hpp"
#include "sddrt/error.hpp"
#include "sddrt/estimator.hpp"
#include "sddrt/eval.hpp"
#include "sddrt/format.hpp"
#include "sddrt/model_io.hpp"
#include "sddrt/parallel.hpp"
#include "sddrt/rir_io.hpp"
#include "sddrt/room.hpp"
#include "sddrt/trainer.hpp"

namespace fs = std::filesystem;
using namespace sddrt;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  bool quiet = false;
  int jobs = DefaultJobs();
};

void Info(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cerr << line << "\n";
}

struct EstimateArgs {
  std::string audio;
  std::string model;
  bool json = false;
  std::optional<std::string> variant;
};

int RunEstimate(const EstimateArgs& a) {
  const TrainedModel model = LoadModel(a.model);
  if (a.variant && ParseVariant(*a.variant) != model.mapping.variant) {
    throw InvalidArgument("model " + a.model + " is a " +
                          std::string(VariantName(model.mapping.variant)) + " model, not " +
                          *a.variant);
  }
  const AudioBuffer audio = LoadWav(a.audio);
  const T60Estimator estimator(model.mapping, model.config);
  const T60Estimate est = estimator.Estimate(audio);
  if (a.json) {
    nlohmann::json out = {{"t60_seconds", est.t60},
                          {"nsv", est.nsv.value},
                          {"flags", est.flags.ToString()},
                          {"n_negative", est.nsv.n_negative},
                          {"n_selected", est.nsv.n_selected}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "t60_seconds=" << FormatDouble(est.t60) << " nsv=" << FormatDouble(est.nsv.value)
              << " flags=" << est.flags.ToString() << "\n";
  }
  return 0;
}

struct SimulateArgs {
  std::string out;
  std::vector<double> dims;
  std::vector<double> source;
  std::vector<double> mic;
  double t60 = 0.5;
  int sample_rate = 16000;
  double length = 0.0;
  int order = 0;
  std::string absorption_model = "image_source";
  std::optional<double> absorption;
  double highpass = 50.0;
  bool random_room = false;
  bool normalize = false;
};

Vec3 ToVec3(const std::vector<double>& v, const char* what) {
  if (v.size() != 3) throw InvalidArgument(std::string(what) + " needs three values");
  return {v[0], v[1], v[2]};
}

int RunSimulate(const SimulateArgs& a, const Globals& g) {
  RoomSpec spec;
  if (a.random_room) {
    std::uint64_t state = g.seed;
    spec = DrawRoom(state, RoomRanges{}, a.t60, a.sample_rate);
  } else {
    spec.target_t60 = a.t60;
    spec.sample_rate = a.sample_rate;
    spec.rir_length = 1.5 * a.t60 + 0.2;
    if (!a.dims.empty()) spec.dims = ToVec3(a.dims, "--dims");
    if (!a.source.empty()) spec.source = ToVec3(a.source, "--source");
    if (!a.mic.empty()) spec.mic = ToVec3(a.mic, "--mic");
  }
  if (a.length > 0.0) spec.rir_length = a.length;
  spec.max_image_order = a.order;
  spec.absorption_model =
      a.absorption_model == "sabine" ? AbsorptionModel::kSabine : AbsorptionModel::kImageSource;
  if (a.absorption) spec.absorption = a.absorption;
  spec.highpass_hz = a.highpass;
  spec.Validate();

  Rir rir = ImageMethodRir(spec);
  if (a.normalize) {
    double energy = 0.0;
    for (double v : rir.response.samples()) energy += v * v;
    rir.response = rir.response.Scaled(1.0 / std::sqrt(energy));
  }
  const std::optional<double> t60 = SaveRir(rir, a.out);
  std::cout << "wrote " << a.out << " (" << rir.response.size() << " samples, alpha "
            << FormatDouble(spec.Absorption()) << ", measured T60 "
            << (t60 ? FormatDouble(*t60) + " s" : std::string("n/a")) << ")\n";
  if (rir.order_truncated) Warn("image order may be too small for the requested length");
  return 0;
}

struct CorpusArgs {
  std::string manifest;
  std::string out;
};

int RunBuildCorpus(const CorpusArgs& a) {
  const std::vector<CorpusItem> items = BuildCorpus(a.manifest, a.out);
  std::cout << "built " << items.size() << " items in " << a.out << "\n";
  return 0;
}

struct TrainArgs {
  std::string speech_dir;
  std::string out;
  std::string variant = "mel_band";
  double t60_max = 0.95;
  std::vector<double> grid;
  int rooms_per_t60 = 3;
  int order = 2;
  std::string target = "log_t60";
  std::string report;
  std::string pairs;
  int sample_rate = 16000;
};

int RunTrain(const TrainArgs& a, const Globals& g) {
  std::vector<AudioBuffer> speech;
  if (a.speech_dir.empty()) {
    Info(g, "no --speech-dir given, training on built-in synthetic speech");
    speech = DemoSpeech(g.seed, 2, 4, 2, 4.0, a.sample_rate);
  } else {
    speech = LoadSpeechDir(a.speech_dir);
  }
  const Variant variant = ParseVariant(a.variant);
  const EstimatorConfig config = EstimatorConfig::Defaults(variant, speech.front().sample_rate());

  TrainingOptions options;
  options.t60_grid = a.grid.empty() ? DefaultT60Grid(a.t60_max) : a.grid;
  options.rooms_per_t60 = a.rooms_per_t60;
  options.seed = g.seed;
  options.jobs = g.jobs;
  const TrainingSet set = BuildTrainingSet(speech, options, config);
  Info(g, "built " + std::to_string(set.pairs.size()) + " training pairs (" +
              std::to_string(set.skipped) + " skipped)");

  double grid_max = 0.0;
  for (double t : options.t60_grid) grid_max = std::max(grid_max, t);
  const FitResult fit = FitMapping(set.pairs, a.order, ParseMappingTarget(a.target), variant,
                                   grid_max);
  SaveModel({fit.model, config}, a.out);
  if (!a.report.empty()) {
    std::ofstream out(a.report);
    if (!out) throw IoError("cannot write " + a.report);
    out << TrainingReportJson(set, fit, options).dump(2) << "\n";
  }
  if (!a.pairs.empty()) WritePairsCsv(set.pairs, a.pairs);
  std::cout << "model " << ModelLabel(fit.model) << " written to " << a.out << " (n_pairs "
            << fit.report.n_pairs << ", rms residual " << FormatDouble(fit.report.rms_residual)
            << " s)\n";
  return 0;
}

struct EvaluateArgs {
  std::string corpus;
  std::vector<std::string> models;
  std::string out;
  bool parallel_timing = false;
};

int RunEvaluate(const EvaluateArgs& a, const Globals& g) {
  const std::vector<CorpusItem> items = LoadCorpus(a.corpus);
  std::vector<EvalRecord> records;
  std::size_t failures = 0;
  for (const std::string& path : a.models) {
    const TrainedModel model = LoadModel(path);
    EvalOptions options;
    options.jobs = g.jobs;
    options.sequential_timing = !a.parallel_timing;
    EvalRun run = RunEval(items, model.mapping, model.config, options);
    for (const EvalFailure& f : run.failures) {
      Info(g, ModelLabel(model.mapping) + ": " + f.item_id + " failed: " + f.message);
    }
    failures += run.failures.size();
    for (EvalRecord& r : run.records) records.push_back(std::move(r));
  }
  fs::create_directories(a.out);
  WriteRecordsCsv(records, fs::path(a.out) / "records.csv");
  WriteEstimatesCsv(records, fs::path(a.out) / "estimates.csv");
  const GroupedStats stats = BoxStatsByGroup(records);
  const std::vector<RtfRow> rtf = records.empty() ? std::vector<RtfRow>{} : RtfTable(records);
  WriteReport(stats, rtf, a.out);

  std::printf("%-18s %-17s %6s %9s %9s %9s %4s\n", "variant", "noise", "snr", "median", "q25",
              "q75", "n");
  for (const auto& [key, s] : stats) {
    std::printf("%-18s %-17s %6s %9.4f %9.4f %9.4f %4zu\n", key.variant.c_str(),
                key.noise_type.c_str(), FormatSnr(key.snr_db).c_str(), s.median, s.q25, s.q75,
                s.n);
  }
  if (!rtf.empty()) std::cout << "\n" << FormatRtfTable(rtf);
  std::cout << records.size() << " records, " << failures << " failures, reports in " << a.out
            << "\n";
  return 0;
}

int RunRtf(const std::string& records_path) {
  const std::vector<EvalRecord> records = ReadRecordsCsv(records_path);
  std::cout << FormatRtfTable(RtfTable(records));
  return 0;
}

int RunDemoCommand(const std::string& out, const Globals& g) {
  DemoOptions options;
  options.out_dir = out;
  options.seed = g.seed;
  options.jobs = g.jobs;
  if (!g.quiet) options.progress = [](const std::string& m) { std::cerr << m << "\n"; };
  const DemoResult result = RunDemo(options);
  std::cout << FormatRtfTable(result.rtf);
  std::cout << result.records.size() << " records, " << result.failures.size()
            << " failures, reports in " << result.report_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind reverberation time estimation from noisy reverberant speech", "sddrt"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read flags from a key=value (INI/TOML) file");
  app.set_version_flag("--version", "0.1.0");

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every randomized step")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress progress messages");
  app.add_option("--jobs", g.jobs, "Worker threads (default: logical cores)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::optional<std::string> stage;
  int rc = 0;

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate T60 of one audio file");
  estimate->add_option("audio", est.audio, "Noisy reverberant speech (WAV)")->required();
  estimate->add_option("--model", est.model, "Model file from 'train'")->required();
  estimate->add_flag("--json", est.json, "Print a JSON object instead of key=value");
  estimate->add_option("--variant", est.variant, "Refuse models of any other variant")
      ->check(CLI::IsMember({"full_band", "mel_band"}));

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate-rir", "Simulate a shoebox-room impulse response");
  simulate->add_option("--out", sim.out, "Output WAV (a .json sidecar is written beside it)")
      ->required();
  simulate->add_option("--t60", sim.t60, "Target T60 in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--dims", sim.dims, "Room dimensions x y z in meters")->expected(3);
  simulate->add_option("--source", sim.source, "Source position x y z")->expected(3);
  simulate->add_option("--mic", sim.mic, "Microphone position x y z")->expected(3);
  simulate->add_flag("--random-room", sim.random_room, "Draw room and positions from --seed");
  simulate->add_option("--sample-rate", sim.sample_rate)->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--length", sim.length, "Response length in seconds (default 1.5 T60 + 0.2)");
  simulate->add_option("--max-order", sim.order, "Image order per axis (0 = automatic)")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--absorption-model", sim.absorption_model)
      ->check(CLI::IsMember({"image_source", "sabine"}))
      ->capture_default_str();
  simulate->add_option("--absorption", sim.absorption, "Fixed absorption, overrides the model")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--highpass", sim.highpass, "High-pass cutoff in Hz (0 disables)")
      ->capture_default_str();
  simulate->add_flag("--normalize", sim.normalize, "Scale the response to unit energy");

  CorpusArgs corp;
  auto* build = app.add_subcommand("build-corpus", "Convolve and mix a manifest into a corpus");
  build->add_option("manifest", corp.manifest, "CSV: speech,rir,noise,snr_db,noise_type")
      ->required();
  build->add_option("--out", corp.out, "Output directory")->required();

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Fit an NSV to T60 mapping on simulated rooms");
  train->add_option("--speech-dir", tr.speech_dir, "Anechoic speech WAVs (default: synthetic)");
  train->add_option("--out", tr.out, "Model file to write")->required();
  train->add_option("--variant", tr.variant)
      ->check(CLI::IsMember({"full_band", "mel_band"}))
      ->capture_default_str();
  train->add_option("--t60-max", tr.t60_max, "Upper end of the default T60 grid")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--grid", tr.grid, "Explicit T60 grid (overrides --t60-max)");
  train->add_option("--rooms-per-t60", tr.rooms_per_t60)->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--order", tr.order, "Polynomial order")->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  train->add_option("--target", tr.target, "Fit T60 directly or its logarithm")
      ->check(CLI::IsMember({"t60", "log_t60"}))
      ->capture_default_str();
  train->add_option("--sample-rate", tr.sample_rate, "Rate of the synthetic speech")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--report", tr.report, "Training report JSON");
  train->add_option("--pairs", tr.pairs, "Training pairs CSV");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Run models over a corpus and report errors");
  evaluate->add_option("corpus", ev.corpus, "corpus.json from build-corpus")->required();
  evaluate->add_option("--model", ev.models, "Model file; repeat to compare")->required();
  evaluate->add_option("--out", ev.out, "Report directory")->required();
  evaluate->add_flag("--parallel-timing", ev.parallel_timing,
                     "Use --jobs workers; timings are then per-thread (sequential is the default)");

  std::string rtf_records;
  auto* rtf = app.add_subcommand("rtf", "Real-time factor table from evaluate output");
  rtf->add_option("records", rtf_records, "records.csv from evaluate")->required();

  std::string demo_out = "demo_out";
  auto* demo = app.add_subcommand("demo", "Train, build a synthetic corpus and evaluate");
  demo->add_option("--out", demo_out, "Output directory")->capture_default_str();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (g.quiet) SetWarningHandler([](std::string_view) {});
  try {
    if (*estimate) {
      stage = "estimate";
      rc = RunEstimate(est);
    } else if (*simulate) {
      stage = "simulate-rir";
      rc = RunSimulate(sim, g);
    } else if (*build) {
      stage = "build-corpus";
      rc = RunBuildCorpus(corp);
    } else if (*train) {
      stage = "train";
      rc = RunTrain(tr, g);
    } else if (*evaluate) {
      stage = "evaluate";
      rc = RunEvaluate(ev, g);
    } else if (*rtf) {
      stage = "rtf";
      rc = RunRtf(rtf_records);
    } else if (*demo) {
      stage = "demo";
      rc = RunDemoCommand(demo_out, g);
    }
  } catch (const EstimationError& e) {
    std::cerr << "sddrt " << stage.value_or("") << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "sddrt " << stage.value_or("") << ": " << e.what() << "\n";
    return 1;
  }
  return rc;
}
