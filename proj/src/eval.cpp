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
#include "sddrt/eval.hpp"

#include <time.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "sddrt/error.hpp"
#include "sddrt/format.hpp"
#include "sddrt/level.hpp"
#include "sddrt/parallel.hpp"
#include "sddrt/rir_io.hpp"
#include "sddrt/room.hpp"

namespace sddrt {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseDouble(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse " + what + " '" + text + "'");
  }
}

double ThreadCpuSeconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

std::ofstream OpenForWrite(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

// Header index by column name; throws when a required column is missing.
std::map<std::string, std::size_t> HeaderIndex(const std::vector<std::string>& header,
                                               std::initializer_list<const char*> required,
                                               const fs::path& path) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;
  for (const char* name : required) {
    if (!index.count(name)) {
      throw InvalidArgument(path.string() + ": missing column '" + name + "'");
    }
  }
  return index;
}

}  // namespace

std::string_view NoiseTypeName(NoiseType type) {
  switch (type) {
    case NoiseType::kAmbient:
      return "ambient";
    case NoiseType::kFan:
      return "fan";
    case NoiseType::kBabble:
      return "babble";
    case NoiseType::kSyntheticWhite:
      return "synthetic_white";
    case NoiseType::kSyntheticBabble:
      return "synthetic_babble";
  }
  return "ambient";
}

NoiseType ParseNoiseType(std::string_view name) {
  for (NoiseType t : {NoiseType::kAmbient, NoiseType::kFan, NoiseType::kBabble,
                      NoiseType::kSyntheticWhite, NoiseType::kSyntheticBabble}) {
    if (NoiseTypeName(t) == name) return t;
  }
  throw InvalidArgument("unknown noise type '" + std::string(name) + "'");
}

double ParseSnr(std::string_view text) {
  const std::string s(text);
  if (s == "inf" || s == "+inf" || s == "clean") return std::numeric_limits<double>::infinity();
  const double v = ParseDouble(s, "SNR");
  if (!std::isfinite(v)) throw InvalidArgument("SNR must be finite or 'inf'");
  return v;
}

std::string FormatSnr(double snr_db) {
  if (snr_db == std::numeric_limits<double>::infinity()) return "inf";
  return FormatDouble(snr_db);
}

std::vector<ManifestRow> ReadManifest(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot open manifest " + manifest.string());
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument(manifest.string() + ": empty manifest");
  const auto col = HeaderIndex(SplitCsvLine(line),
                               {"speech", "rir", "noise", "snr_db", "noise_type"}, manifest);
  const fs::path base = manifest.parent_path();
  std::vector<ManifestRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = SplitCsvLine(line);
    if (fields.size() < col.size()) {
      throw InvalidArgument(manifest.string() + ":" + std::to_string(line_no) +
                            ": expected " + std::to_string(col.size()) + " fields");
    }
    ManifestRow row;
    row.speech = (base / fields[col.at("speech")]).lexically_normal();
    row.rir = (base / fields[col.at("rir")]).lexically_normal();
    row.noise = (base / fields[col.at("noise")]).lexically_normal();
    row.snr_db = ParseSnr(fields[col.at("snr_db")]);
    row.noise_type = ParseNoiseType(fields[col.at("noise_type")]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void WriteManifest(std::span<const ManifestRow> rows, const fs::path& manifest) {
  auto out = OpenForWrite(manifest);
  const fs::path base = manifest.parent_path();
  auto rel = [&](const fs::path& p) { return p.lexically_relative(base).generic_string(); };
  out << "speech,rir,noise,snr_db,noise_type\n";
  for (const ManifestRow& r : rows) {
    out << rel(r.speech) << ',' << rel(r.rir) << ',' << rel(r.noise) << ',' << FormatSnr(r.snr_db)
        << ',' << NoiseTypeName(r.noise_type) << '\n';
  }
}

nlohmann::json CorpusItemToJson(const CorpusItem& item) {
  return {{"item_id", item.item_id},
          {"speech", item.speech_path.generic_string()},
          {"rir", item.rir_path.generic_string()},
          {"noise", item.noise_path.generic_string()},
          {"audio", item.audio_path.generic_string()},
          {"snr_db", FormatSnr(item.snr_db)},
          {"noise_type", NoiseTypeName(item.noise_type)},
          {"t60_true", item.t60_true}};
}

CorpusItem CorpusItemFromJson(const nlohmann::json& doc) {
  try {
    CorpusItem item;
    item.item_id = doc.at("item_id").get<std::string>();
    item.speech_path = doc.value("speech", std::string());
    item.rir_path = doc.value("rir", std::string());
    item.noise_path = doc.value("noise", std::string());
    item.audio_path = doc.at("audio").get<std::string>();
    const auto& snr = doc.at("snr_db");
    item.snr_db = snr.is_string() ? ParseSnr(snr.get<std::string>()) : snr.get<double>();
    item.noise_type = ParseNoiseType(doc.at("noise_type").get<std::string>());
    item.t60_true = doc.at("t60_true").get<double>();
    if (!(item.t60_true > 0.0)) throw InvalidArgument("item " + item.item_id + ": t60_true <= 0");
    return item;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed corpus item: ") + e.what());
  }
}

double RirT60(const fs::path& rir_path, const AudioBuffer& rir) {
  try {
    return MeasureT60(rir);
  } catch (const EstimationError& e) {
    if (auto t60 = ReadSidecarT60(rir_path)) return *t60;
    throw InvalidArgument("cannot determine T60 of " + rir_path.string() + ": " + e.what());
  }
}

std::vector<CorpusItem> BuildCorpus(const fs::path& manifest, const fs::path& out_dir) {
  const std::vector<ManifestRow> rows = ReadManifest(manifest);
  fs::create_directories(out_dir);

  std::map<fs::path, AudioBuffer> audio_cache;
  auto load = [&](const fs::path& p) -> const AudioBuffer& {
    auto it = audio_cache.find(p);
    if (it == audio_cache.end()) it = audio_cache.emplace(p, LoadWav(p)).first;
    return it->second;
  };
  std::map<fs::path, double> t60_cache;

  std::vector<CorpusItem> items;
  nlohmann::json index = nlohmann::json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ManifestRow& row = rows[i];
    char id[32];
    std::snprintf(id, sizeof id, "item_%04zu", i);
    CorpusItem item;
    item.item_id = id;
    item.speech_path = row.speech;
    item.rir_path = row.rir;
    item.noise_path = row.noise;
    item.snr_db = row.snr_db;
    item.noise_type = row.noise_type;
    item.audio_path = item.item_id + ".wav";

    try {
      const AudioBuffer& speech = load(row.speech);
      const AudioBuffer& rir = load(row.rir);
      const AudioBuffer& noise = load(row.noise);
      if (speech.sample_rate() != rir.sample_rate() ||
          speech.sample_rate() != noise.sample_rate()) {
        throw InvalidArgument("sample rate mismatch between speech, RIR and noise");
      }
      auto t60 = t60_cache.find(row.rir);
      if (t60 == t60_cache.end()) t60 = t60_cache.emplace(row.rir, RirT60(row.rir, rir)).first;
      item.t60_true = t60->second;

      const AudioBuffer reverberant = Convolve(speech, rir);
      const AudioBuffer mixed = MixAtSnr(reverberant, noise, row.snr_db);
      SaveWav(mixed, out_dir / item.audio_path);
    } catch (const Error& e) {
      throw InvalidArgument("manifest row " + std::to_string(i + 1) + " (" + item.item_id +
                            "): " + e.what());
    }

    // Sources are recorded relative to the corpus so the index does not
    // depend on where the corpus was built.
    CorpusItem stored = item;
    for (fs::path* p : {&stored.speech_path, &stored.rir_path, &stored.noise_path}) {
      *p = fs::proximate(*p, out_dir);
    }
    const nlohmann::json doc = CorpusItemToJson(stored);
    auto sidecar = OpenForWrite(out_dir / (item.item_id + ".json"));
    sidecar << doc.dump(2) << "\n";
    index.push_back(doc);
    item.audio_path = out_dir / item.audio_path;
    items.push_back(std::move(item));
  }
  auto out = OpenForWrite(out_dir / "corpus.json");
  out << nlohmann::json{{"items", index}}.dump(2) << "\n";
  return items;
}

std::vector<CorpusItem> LoadCorpus(const fs::path& index) {
  std::ifstream in(index);
  if (!in) throw IoError("cannot open corpus index " + index.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(index.string() + ": " + e.what());
  }
  std::vector<CorpusItem> items;
  for (const auto& entry : doc.at("items")) {
    CorpusItem item = CorpusItemFromJson(entry);
    for (fs::path* p : {&item.audio_path, &item.speech_path, &item.rir_path, &item.noise_path}) {
      if (!p->empty() && p->is_relative()) *p = index.parent_path() / *p;
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::string ModelLabel(const MappingModel& model) {
  return std::string(VariantName(model.variant)) + "-" + FormatDouble(model.t60_train_max);
}

EvalRun RunEval(std::span<const CorpusItem> items, const MappingModel& model,
                const EstimatorConfig& config, const EvalOptions& options) {
  const T60Estimator estimator(model, config);
  const std::string label = options.label.empty() ? ModelLabel(model) : options.label;

  struct Slot {
    std::optional<EvalRecord> record;
    std::string error;
  };
  std::vector<Slot> slots(items.size());
  const int jobs = options.sequential_timing ? 1 : options.jobs;
  ParallelFor(items.size(), jobs, [&](std::size_t i) {
    const CorpusItem& item = items[i];
    try {
      const AudioBuffer audio = LoadWav(item.audio_path);
      const double start = ThreadCpuSeconds();
      const T60Estimate est = estimator.Estimate(audio);
      const double cpu = ThreadCpuSeconds() - start;

      EvalRecord r;
      r.item_id = item.item_id;
      r.variant = label;
      r.noise_type = item.noise_type;
      r.snr_db = item.snr_db;
      r.t60_true = item.t60_true;
      r.t60_est = est.t60;
      r.error = est.t60 - item.t60_true;
      r.nsv = est.nsv.value;
      r.flags = est.flags.ToString();
      r.cpu_time = std::max(0.0, cpu);
      r.audio_duration = audio.duration();
      slots[i].record = std::move(r);
    } catch (const Error& e) {
      slots[i].error = e.what();
    }
  });

  EvalRun run;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].record) {
      run.records.push_back(std::move(*slots[i].record));
    } else {
      run.failures.push_back({items[i].item_id, slots[i].error});
    }
  }
  return run;
}

double Percentile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("percentile of empty data");
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxStats ComputeBoxStats(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("box statistics of an empty group");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxStats s;
  s.n = sorted.size();
  s.median = Percentile(sorted, 0.5);
  s.q25 = Percentile(sorted, 0.25);
  s.q75 = Percentile(sorted, 0.75);
  const double iqr = s.q75 - s.q25;
  const double lo_fence = s.q25 - 1.5 * iqr;
  const double hi_fence = s.q75 + 1.5 * iqr;
  s.whisker_lo = s.q25;
  s.whisker_hi = s.q75;
  bool have_lo = false;
  for (double v : sorted) {
    if (v < lo_fence || v > hi_fence) {
      ++s.n_outliers;
      continue;
    }
    if (!have_lo) {
      s.whisker_lo = v;
      have_lo = true;
    }
    s.whisker_hi = v;
  }
  return s;
}

namespace {

GroupKey KeyFor(const EvalRecord& r, GroupBy g) {
  return {g.variant ? r.variant : "*",
          g.noise_type ? std::string(NoiseTypeName(r.noise_type)) : "*",
          g.snr ? r.snr_db : std::numeric_limits<double>::quiet_NaN()};
}

// NaN never compares equal, so ungrouped SNR is keyed as -inf instead.
GroupKey Normalize(GroupKey key) {
  if (std::isnan(key.snr_db)) key.snr_db = -std::numeric_limits<double>::infinity();
  return key;
}

template <typename Field>
std::map<GroupKey, std::vector<double>> Collect(std::span<const EvalRecord> records, GroupBy g,
                                                Field field) {
  std::map<GroupKey, std::vector<double>> groups;
  for (const EvalRecord& r : records) groups[Normalize(KeyFor(r, g))].push_back(field(r));
  return groups;
}

std::string FormatGroupSnr(double snr_db) {
  return snr_db == -std::numeric_limits<double>::infinity() ? "*" : FormatSnr(snr_db);
}

}  // namespace

GroupedStats BoxStatsByGroup(std::span<const EvalRecord> records, GroupBy group_by) {
  GroupedStats out;
  for (const auto& [key, values] :
       Collect(records, group_by, [](const EvalRecord& r) { return r.error; })) {
    out.emplace(key, ComputeBoxStats(values));
  }
  return out;
}

std::map<GroupKey, double> MedianEstimateByGroup(std::span<const EvalRecord> records,
                                                 GroupBy group_by) {
  std::map<GroupKey, double> out;
  for (auto& [key, values] :
       Collect(records, group_by, [](const EvalRecord& r) { return r.t60_est; })) {
    std::sort(values.begin(), values.end());
    out.emplace(key, Percentile(values, 0.5));
  }
  return out;
}

double RealTimeFactor(std::span<const EvalRecord> records) {
  if (records.empty()) throw InvalidArgument("RTF of an empty record set");
  double cpu = 0.0;
  double duration = 0.0;
  for (const EvalRecord& r : records) {
    cpu += r.cpu_time;
    duration += r.audio_duration;
  }
  if (!(duration > 0.0)) throw InvalidArgument("total audio duration is zero");
  return cpu / duration;
}

std::vector<RtfRow> RtfTable(std::span<const EvalRecord> records) {
  std::map<std::string, std::vector<EvalRecord>> by_variant;
  for (const EvalRecord& r : records) by_variant[r.variant].push_back(r);
  std::vector<RtfRow> rows;
  for (const auto& [variant, recs] : by_variant) {
    RtfRow row;
    row.variant = variant;
    row.n = recs.size();
    for (const EvalRecord& r : recs) {
      row.cpu_time += r.cpu_time;
      row.audio_duration += r.audio_duration;
    }
    row.rtf = RealTimeFactor(recs);
    rows.push_back(row);
  }
  return rows;
}

void WriteRecordsCsv(std::span<const EvalRecord> records, const fs::path& path) {
  auto out = OpenForWrite(path);
  out << "item_id,variant,noise_type,snr_db,t60_true,t60_est,error,nsv,flags,cpu_time,"
         "audio_duration\n";
  for (const EvalRecord& r : records) {
    out << r.item_id << ',' << r.variant << ',' << NoiseTypeName(r.noise_type) << ','
        << FormatSnr(r.snr_db) << ',' << FormatDouble(r.t60_true) << ','
        << FormatDouble(r.t60_est) << ',' << FormatDouble(r.error) << ',' << FormatDouble(r.nsv)
        << ',' << r.flags << ',' << FormatDouble(r.cpu_time) << ','
        << FormatDouble(r.audio_duration) << '\n';
  }
}

std::vector<EvalRecord> ReadRecordsCsv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open records " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument(path.string() + ": empty records file");
  const auto col = HeaderIndex(SplitCsvLine(line),
                               {"item_id", "variant", "noise_type", "snr_db", "t60_true",
                                "t60_est", "cpu_time", "audio_duration"},
                               path);
  std::vector<EvalRecord> records;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = SplitCsvLine(line);
    if (f.size() < col.size()) throw InvalidArgument(path.string() + ": short row");
    EvalRecord r;
    r.item_id = f[col.at("item_id")];
    r.variant = f[col.at("variant")];
    r.noise_type = ParseNoiseType(f[col.at("noise_type")]);
    r.snr_db = ParseSnr(f[col.at("snr_db")]);
    r.t60_true = ParseDouble(f[col.at("t60_true")], "t60_true");
    r.t60_est = ParseDouble(f[col.at("t60_est")], "t60_est");
    r.error = col.count("error") ? ParseDouble(f[col.at("error")], "error") : r.t60_est - r.t60_true;
    if (col.count("nsv")) r.nsv = ParseDouble(f[col.at("nsv")], "nsv");
    if (col.count("flags")) r.flags = f[col.at("flags")];
    r.cpu_time = ParseDouble(f[col.at("cpu_time")], "cpu_time");
    r.audio_duration = ParseDouble(f[col.at("audio_duration")], "audio_duration");
    records.push_back(std::move(r));
  }
  return records;
}

void WriteEstimatesCsv(std::span<const EvalRecord> records, const fs::path& path) {
  auto out = OpenForWrite(path);
  out << "item_id,variant,noise_type,snr_db,t60_true,t60_est,error,nsv,flags\n";
  for (const EvalRecord& r : records) {
    out << r.item_id << ',' << r.variant << ',' << NoiseTypeName(r.noise_type) << ','
        << FormatSnr(r.snr_db) << ',' << FormatDouble(r.t60_true) << ','
        << FormatDouble(r.t60_est) << ',' << FormatDouble(r.error) << ',' << FormatDouble(r.nsv)
        << ',' << r.flags << '\n';
  }
}

void WriteReport(const GroupedStats& stats, std::span<const RtfRow> rtfs,
                 const fs::path& out_dir) {
  fs::create_directories(out_dir);
  {
    auto out = OpenForWrite(out_dir / "box_stats.csv");
    out << "variant,noise_type,snr_db,median,q25,q75,whisker_lo,whisker_hi,n,n_outliers\n";
    for (const auto& [key, s] : stats) {
      out << key.variant << ',' << key.noise_type << ',' << FormatGroupSnr(key.snr_db) << ','
          << FormatDouble(s.median) << ',' << FormatDouble(s.q25) << ',' << FormatDouble(s.q75)
          << ',' << FormatDouble(s.whisker_lo) << ',' << FormatDouble(s.whisker_hi) << ','
          << s.n << ',' << s.n_outliers << '\n';
    }
  }
  {
    // One gnuplot data block per noise type, variants along x grouped by SNR.
    // Plot with: using 1:4:3:7:6 with candlesticks, using 1:5:5:5:5 for medians.
    std::set<std::string> variants;
    std::map<std::string, std::set<double>> snrs;
    for (const auto& [key, s] : stats) {
      variants.insert(key.variant);
      snrs[key.noise_type].insert(key.snr_db);
    }
    const std::vector<std::string> variant_list(variants.begin(), variants.end());
    auto out = OpenForWrite(out_dir / "boxplot.dat");
    out << "# x variant whisker_lo q25 median q75 whisker_hi snr_db noise_type\n";
    bool first_block = true;
    for (const auto& [noise, snr_set] : snrs) {
      if (!first_block) out << "\n\n";
      first_block = false;
      out << "# noise_type " << noise << "\n";
      int group = 0;
      for (double snr : snr_set) {
        for (std::size_t v = 0; v < variant_list.size(); ++v) {
          const auto it = stats.find(GroupKey{variant_list[v], noise, snr});
          if (it == stats.end()) continue;
          const BoxStats& s = it->second;
          const std::size_t x = static_cast<std::size_t>(group) * (variant_list.size() + 1) + v + 1;
          out << x << ' ' << variant_list[v] << ' ' << FormatDouble(s.whisker_lo) << ' '
              << FormatDouble(s.q25) << ' ' << FormatDouble(s.median) << ' '
              << FormatDouble(s.q75) << ' ' << FormatDouble(s.whisker_hi) << ' '
              << FormatGroupSnr(snr) << ' ' << noise << '\n';
        }
        ++group;
      }
    }
  }
  if (!rtfs.empty()) {
    auto out = OpenForWrite(out_dir / "rtf.csv");
    out << "variant,rtf,cpu_time,audio_duration,n\n";
    for (const RtfRow& r : rtfs) {
      out << r.variant << ',' << FormatDouble(r.rtf) << ',' << FormatDouble(r.cpu_time) << ','
          << FormatDouble(r.audio_duration) << ',' << r.n << '\n';
    }
  }
}

GroupedStats ReadBoxStatsCsv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument(path.string() + ": empty file");
  const auto col = HeaderIndex(SplitCsvLine(line),
                               {"variant", "noise_type", "snr_db", "median", "q25", "q75",
                                "whisker_lo", "whisker_hi", "n", "n_outliers"},
                               path);
  GroupedStats stats;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    GroupKey key;
    key.variant = f[col.at("variant")];
    key.noise_type = f[col.at("noise_type")];
    key.snr_db = f[col.at("snr_db")] == "*" ? -std::numeric_limits<double>::infinity()
                                            : ParseSnr(f[col.at("snr_db")]);
    BoxStats s;
    s.median = ParseDouble(f[col.at("median")], "median");
    s.q25 = ParseDouble(f[col.at("q25")], "q25");
    s.q75 = ParseDouble(f[col.at("q75")], "q75");
    s.whisker_lo = ParseDouble(f[col.at("whisker_lo")], "whisker_lo");
    s.whisker_hi = ParseDouble(f[col.at("whisker_hi")], "whisker_hi");
    s.n = static_cast<std::size_t>(std::stoull(f[col.at("n")]));
    s.n_outliers = static_cast<std::size_t>(std::stoull(f[col.at("n_outliers")]));
    stats.emplace(key, s);
  }
  return stats;
}

std::string FormatRtfTable(std::span<const RtfRow> rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %10s %12s %14s %6s\n", "variant", "rtf", "cpu_s",
                "audio_s", "n");
  out << line;
  for (const RtfRow& r : rows) {
    std::snprintf(line, sizeof line, "%-20s %10.5f %12.4f %14.3f %6zu\n", r.variant.c_str(),
                  r.rtf, r.cpu_time, r.audio_duration, r.n);
    out << line;
  }
  return out.str();
}

}  // namespace sddrt
