#include "affect/classifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <future>
#include <iterator>
#include <numeric>
#include <set>

#include <zlib.h>

#include "affect/error.hpp"
#include "affect/random.hpp"

namespace affect {

using nlohmann::json;

namespace {

std::string name(Emotion e) { return std::string(to_string(e)); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::string_view to_string(Kernel k) noexcept { return k == Kernel::linear ? "linear" : "quadratic"; }

Kernel parse_kernel(std::string_view token) {
  if (token == "linear") return Kernel::linear;
  if (token == "quadratic") return Kernel::quadratic;
  throw Error(ErrorCode::config, "unknown kernel '" + std::string(token) + "' (expected linear or quadratic)");
}

void TrainConfig::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::config, "C must be positive");
  if (epochs <= 0) throw Error(ErrorCode::config, "epochs must be positive");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::config, "temperature must be positive");
  }
  if (emotions.empty()) throw Error(ErrorCode::config, "no emotions configured");
  std::set<Emotion> seen;
  for (Emotion e : emotions) {
    if (!is_reportable(e)) throw Error(ErrorCode::config, "'" + name(e) + "' cannot be trained");
    if (!seen.insert(e).second) throw Error(ErrorCode::config, "emotion '" + name(e) + "' listed twice");
  }
}

// --- standardization and feature map ----------------------------------------

Standardizer Standardizer::fit(std::span<const FeatureVector> samples) {
  Standardizer s;
  s.mean.assign(kFeatureCount, 0.0);
  s.stddev.assign(kFeatureCount, 0.0);
  if (samples.empty()) return s;
  const auto n = static_cast<double>(samples.size());
  for (const auto& fv : samples) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) s.mean[i] += fv.values[i];
  }
  for (double& m : s.mean) m /= n;
  for (const auto& fv : samples) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      const double d = fv.values[i] - s.mean[i];
      s.stddev[i] += d * d;
    }
  }
  for (double& v : s.stddev) v = std::sqrt(v / n);
  return s;
}

std::vector<double> Standardizer::apply(const FeatureVector& fv) const {
  std::vector<double> z(kFeatureCount);
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double centred = fv.values[i] - mean[i];
    z[i] = stddev[i] > 0.0 ? centred / stddev[i] : centred;
  }
  return z;
}

std::vector<double> map_features(std::span<const double> z, Kernel kernel) {
  std::vector<double> out(z.begin(), z.end());
  if (kernel == Kernel::quadratic) {
    out.reserve(2 * z.size());
    for (double v : z) out.push_back(v * v);
  }
  return out;
}

std::size_t Model::mapped_dimension() const noexcept {
  return config.kernel == Kernel::quadratic ? 2 * kFeatureCount : kFeatureCount;
}

// --- training ----------------------------------------------------------------

LinearMachine fit_binary_machine(std::span<const std::vector<double>> rows, std::span<const int> targets, double c,
                                 int epochs, std::uint64_t seed, std::uint64_t stream_key) {
  LinearMachine m;
  if (rows.empty()) return m;
  const std::size_t n = rows.size();
  const std::size_t d = rows.front().size();
  m.weights.assign(d, 0.0);
  const double lambda = 1.0 / (c * static_cast<double>(n));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Offsetting t by n keeps the first steps at roughly C instead of C * n.
  double t = static_cast<double>(n);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    KeyedStream shuffle(seed, {stream_key, static_cast<std::uint64_t>(epoch)});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[shuffle.below(i)]);

    for (std::size_t idx : order) {
      t += 1.0;
      const double eta = 1.0 / (lambda * t);
      const auto& x = rows[idx];
      const double y = targets[idx];
      const double margin = y * (dot(m.weights, x) + m.bias);
      const double shrink = 1.0 - eta * lambda;
      for (double& w : m.weights) w *= shrink;
      if (margin < 1.0) {
        for (std::size_t j = 0; j < d; ++j) m.weights[j] += eta * y * x[j];
        m.bias += eta * y;
      }
    }
  }
  return m;
}

Model train(std::span<const LabeledSample> samples, const TrainConfig& config) {
  config.validate();
  if (samples.empty()) throw Error(ErrorCode::incomplete_data, "no training samples");
  const int schema = samples.front().features.schema_version;
  for (const auto& s : samples) {
    if (s.features.schema_version != schema) {
      throw Error(ErrorCode::schema_mismatch, "training samples mix feature schema versions " +
                                                  std::to_string(schema) + " and " +
                                                  std::to_string(s.features.schema_version));
    }
  }
  if (schema != kFeatureSchemaVersion) {
    throw Error(ErrorCode::schema_mismatch, "unsupported feature schema version " + std::to_string(schema));
  }

  std::vector<std::vector<int>> labels(config.emotions.size());
  for (std::size_t e = 0; e < config.emotions.size(); ++e) {
    std::set<int> distinct;
    labels[e].reserve(samples.size());
    for (const auto& s : samples) {
      auto it = s.labels.find(config.emotions[e]);
      if (it == s.labels.end()) {
        throw Error(ErrorCode::validation, "sample without a label for '" + name(config.emotions[e]) + "'");
      }
      labels[e].push_back(it->second.value());
      distinct.insert(it->second.value());
    }
    if (distinct.size() < 2) {
      throw Error(ErrorCode::degenerate_label, "emotion '" + name(config.emotions[e]) + "' has a single label class (" +
                                                   std::to_string(*distinct.begin()) + ") in the training data");
    }
  }

  Model model;
  model.feature_schema_version = schema;
  model.config = config;
  std::vector<FeatureVector> raw;
  raw.reserve(samples.size());
  for (const auto& s : samples) raw.push_back(s.features);
  model.standardizer = Standardizer::fit(raw);

  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const auto& fv : raw) rows.push_back(map_features(model.standardizer.apply(fv), config.kernel));

  // Emotions are independent; each task writes only its own classifier and
  // draws from its own keyed streams, so scheduling cannot change the result.
  auto fit_emotion = [&](std::size_t e) {
    EmotionClassifier clf;
    clf.emotion = config.emotions[e];
    std::vector<int> targets(samples.size());
    for (std::size_t c = 0; c < kLevelClassCount; ++c) {
      for (std::size_t i = 0; i < samples.size(); ++i) {
        targets[i] = labels[e][i] == static_cast<int>(c) ? 1 : -1;
      }
      const std::uint64_t key = static_cast<std::uint64_t>(clf.emotion) * kLevelClassCount + c;
      clf.machines[c] = fit_binary_machine(rows, targets, config.c, config.epochs, config.seed, key);
    }
    return clf;
  };
  std::vector<std::future<EmotionClassifier>> tasks;
  tasks.reserve(config.emotions.size());
  for (std::size_t e = 0; e < config.emotions.size(); ++e) {
    tasks.push_back(std::async(std::launch::async, fit_emotion, e));
  }
  for (auto& task : tasks) model.classifiers.push_back(task.get());
  return model;
}

// --- prediction --------------------------------------------------------------

EmotionState predict(const Model& model, const FeatureVector& features) {
  if (features.schema_version != model.feature_schema_version) {
    throw Error(ErrorCode::schema_mismatch, "feature schema version " + std::to_string(features.schema_version) +
                                                " does not match model schema " +
                                                std::to_string(model.feature_schema_version));
  }
  const auto phi = map_features(model.standardizer.apply(features), model.config.kernel);
  EmotionState state;
  for (const auto& clf : model.classifiers) {
    std::array<double, kLevelClassCount> scores{};
    for (std::size_t c = 0; c < kLevelClassCount; ++c) {
      const auto& m = clf.machines[c];
      if (m.weights.size() != phi.size()) {
        throw Error(ErrorCode::schema_mismatch, "model weight length does not match the feature map");
      }
      scores[c] = dot(m.weights, phi) + m.bias;
      if (!std::isfinite(scores[c])) {
        throw Error(ErrorCode::format, "non-finite decision score for '" + name(clf.emotion) + "'");
      }
    }
    const double top = *std::max_element(scores.begin(), scores.end());
    EmotionEstimate est;
    double total = 0.0;
    for (std::size_t c = 0; c < kLevelClassCount; ++c) {
      est.membership.weights[c] = std::exp((scores[c] - top) / model.config.temperature);
      total += est.membership.weights[c];
    }
    for (double& w : est.membership.weights) w /= total;
    est.level = std::clamp(defuzzify(est.membership), 0.0, kMaxLevel);
    est.level_class = est.membership.argmax();
    state.estimates.emplace(clf.emotion, est);
  }
  return state;
}

EmotionState EmotionState::from_report(const SelfReport& report) {
  EmotionState state;
  for (const auto& [emotion, level] : report.levels) {
    EmotionEstimate est;
    est.membership.weights[static_cast<std::size_t>(level.value())] = 1.0;
    est.level = level.value();
    est.level_class = level.value();
    state.estimates.emplace(emotion, est);
  }
  return state;
}

// --- binary model format -----------------------------------------------------
//
//   "AFZM" u32 format_version u32 feature_schema u8 kernel f64 C u32 epochs
//   u64 seed f64 temperature u32 n_features f64 mean[n] f64 stddev[n]
//   u32 n_emotions { u8 emotion u32 dim { f64 w[dim] f64 bias } x5 } u32 crc32
//
// All integers and doubles little-endian; the CRC covers every preceding byte.

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'A', 'F', 'Z', 'M'};

class ByteWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::uint64_t le(int n) {
    if (remaining() < static_cast<std::size_t>(n)) throw Error(ErrorCode::format, "model file is truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  return static_cast<std::uint32_t>(::crc32(::crc32(0L, Z_NULL, 0), bytes.data(), static_cast<uInt>(bytes.size())));
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const Model& model) {
  ByteWriter w;
  for (auto b : kMagic) w.u8(b);
  w.u32(kModelFormatVersion);
  w.u32(static_cast<std::uint32_t>(model.feature_schema_version));
  w.u8(static_cast<std::uint8_t>(model.config.kernel));
  w.f64(model.config.c);
  w.u32(static_cast<std::uint32_t>(model.config.epochs));
  w.u64(model.config.seed);
  w.f64(model.config.temperature);
  w.u32(static_cast<std::uint32_t>(model.standardizer.mean.size()));
  for (double v : model.standardizer.mean) w.f64(v);
  for (double v : model.standardizer.stddev) w.f64(v);
  w.u32(static_cast<std::uint32_t>(model.classifiers.size()));
  for (const auto& clf : model.classifiers) {
    w.u8(static_cast<std::uint8_t>(clf.emotion));
    w.u32(static_cast<std::uint32_t>(clf.machines.front().weights.size()));
    for (const auto& m : clf.machines) {
      for (double v : m.weights) w.f64(v);
      w.f64(m.bias);
    }
  }
  w.u32(crc32_of(w.bytes()));
  return std::move(w.bytes());
}

Model deserialize_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size() + 8 || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::format, "not a model file (bad magic bytes)");
  }
  ByteReader header(bytes.subspan(kMagic.size()));
  const std::uint32_t version = header.u32();
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::version, "model format version " + std::to_string(version) + " is not supported (reader is " +
                                        std::to_string(kModelFormatVersion) + ")");
  }
  const auto body = bytes.first(bytes.size() - 4);
  ByteReader trailer(bytes.last(4));
  if (crc32_of(body) != trailer.u32()) throw Error(ErrorCode::checksum, "model checksum mismatch");

  ByteReader r(body.subspan(kMagic.size() + 4));
  Model model;
  model.feature_schema_version = static_cast<int>(r.u32());
  const std::uint8_t kernel = r.u8();
  if (kernel > static_cast<std::uint8_t>(Kernel::quadratic)) throw Error(ErrorCode::format, "unknown kernel id");
  model.config.kernel = static_cast<Kernel>(kernel);
  model.config.c = r.f64();
  model.config.epochs = static_cast<int>(r.u32());
  model.config.seed = r.u64();
  model.config.temperature = r.f64();
  const std::uint32_t n_features = r.u32();
  if (n_features != kFeatureCount) throw Error(ErrorCode::format, "unexpected feature count in model");
  model.standardizer.mean.resize(n_features);
  model.standardizer.stddev.resize(n_features);
  for (double& v : model.standardizer.mean) v = r.f64();
  for (double& v : model.standardizer.stddev) v = r.f64();
  const std::uint32_t n_emotions = r.u32();
  if (n_emotions > kReportableEmotionCount) throw Error(ErrorCode::format, "too many emotions in model");
  model.config.emotions.clear();
  for (std::uint32_t e = 0; e < n_emotions; ++e) {
    EmotionClassifier clf;
    const std::uint8_t id = r.u8();
    if (id >= kReportableEmotionCount) throw Error(ErrorCode::format, "invalid emotion id in model");
    clf.emotion = static_cast<Emotion>(id);
    const std::uint32_t dim = r.u32();
    if (dim != model.mapped_dimension()) throw Error(ErrorCode::format, "weight length does not match kernel");
    for (auto& m : clf.machines) {
      m.weights.resize(dim);
      for (double& v : m.weights) v = r.f64();
      m.bias = r.f64();
    }
    model.config.emotions.push_back(clf.emotion);
    model.classifiers.push_back(std::move(clf));
  }
  if (r.remaining() != 0) throw Error(ErrorCode::format, "trailing bytes after model body");
  return model;
}

void save_model(const Model& model, std::ostream& out) {
  const auto bytes = serialize_model(model);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::io, "failed to write model");
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
  save_model(model, out);
}

Model load_model(std::istream& in) {
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return deserialize_model(bytes);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  return load_model(in);
}

// --- label join --------------------------------------------------------------

JoinedSamples join_labels(std::span<const FeatureRecord> records, std::span<const SelfReport> reports,
                          std::span<const Emotion> emotions, std::int64_t window_ms) {
  std::map<std::string, std::vector<std::pair<std::int64_t, std::size_t>>> by_participant;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    by_participant[reports[i].participant_id].emplace_back(reports[i].timestamp_ms, i);
  }
  for (auto& [pid, list] : by_participant) std::sort(list.begin(), list.end());

  JoinedSamples out;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    auto it = by_participant.find(rec.participant_id);
    if (it == by_participant.end()) {
      ++out.dropped;
      continue;
    }
    const auto& list = it->second;
    // Last report with ts <= session start.
    auto pos = std::upper_bound(list.begin(), list.end(),
                                std::pair<std::int64_t, std::size_t>{rec.timestamp_ms, SIZE_MAX});
    if (pos == list.begin() || rec.timestamp_ms - std::prev(pos)->first > window_ms) {
      ++out.dropped;
      continue;
    }
    const auto& report = reports[std::prev(pos)->second];
    LabeledSample sample{rec.features, {}};
    for (Emotion e : emotions) {
      auto level = report.levels.find(e);
      if (level == report.levels.end()) {
        throw Error(ErrorCode::validation, "report without a level for '" + name(e) + "'");
      }
      sample.labels.emplace(e, level->second);
    }
    out.samples.push_back(std::move(sample));
    out.record_index.push_back(r);
    out.report_index.push_back(std::prev(pos)->second);
  }
  return out;
}

// --- predictions JSON ----------------------------------------------------------

json to_json(const EmotionState& state) {
  json j = json::object();
  for (const auto& [emotion, est] : state.estimates) {
    j[name(emotion)] = {{"membership", est.membership.weights}, {"level", est.level}, {"class", est.level_class}};
  }
  return j;
}

json to_json(const PredictionRecord& record) {
  return {{"pid", record.participant_id}, {"ts", record.timestamp_ms}, {"emotions", to_json(record.state)}};
}

PredictionRecord prediction_from_json(const json& j) {
  if (j.is_object() && j.contains("levels")) {
    const SelfReport report = report_from_json(j);
    return {report.participant_id, report.timestamp_ms, EmotionState::from_report(report)};
  }
  PredictionRecord rec;
  try {
    rec.participant_id = j.at("pid").get<std::string>();
    rec.timestamp_ms = j.at("ts").get<std::int64_t>();
    for (const auto& [key, value] : j.at("emotions").items()) {
      EmotionEstimate est;
      est.membership.weights = value.at("membership").get<std::array<double, kLevelClassCount>>();
      est.level = value.at("level").get<double>();
      est.level_class = value.at("class").get<int>();
      (void)Level(est.level);
      (void)LevelClass(est.level_class);
      rec.state.estimates.emplace(parse_emotion(key), est);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("prediction record: ") + e.what());
  }
  return rec;
}

std::vector<PredictionRecord> load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  std::vector<PredictionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(prediction_from_json(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

TrainTestSplit split_indices(std::size_t n, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::config, "train fraction must be in (0, 1)");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  KeyedStream stream(seed, {0x5b117ULL});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[stream.below(i)]);
  const auto cut = static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction));
  TrainTestSplit out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(cut), order.end());
  return out;
}

}  // namespace affect
