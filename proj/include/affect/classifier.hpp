#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "affect/emotion.hpp"
#include "affect/features.hpp"
#include "affect/fuzzifier.hpp"
#include "affect/self_report.hpp"

namespace affect {

/// Feature map applied after z-scoring. `quadratic` appends the square of every
/// standardized feature, which lets a one-vs-rest machine isolate an interior
/// level class (e.g. class 2 against 0, 1, 3 and 4) along a single feature.
enum class Kernel : std::uint8_t { linear = 0, quadratic = 1 };

std::string_view to_string(Kernel k) noexcept;
Kernel parse_kernel(std::string_view token);

struct TrainConfig {
  double c = 1.0;
  int epochs = 200;
  std::uint64_t seed = 42;
  Kernel kernel = Kernel::quadratic;
  /// Softmax temperature used when turning scores into memberships.
  double temperature = 1.0;
  std::vector<Emotion> emotions{basic_emotions().begin(), basic_emotions().end()};

  /// Throws Error(config) for non-positive C, epochs or temperature, an empty
  /// or duplicated emotion list, or `neutral`.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct LabeledSample {
  FeatureVector features;
  std::map<Emotion, LevelClass> labels;
};

/// w . phi(z) + b for one level class against the rest.
struct LinearMachine {
  std::vector<double> weights;
  double bias = 0.0;

  friend bool operator==(const LinearMachine&, const LinearMachine&) = default;
};

struct EmotionClassifier {
  Emotion emotion = Emotion::joy;
  std::array<LinearMachine, kLevelClassCount> machines;

  friend bool operator==(const EmotionClassifier&, const EmotionClassifier&) = default;
};

/// Per-feature z-scoring. Zero-variance features are centred but not scaled.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Standardizer fit(std::span<const FeatureVector> samples);
  std::vector<double> apply(const FeatureVector& fv) const;

  friend bool operator==(const Standardizer&, const Standardizer&) = default;
};

struct Model {
  int feature_schema_version = kFeatureSchemaVersion;
  TrainConfig config;
  Standardizer standardizer;
  std::vector<EmotionClassifier> classifiers;

  /// Length of every weight vector.
  std::size_t mapped_dimension() const noexcept;

  friend bool operator==(const Model&, const Model&) = default;
};

struct EmotionEstimate {
  Membership membership;
  double level = 0.0;
  int level_class = 0;

  friend bool operator==(const EmotionEstimate&, const EmotionEstimate&) = default;
};

struct EmotionState {
  std::map<Emotion, EmotionEstimate> estimates;

  /// Point-mass state reproducing a self-report exactly (one estimate per
  /// reported emotion).
  static EmotionState from_report(const SelfReport& report);

  friend bool operator==(const EmotionState&, const EmotionState&) = default;
};

std::vector<double> map_features(std::span<const double> standardized, Kernel kernel);

/// Soft-margin hinge-loss SVM trained by projected subgradient descent
/// (Pegasos schedule, lambda = 1 / (C n)). `targets` are +1/-1. Visit order is
/// reshuffled every epoch from a stream keyed by `stream_key`.
LinearMachine fit_binary_machine(std::span<const std::vector<double>> rows, std::span<const int> targets, double c,
                                 int epochs, std::uint64_t seed, std::uint64_t stream_key);

/// One-vs-rest machines for every configured emotion and level class.
/// Throws Error(degenerate_label) when an emotion has fewer than two distinct
/// classes and Error(schema_mismatch) on mixed feature schemas.
Model train(std::span<const LabeledSample> samples, const TrainConfig& config);

/// Scores -> shifted softmax membership -> centroid level and argmax class.
EmotionState predict(const Model& model, const FeatureVector& features);

inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const Model& model, std::ostream& out);
void save_model(const Model& model, const std::string& path);
/// Throws Error(format) for bad magic or truncation, Error(version) for an
/// unknown format version and Error(checksum) when the trailing CRC32 does not
/// match.
Model load_model(std::istream& in);
Model load_model(const std::string& path);

std::vector<std::uint8_t> serialize_model(const Model& model);
Model deserialize_model(std::span<const std::uint8_t> bytes);

inline constexpr std::int64_t kLabelWindowMs = 4LL * 60 * 60 * 1000;

struct JoinedSamples {
  std::vector<LabeledSample> samples;
  /// Index into the feature records for each sample.
  std::vector<std::size_t> record_index;
  /// Index into the reports for each sample.
  std::vector<std::size_t> report_index;
  std::size_t dropped = 0;
};

/// Labels each feature record with the same participant's nearest report at or
/// before the session start, within `window_ms`. Records without one are dropped.
JoinedSamples join_labels(std::span<const FeatureRecord> records, std::span<const SelfReport> reports,
                          std::span<const Emotion> emotions, std::int64_t window_ms = kLabelWindowMs);

struct TrainTestSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded shuffle of 0..n-1; the first floor(n * train_fraction) go to train.
TrainTestSplit split_indices(std::size_t n, double train_fraction, std::uint64_t seed);

// Predictions file: one {"pid", "ts", "emotions": {name: {...}}} per line.
struct PredictionRecord {
  std::string participant_id;
  std::int64_t timestamp_ms = 0;
  EmotionState state;
};

nlohmann::json to_json(const EmotionState& state);
nlohmann::json to_json(const PredictionRecord& record);
/// Also accepts self-report lines, converted with EmotionState::from_report.
PredictionRecord prediction_from_json(const nlohmann::json& j);
std::vector<PredictionRecord> load_predictions(const std::string& path);

}  // namespace affect
