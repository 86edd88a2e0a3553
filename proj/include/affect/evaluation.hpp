#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "affect/classifier.hpp"
#include "affect/emotion.hpp"
#include "affect/self_report.hpp"

namespace affect {

inline constexpr double kDefaultDetectionThreshold = 0.5;

using TruthLabels = std::map<Emotion, LevelClass>;

/// Fraction of instances whose detected emotion names match the truth exactly:
/// {e : predicted level >= threshold} == {e : true class >= 1}, over the
/// emotions the predictions cover.
double aspect1_accuracy(std::span<const EmotionState> predicted, std::span<const SelfReport> truth,
                        double threshold = kDefaultDetectionThreshold);
double aspect1_accuracy(std::span<const EmotionState> predicted, std::span<const TruthLabels> truth,
                        double threshold = kDefaultDetectionThreshold);

/// Micro-averaged one-vs-rest false positive rate over level classes: every
/// (instance, emotion) contributes four negatives (the classes it is not) and
/// one false positive when the predicted class is wrong.
double aspect2_level_fpr(std::span<const EmotionState> predicted, std::span<const SelfReport> truth);
double aspect2_level_fpr(std::span<const EmotionState> predicted, std::span<const TruthLabels> truth);

inline constexpr const char* kLevelFprDefinition =
    "FPR = FP / N over all (instance, emotion, level class) one-vs-rest decisions, micro-averaged; "
    "a false positive is predicting class c when the true class is not c";

/// Rows are the true dominant emotion, columns the detected one. A dominant
/// emotion is the highest-level one among the selected emotions (ties go to the
/// earlier emotion), or `neutral` when none reaches the detection threshold
/// (class >= 1 for the truth). `neutral` is always a row and column.
struct ConfusionMatrix {
  std::vector<Emotion> labels;
  /// rates[row][col]; meaningful only when support[row] > 0.
  std::vector<std::vector<double>> rates;
  std::vector<std::size_t> support;

  bool row_present(std::size_t row) const { return support.at(row) > 0; }
};

ConfusionMatrix confusion_matrix(std::span<const EmotionState> predicted, std::span<const SelfReport> truth,
                                 std::span<const Emotion> emotions, double threshold = kDefaultDetectionThreshold);
ConfusionMatrix confusion_matrix(std::span<const EmotionState> predicted, std::span<const TruthLabels> truth,
                                 std::span<const Emotion> emotions, double threshold = kDefaultDetectionThreshold);

struct EmotionBreakdown {
  Emotion emotion = Emotion::joy;
  std::size_t presence_correct = 0;
  std::size_t level_correct = 0;
  std::size_t false_positives = 0;
  std::size_t negatives = 0;
  double presence_accuracy = 0.0;
  double level_accuracy = 0.0;
  double fpr = 0.0;
};

struct EvalReport {
  double threshold = kDefaultDetectionThreshold;
  std::vector<Emotion> emotions;
  std::size_t instances = 0;
  std::size_t aspect1_correct = 0;
  double aspect1_accuracy = 0.0;
  std::size_t false_positives = 0;
  std::size_t negatives = 0;
  double aspect2_fpr = 0.0;
  std::vector<EmotionBreakdown> per_emotion;
  ConfusionMatrix confusion;
};

/// Both aspects plus the confusion matrix over `confusion_emotions` (defaults to
/// every predicted emotion).
EvalReport evaluate(std::span<const EmotionState> predicted, std::span<const TruthLabels> truth,
                    double threshold = kDefaultDetectionThreshold, std::span<const Emotion> confusion_emotions = {});
EvalReport evaluate(std::span<const EmotionState> predicted, std::span<const SelfReport> truth,
                    double threshold = kDefaultDetectionThreshold, std::span<const Emotion> confusion_emotions = {});

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const ConfusionMatrix& matrix);
void write_report_table(std::ostream& out, const EvalReport& report);
/// Selected-emotion rows by detected-emotion columns; absent rows print `-`.
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& matrix);

/// Fuzzy multi-level pipeline against a present/absent baseline trained on the
/// same data with the same optimizer settings.
struct FuzzyVsBinary {
  double fuzzy_aspect1 = 0.0;
  double binary_aspect1 = 0.0;
  double fuzzy_level_fpr = 0.0;
  std::size_t test_instances = 0;
};

FuzzyVsBinary compare_fuzzy_vs_binary(std::span<const LabeledSample> train_set, std::span<const LabeledSample> test_set,
                                      const TrainConfig& config, double threshold = kDefaultDetectionThreshold);

}  // namespace affect
