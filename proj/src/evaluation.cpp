#include "affect/evaluation.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include "affect/error.hpp"

namespace affect {

using nlohmann::json;

namespace {

std::string name(Emotion e) { return std::string(to_string(e)); }

std::vector<TruthLabels> labels_of(std::span<const SelfReport> truth) {
  std::vector<TruthLabels> out;
  out.reserve(truth.size());
  for (const auto& r : truth) out.push_back(r.levels);
  return out;
}

// Emotions covered by every prediction; also checks the truth covers them.
std::vector<Emotion> shared_emotions(std::span<const EmotionState> predicted, std::span<const TruthLabels> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::validation, "prediction count " + std::to_string(predicted.size()) +
                                           " does not match truth count " + std::to_string(truth.size()));
  }
  if (predicted.empty()) throw Error(ErrorCode::validation, "nothing to evaluate");
  std::vector<Emotion> emotions;
  for (const auto& [e, est] : predicted.front().estimates) emotions.push_back(e);
  if (emotions.empty()) throw Error(ErrorCode::validation, "predictions cover no emotions");
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i].estimates.size() != emotions.size()) {
      throw Error(ErrorCode::validation, "instance " + std::to_string(i) + " covers a different emotion subset");
    }
    for (Emotion e : emotions) {
      if (!predicted[i].estimates.contains(e)) {
        throw Error(ErrorCode::validation, "instance " + std::to_string(i) + " has no prediction for '" + name(e) + "'");
      }
      if (!truth[i].contains(e)) {
        throw Error(ErrorCode::validation, "instance " + std::to_string(i) + " has no truth for '" + name(e) + "'");
      }
    }
  }
  return emotions;
}

bool detected(const EmotionEstimate& est, double threshold) { return est.level >= threshold; }

Emotion predicted_dominant(const EmotionState& state, std::span<const Emotion> selected, double threshold) {
  Emotion best = Emotion::neutral;
  double best_level = -1.0;
  for (Emotion e : selected) {
    const double level = state.estimates.at(e).level;
    if (level > best_level) {
      best = e;
      best_level = level;
    }
  }
  return best_level >= threshold ? best : Emotion::neutral;
}

Emotion true_dominant(const TruthLabels& truth, std::span<const Emotion> selected) {
  Emotion best = Emotion::neutral;
  int best_level = -1;
  for (Emotion e : selected) {
    const int level = truth.at(e).value();
    if (level > best_level) {
      best = e;
      best_level = level;
    }
  }
  return best_level >= 1 ? best : Emotion::neutral;
}

std::size_t count_name_set_matches(std::span<const EmotionState> predicted, std::span<const TruthLabels> truth,
                                   std::span<const Emotion> emotions, double threshold) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool match = std::all_of(emotions.begin(), emotions.end(), [&](Emotion e) {
      return detected(predicted[i].estimates.at(e), threshold) == (truth[i].at(e).value() >= 1);
    });
    if (match) ++correct;
  }
  return correct;
}

}  // namespace

double aspect1_accuracy(std::span<const EmotionState> predicted, std::span<const TruthLabels> truth,
                        double threshold) {
  const auto emotions = shared_emotions(predicted, truth);
  return static_cast<double>(count_name_set_matches(predicted, truth, emotions, threshold)) /
         static_cast<double>(predicted.size());
}

double aspect1_accuracy(std::span<const EmotionState> predicted, std::span<const SelfReport> truth,
                        double threshold) {
  const auto labels = labels_of(truth);
  return aspect1_accuracy(predicted, labels, threshold);
}

double aspect2_level_fpr(std::span<const EmotionState> predicted, std::span<const TruthLabels> truth) {
  const auto emotions = shared_emotions(predicted, truth);
  std::size_t false_positives = 0;
  std::size_t negatives = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    for (Emotion e : emotions) {
      const int actual = truth[i].at(e).value();
      const int guess = predicted[i].estimates.at(e).level_class;
      for (int c = 0; c < static_cast<int>(kLevelClassCount); ++c) {
        if (c == actual) continue;
        ++negatives;
        if (guess == c) ++false_positives;
      }
    }
  }
  return static_cast<double>(false_positives) / static_cast<double>(negatives);
}

double aspect2_level_fpr(std::span<const EmotionState> predicted, std::span<const SelfReport> truth) {
  const auto labels = labels_of(truth);
  return aspect2_level_fpr(predicted, labels);
}

ConfusionMatrix confusion_matrix(std::span<const EmotionState> predicted, std::span<const TruthLabels> truth,
                                 std::span<const Emotion> emotions, double threshold) {
  const auto covered = shared_emotions(predicted, truth);
  ConfusionMatrix m;
  std::vector<Emotion> selected;
  for (Emotion e : emotions) {
    if (std::find(m.labels.begin(), m.labels.end(), e) != m.labels.end()) continue;
    m.labels.push_back(e);
    if (e == Emotion::neutral) continue;
    if (std::find(covered.begin(), covered.end(), e) == covered.end()) {
      throw Error(ErrorCode::validation, "confusion emotion '" + name(e) + "' is not covered by the predictions");
    }
    selected.push_back(e);
  }
  if (std::find(m.labels.begin(), m.labels.end(), Emotion::neutral) == m.labels.end()) {
    m.labels.push_back(Emotion::neutral);
  }
  const std::size_t n = m.labels.size();
  auto index_of = [&](Emotion e) {
    return static_cast<std::size_t>(std::find(m.labels.begin(), m.labels.end(), e) - m.labels.begin());
  };

  std::vector<std::vector<std::size_t>> counts(n, std::vector<std::size_t>(n, 0));
  m.support.assign(n, 0);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const std::size_t row = index_of(true_dominant(truth[i], selected));
    const std::size_t col = index_of(predicted_dominant(predicted[i], selected, threshold));
    ++counts[row][col];
    ++m.support[row];
  }
  m.rates.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    if (m.support[r] == 0) continue;
    for (std::size_t c = 0; c < n; ++c) {
      m.rates[r][c] = static_cast<double>(counts[r][c]) / static_cast<double>(m.support[r]);
    }
  }
  return m;
}

ConfusionMatrix confusion_matrix(std::span<const EmotionState> predicted, std::span<const SelfReport> truth,
                                 std::span<const Emotion> emotions, double threshold) {
  const auto labels = labels_of(truth);
  return confusion_matrix(predicted, labels, emotions, threshold);
}

EvalReport evaluate(std::span<const EmotionState> predicted, std::span<const TruthLabels> truth, double threshold,
                    std::span<const Emotion> confusion_emotions) {
  EvalReport report;
  report.threshold = threshold;
  report.emotions = shared_emotions(predicted, truth);
  report.instances = predicted.size();

  for (Emotion e : report.emotions) {
    EmotionBreakdown b;
    b.emotion = e;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      const auto& est = predicted[i].estimates.at(e);
      const int actual = truth[i].at(e).value();
      if (detected(est, threshold) == (actual >= 1)) ++b.presence_correct;
      if (est.level_class == actual) {
        ++b.level_correct;
      } else {
        ++b.false_positives;
      }
      b.negatives += kLevelClassCount - 1;
    }
    const auto n = static_cast<double>(predicted.size());
    b.presence_accuracy = static_cast<double>(b.presence_correct) / n;
    b.level_accuracy = static_cast<double>(b.level_correct) / n;
    b.fpr = static_cast<double>(b.false_positives) / static_cast<double>(b.negatives);
    report.false_positives += b.false_positives;
    report.negatives += b.negatives;
    report.per_emotion.push_back(b);
  }
  report.aspect2_fpr = static_cast<double>(report.false_positives) / static_cast<double>(report.negatives);
  report.aspect1_correct = count_name_set_matches(predicted, truth, report.emotions, threshold);
  report.aspect1_accuracy = static_cast<double>(report.aspect1_correct) / static_cast<double>(report.instances);

  if (confusion_emotions.empty()) {
    report.confusion = confusion_matrix(predicted, truth, report.emotions, threshold);
  } else {
    report.confusion = confusion_matrix(predicted, truth, confusion_emotions, threshold);
  }
  return report;
}

EvalReport evaluate(std::span<const EmotionState> predicted, std::span<const SelfReport> truth, double threshold,
                    std::span<const Emotion> confusion_emotions) {
  const auto labels = labels_of(truth);
  return evaluate(predicted, labels, threshold, confusion_emotions);
}

json to_json(const ConfusionMatrix& m) {
  json labels = json::array();
  for (Emotion e : m.labels) labels.push_back(name(e));
  json rows = json::array();
  for (std::size_t r = 0; r < m.labels.size(); ++r) rows.push_back(m.row_present(r) ? json(m.rates[r]) : json(nullptr));
  return {{"labels", labels}, {"rates", rows}, {"support", m.support}};
}

json to_json(const EvalReport& report) {
  json emotions = json::array();
  for (Emotion e : report.emotions) emotions.push_back(name(e));
  json breakdown = json::array();
  for (const auto& b : report.per_emotion) {
    breakdown.push_back({{"emotion", name(b.emotion)},
                         {"presence_accuracy", b.presence_accuracy},
                         {"level_accuracy", b.level_accuracy},
                         {"false_positives", b.false_positives},
                         {"negatives", b.negatives},
                         {"fpr", b.fpr}});
  }
  return {{"threshold", report.threshold},
          {"emotions", emotions},
          {"instances", report.instances},
          {"aspect1_accuracy", report.aspect1_accuracy},
          {"aspect1_correct", report.aspect1_correct},
          {"aspect2_fpr", report.aspect2_fpr},
          {"false_positives", report.false_positives},
          {"negatives", report.negatives},
          {"fpr_definition", kLevelFprDefinition},
          {"per_emotion", breakdown},
          {"confusion", to_json(report.confusion)}};
}

void write_report_table(std::ostream& out, const EvalReport& report) {
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(4);
  out << "instances          " << report.instances << '\n';
  out << "threshold          " << report.threshold << '\n';
  out << "aspect-1 accuracy  " << report.aspect1_accuracy << "  (" << report.aspect1_correct << '/'
      << report.instances << " exact name sets)\n";
  out << "aspect-2 level FPR " << report.aspect2_fpr << "  (" << report.false_positives << '/' << report.negatives
      << ")\n";
  out << "  " << kLevelFprDefinition << "\n\n";
  out << std::left << std::setw(14) << "emotion" << std::right << std::setw(10) << "presence" << std::setw(10)
      << "level" << std::setw(10) << "fpr" << '\n';
  for (const auto& b : report.per_emotion) {
    out << std::left << std::setw(14) << to_string(b.emotion) << std::right << std::setw(10) << b.presence_accuracy
        << std::setw(10) << b.level_accuracy << std::setw(10) << b.fpr << '\n';
  }
  out << "\nconfusion (rows: selected, columns: detected)\n";
  out << std::left << std::setw(14) << "";
  for (Emotion e : report.confusion.labels) out << std::right << std::setw(14) << to_string(e);
  out << '\n';
  for (std::size_t r = 0; r < report.confusion.labels.size(); ++r) {
    out << std::left << std::setw(14) << to_string(report.confusion.labels[r]);
    for (std::size_t c = 0; c < report.confusion.labels.size(); ++c) {
      out << std::right << std::setw(14);
      if (report.confusion.row_present(r)) {
        out << report.confusion.rates[r][c];
      } else {
        out << '-';
      }
    }
    out << '\n';
  }
  out.flags(flags);
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m) {
  out << "selected";
  for (Emotion e : m.labels) out << ',' << to_string(e);
  out << '\n';
  for (std::size_t r = 0; r < m.labels.size(); ++r) {
    out << to_string(m.labels[r]);
    for (std::size_t c = 0; c < m.labels.size(); ++c) {
      out << ',';
      if (m.row_present(r)) {
        out << m.rates[r][c];
      } else {
        out << '-';
      }
    }
    out << '\n';
  }
}

FuzzyVsBinary compare_fuzzy_vs_binary(std::span<const LabeledSample> train_set, std::span<const LabeledSample> test_set,
                                      const TrainConfig& config, double threshold) {
  const Model model = train(train_set, config);

  std::vector<FeatureVector> raw;
  raw.reserve(train_set.size());
  for (const auto& s : train_set) raw.push_back(s.features);
  const Standardizer standardizer = Standardizer::fit(raw);
  std::vector<std::vector<double>> rows;
  rows.reserve(raw.size());
  for (const auto& fv : raw) rows.push_back(map_features(standardizer.apply(fv), config.kernel));

  std::vector<std::pair<Emotion, LinearMachine>> presence;
  for (Emotion e : config.emotions) {
    std::vector<int> targets;
    targets.reserve(train_set.size());
    for (const auto& s : train_set) targets.push_back(s.labels.at(e).value() >= 1 ? 1 : -1);
    const std::uint64_t key = 1000 + static_cast<std::uint64_t>(e);
    presence.emplace_back(e, fit_binary_machine(rows, targets, config.c, config.epochs, config.seed, key));
  }

  std::vector<EmotionState> fuzzy, binary;
  std::vector<TruthLabels> truth;
  for (const auto& s : test_set) {
    fuzzy.push_back(predict(model, s.features));
    const auto phi = map_features(standardizer.apply(s.features), config.kernel);
    EmotionState state;
    for (const auto& [e, machine] : presence) {
      double score = machine.bias;
      for (std::size_t j = 0; j < phi.size(); ++j) score += machine.weights[j] * phi[j];
      const int cls = score >= 0.0 ? 1 : 0;
      EmotionEstimate est;
      est.membership.weights[static_cast<std::size_t>(cls)] = 1.0;
      est.level = cls;
      est.level_class = cls;
      state.estimates.emplace(e, est);
    }
    binary.push_back(std::move(state));
    truth.push_back(s.labels);
  }

  FuzzyVsBinary out;
  out.test_instances = test_set.size();
  out.fuzzy_aspect1 = aspect1_accuracy(fuzzy, truth, threshold);
  out.binary_aspect1 = aspect1_accuracy(binary, truth, threshold);
  out.fuzzy_level_fpr = aspect2_level_fpr(fuzzy, truth);
  return out;
}

}  // namespace affect
