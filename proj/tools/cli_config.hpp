#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>

#include "affect/classifier.hpp"
#include "affect/cooccurrence.hpp"
#include "affect/evaluation.hpp"

namespace affect::cli {

enum class OutputFormat { json, csv, table };

OutputFormat parse_format(std::string_view token);

/// Settings shared by every subcommand. Loaded from a key=value file, then
/// overridden by flags.
struct CliConfig {
  std::uint64_t seed = 42;
  double tolerance = kDefaultPlausibilityTolerance;
  double threshold = kDefaultDetectionThreshold;
  double c = 1.0;
  int epochs = 200;
  Kernel kernel = Kernel::quadratic;
  double temperature = 1.0;
  double train_fraction = 0.7;
  std::optional<Region> region;
  OutputFormat format = OutputFormat::table;

  int participants = 10;
  int sessions = 50;
  double noise = 0.25;
  double behavior_noise = 1.0;

  std::string reports;
  std::string features;
  std::string model;
  std::string out;

  /// Applies one setting. Throws Error(config) naming an unknown key or a bad value.
  void set(const std::string& key, const std::string& value);

  TrainConfig train_config() const;
};

/// `key = value` lines; `#` starts a comment, blank lines are skipped.
void load_config(std::istream& in, CliConfig& config);
void load_config_file(const std::string& path, CliConfig& config);

}  // namespace affect::cli
