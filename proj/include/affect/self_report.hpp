#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "affect/emotion.hpp"

namespace affect {

/// One experience-sampling answer: every reportable emotion rated 0..4.
struct SelfReport {
  std::int64_t timestamp_ms = 0;
  std::string participant_id;
  std::optional<Region> region;
  std::map<Emotion, LevelClass> levels;

  /// Throws Error(validation) unless exactly the 27 reportable emotions are
  /// present and the timestamp is non-negative.
  void validate() const;

  /// A report with all 27 emotions at level 0.
  static SelfReport all_zero(std::int64_t timestamp_ms, std::string participant_id,
                             std::optional<Region> region = std::nullopt);

  friend bool operator==(const SelfReport&, const SelfReport&) = default;
};

enum class ParseMode { strict, lenient };

nlohmann::json to_json(const SelfReport& report);

/// Parses one JSONL object. Unknown fields throw in strict mode; in lenient mode
/// they are skipped and named in `warnings`, if given.
SelfReport report_from_json(const nlohmann::json& j, ParseMode mode = ParseMode::strict,
                            std::vector<std::string>* warnings = nullptr);

void write_reports(std::ostream& out, const std::vector<SelfReport>& reports);
std::vector<SelfReport> read_reports(std::istream& in, ParseMode mode = ParseMode::strict,
                                     std::vector<std::string>* warnings = nullptr);

std::vector<SelfReport> load_reports(const std::string& path, ParseMode mode = ParseMode::strict,
                                     std::vector<std::string>* warnings = nullptr);

}  // namespace affect
