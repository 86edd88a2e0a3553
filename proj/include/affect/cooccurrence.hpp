#pragma once

#include <array>
#include <iosfwd>
#include <span>

#include "affect/emotion.hpp"
#include "affect/self_report.hpp"

namespace affect {

inline constexpr std::size_t kCooccurrenceColumns = kBasicEmotionCount - 1;
inline constexpr double kDefaultPlausibilityTolerance = 0.75;

/// Expected levels of the seven other basic emotions, one row per integer
/// level of the anchor emotion.
struct CooccurrenceTable {
  Emotion anchor = Emotion::joy;
  std::array<std::array<double, kCooccurrenceColumns>, kLevelClassCount> rows{};

  /// The basic emotions minus the anchor, in table column order.
  std::array<Emotion, kCooccurrenceColumns> columns() const noexcept;
  /// Throws Error(validation) if `e` is not a column of this table.
  std::size_t column_of(Emotion e) const;
  double at(int anchor_level, Emotion e) const { return rows.at(static_cast<std::size_t>(anchor_level))[column_of(e)]; }

  friend bool operator==(const CooccurrenceTable&, const CooccurrenceTable&) = default;
};

inline constexpr std::array<Region, 3> kRegionalColumns = {Region::europe, Region::middle_east,
                                                           Region::south_east_asia};

/// Joy at 50% (level 2) broken down by region of origin.
struct RegionalTable {
  Emotion anchor = Emotion::joy;
  int anchor_level = 2;
  /// values[row][region]; rows follow CooccurrenceTable::columns() for joy.
  std::array<std::array<double, kRegionalColumns.size()>, kCooccurrenceColumns> values{};
};

/// Anchors with an embedded table: joy, anticipation, anger, fear, acceptance.
std::span<const Emotion> supported_anchors() noexcept;

/// Throws Error(unsupported_anchor) for any other emotion.
const CooccurrenceTable& table_for(Emotion anchor);
const RegionalTable& regional_table() noexcept;

/// Row `level` verbatim at integer levels, component-wise linear interpolation
/// between the bracketing rows otherwise.
EmotionProfile expected_profile(Emotion anchor, double level);

struct PlausibilityVerdict {
  bool plausible = false;
  double expected = 0.0;
  double hypothesized = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
};

/// Is `candidate` at `candidate_level` compatible with `anchor` at `anchor_level`?
/// Plausible iff |candidate_level - expected| <= tolerance.
PlausibilityVerdict plausibility(Emotion anchor, double anchor_level, Emotion candidate, double candidate_level,
                                 double tolerance = kDefaultPlausibilityTolerance);

/// Only (joy, 2) for europe, middle_east and south_east_asia has data; anything
/// else throws Error(no_regional_data).
EmotionProfile regional_profile(Region region, Emotion anchor, double level);

/// Per-anchor-level mean of every other basic emotion's reported level.
/// Throws Error(incomplete_data) listing the anchor levels with no reports.
CooccurrenceTable recompute_table(std::span<const SelfReport> reports, Emotion anchor);

/// `anchor_level,<emotion>,...` header then one row per level.
void write_table_csv(std::ostream& out, const CooccurrenceTable& table);
/// `emotion,europe,middle_east,south_east_asia`.
void write_regional_csv(std::ostream& out, const RegionalTable& table);

}  // namespace affect
