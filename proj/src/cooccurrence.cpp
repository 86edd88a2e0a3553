#include "affect/cooccurrence.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "affect/error.hpp"

namespace affect {

namespace {

// Columns follow basic_emotions() order with the anchor removed.
constexpr CooccurrenceTable kJoy{Emotion::joy,
                                 {{{0.6, 1.73, 1.4, 2.13, 0.66, 1.2, 1.06},
                                   {1.75, 0.83, 0.62, 1.04, 0.85, 1.37, 1.7},
                                   {1.7, 0.95, 0.84, 1.34, 1.06, 1.04, 2.15},
                                   {2.14, 0.88, 0.64, 0.91, 1.08, 0.91, 2.11},
                                   {2.58, 1.25, 0.83, 0.83, 2.08, 0.66, 2.83}}}};

// Level 0 is the seven-value row printed apart from the rest of the table.
constexpr CooccurrenceTable kAnticipation{Emotion::anticipation,
                                          {{{1.42, 0.6, 0.6, 1.21, 0.25, 0.92, 1.5},
                                            {1.92, 0.92, 0.92, 0.92, 1.36, 1.04, 1.96},
                                            {1.97, 1.2, 0.88, 1.26, 1.05, 1.23, 1.97},
                                            {2.41, 1.22, 0.74, 1.19, 1.54, 0.9, 2.38},
                                            {2.9, 1.27, 1.09, 1.81, 1.36, 1.27, 2.36}}}};

constexpr CooccurrenceTable kAnger{Emotion::anger,
                                   {{{2.01, 1.42, 0.21, 0.65, 0.59, 0.63, 1.8},
                                     {2.31, 2, 0.86, 1, 1.62, 1.2, 2.13},
                                     {1.85, 2.42, 1.23, 2.09, 1.42, 1.66, 2.42},
                                     {2.3, 2.1, 1.7, 1.8, 1.4, 2, 2},
                                     {1.25, 1.62, 3, 3.25, 1.62, 0.85, 1.87}}}};

constexpr CooccurrenceTable kFear{Emotion::fear,
                                  {{{2.09, 1.72, 0.77, 0.61, 0.87, 0.77, 1.85},
                                    {2.15, 1.71, 0.79, 0.74, 1.23, 1.15, 2.12},
                                    {2.1, 2.05, 1.78, 1.05, 1.94, 1.52, 2.1},
                                    {1.55, 2.11, 1.11, 1.22, 1.33, 1.22, 2},
                                    {1.37, 1.5, 2, 1.5, 1.62, 1.62, 2.12}}}};

constexpr CooccurrenceTable kAcceptance{Emotion::acceptance,
                                        {{{1.48, 1.04, 0.52, 0.32, 0.84, 0.32, 0.72},
                                          {1.72, 1.83, 1.61, 0.94, 1.66, 1.22, 1.27},
                                          {1.96, 2.06, 1, 1.03, 1.06, 1.29, 1.12},
                                          {2.42, 1.9, 1.11, 0.92, 1.4, 1.14, 1.14},
                                          {2.38, 2.07, 1, 0.69, 1.07, 1.69, 0.92}}}};

constexpr RegionalTable kRegional{Emotion::joy,
                                  2,
                                  {{{1.14, 1.8, 1.66},
                                    {0.42, 1.09, 1.5},
                                    {0.71, 0.71, 1.16},
                                    {1, 1.66, 0.5},
                                    {0.57, 1.33, 1.33},
                                    {0.85, 1.33, 0.66},
                                    {2, 2.09, 2.33}}}};

constexpr std::array<Emotion, 5> kSupported = {Emotion::joy, Emotion::anticipation, Emotion::anger, Emotion::fear,
                                               Emotion::acceptance};

std::array<Emotion, kCooccurrenceColumns> columns_for(Emotion anchor) noexcept {
  std::array<Emotion, kCooccurrenceColumns> out{};
  std::size_t i = 0;
  for (Emotion e : basic_emotions()) {
    if (e != anchor && i < out.size()) out[i++] = e;
  }
  return out;
}

std::string name(Emotion e) { return std::string(to_string(e)); }

void check_level(double level) { (void)Level(level); }

}  // namespace

std::array<Emotion, kCooccurrenceColumns> CooccurrenceTable::columns() const noexcept { return columns_for(anchor); }

std::size_t CooccurrenceTable::column_of(Emotion e) const {
  const auto cols = columns();
  auto it = std::find(cols.begin(), cols.end(), e);
  if (it == cols.end()) {
    throw Error(ErrorCode::validation, "'" + name(e) + "' is not a column of the " + name(anchor) + " table");
  }
  return static_cast<std::size_t>(it - cols.begin());
}

std::span<const Emotion> supported_anchors() noexcept { return kSupported; }

const CooccurrenceTable& table_for(Emotion anchor) {
  switch (anchor) {
    case Emotion::joy: return kJoy;
    case Emotion::anticipation: return kAnticipation;
    case Emotion::anger: return kAnger;
    case Emotion::fear: return kFear;
    case Emotion::acceptance: return kAcceptance;
    default:
      throw Error(ErrorCode::unsupported_anchor, "unsupported anchor '" + name(anchor) + "'");
  }
}

const RegionalTable& regional_table() noexcept { return kRegional; }

EmotionProfile expected_profile(Emotion anchor, double level) {
  const auto& table = table_for(anchor);
  check_level(level);
  const auto cols = table.columns();
  EmotionProfile profile;

  const double lower = std::floor(level);
  const auto lo = static_cast<std::size_t>(lower);
  if (lower == level) {
    for (std::size_t c = 0; c < cols.size(); ++c) profile.emplace(cols[c], Level(table.rows[lo][c]));
    return profile;
  }
  const double frac = level - lower;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const double v = (1.0 - frac) * table.rows[lo][c] + frac * table.rows[lo + 1][c];
    profile.emplace(cols[c], Level(std::clamp(v, 0.0, kMaxLevel)));
  }
  return profile;
}

PlausibilityVerdict plausibility(Emotion anchor, double anchor_level, Emotion candidate, double candidate_level,
                                 double tolerance) {
  (void)table_for(anchor);
  if (candidate == anchor) {
    throw Error(ErrorCode::invalid_candidate, "candidate '" + name(candidate) + "' equals the anchor");
  }
  if (!is_basic(candidate)) {
    throw Error(ErrorCode::invalid_candidate, "candidate '" + name(candidate) + "' is not a basic emotion");
  }
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw Error(ErrorCode::range, "tolerance must be positive");
  }
  check_level(candidate_level);

  PlausibilityVerdict v;
  v.expected = expected_profile(anchor, anchor_level).at(candidate).value();
  v.hypothesized = candidate_level;
  v.margin = std::abs(candidate_level - v.expected);
  v.tolerance = tolerance;
  v.plausible = v.margin <= tolerance;
  return v;
}

EmotionProfile regional_profile(Region region, Emotion anchor, double level) {
  check_level(level);
  const auto& t = regional_table();
  auto it = std::find(kRegionalColumns.begin(), kRegionalColumns.end(), region);
  if (anchor != t.anchor || level != t.anchor_level || it == kRegionalColumns.end()) {
    throw Error(ErrorCode::no_regional_data, "no regional data for " + name(anchor) + " at level " +
                                                 std::to_string(level) + " in region '" +
                                                 std::string(to_string(region)) + "'");
  }
  const auto col = static_cast<std::size_t>(it - kRegionalColumns.begin());
  const auto rows = columns_for(t.anchor);
  EmotionProfile profile;
  for (std::size_t r = 0; r < rows.size(); ++r) profile.emplace(rows[r], Level(t.values[r][col]));
  return profile;
}

CooccurrenceTable recompute_table(std::span<const SelfReport> reports, Emotion anchor) {
  if (!is_basic(anchor)) {
    throw Error(ErrorCode::unsupported_anchor, "anchor '" + name(anchor) + "' is not a basic emotion");
  }
  CooccurrenceTable table;
  table.anchor = anchor;
  const auto cols = table.columns();

  // Integer sums keep the result independent of report order.
  std::array<std::array<long long, kCooccurrenceColumns>, kLevelClassCount> sums{};
  std::array<long long, kLevelClassCount> counts{};
  for (const auto& report : reports) {
    const auto anchor_it = report.levels.find(anchor);
    if (anchor_it == report.levels.end()) {
      throw Error(ErrorCode::validation, "report without a level for '" + name(anchor) + "'");
    }
    const auto row = static_cast<std::size_t>(anchor_it->second.value());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto it = report.levels.find(cols[c]);
      if (it == report.levels.end()) {
        throw Error(ErrorCode::validation, "report without a level for '" + name(cols[c]) + "'");
      }
      sums[row][c] += it->second.value();
    }
    ++counts[row];
  }

  std::string missing;
  for (std::size_t l = 0; l < kLevelClassCount; ++l) {
    if (counts[l] == 0) missing += (missing.empty() ? "" : ", ") + std::to_string(l);
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::incomplete_data, "no reports with " + name(anchor) + " at level(s) " + missing);
  }
  for (std::size_t l = 0; l < kLevelClassCount; ++l) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      table.rows[l][c] = static_cast<double>(sums[l][c]) / static_cast<double>(counts[l]);
    }
  }
  return table;
}

void write_table_csv(std::ostream& out, const CooccurrenceTable& table) {
  out << "anchor_level";
  for (Emotion e : table.columns()) out << ',' << to_string(e);
  out << '\n';
  for (std::size_t l = 0; l < kLevelClassCount; ++l) {
    out << l;
    for (double v : table.rows[l]) out << ',' << v;
    out << '\n';
  }
}

void write_regional_csv(std::ostream& out, const RegionalTable& table) {
  out << "emotion";
  for (Region r : kRegionalColumns) out << ',' << to_string(r);
  out << '\n';
  const auto rows = columns_for(table.anchor);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << to_string(rows[r]);
    for (double v : table.values[r]) out << ',' << v;
    out << '\n';
  }
}

}  // namespace affect
