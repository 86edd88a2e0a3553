#include "affect/emotion.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "affect/error.hpp"

namespace affect {

namespace {

constexpr std::array<std::string_view, kReportableEmotionCount + 1> kNames = {
    "joy",         "surprise",  "excited",  "enthusiastic", "inspired", "active",   "anticipation",
    "fear",        "upset",     "proud",    "nervous",      "afraid",   "anger",    "acceptance",
    "strong",      "irritable", "determined", "disgust",    "interested", "guilty", "alert",
    "attentive",   "sadness",   "distressed", "hostile",    "ashamed",  "jittery",  "neutral",
};

constexpr std::array<Emotion, kReportableEmotionCount> kReportable = [] {
  std::array<Emotion, kReportableEmotionCount> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<Emotion>(i);
  return out;
}();

constexpr std::array<Emotion, kBasicEmotionCount> kBasic = {
    Emotion::joy,     Emotion::anticipation, Emotion::anger, Emotion::disgust,
    Emotion::sadness, Emotion::surprise,     Emotion::fear,  Emotion::acceptance,
};

constexpr std::array<std::string_view, 5> kRegionNames = {
    "europe", "middle_east", "south_east_asia", "east_asia", "other",
};

std::string normalize(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    if (c == ' ' || c == '-') c = '_';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::span<const Emotion> reportable_emotions() noexcept { return kReportable; }
std::span<const Emotion> basic_emotions() noexcept { return kBasic; }

bool is_basic(Emotion e) noexcept { return std::find(kBasic.begin(), kBasic.end(), e) != kBasic.end(); }
bool is_reportable(Emotion e) noexcept { return e != Emotion::neutral; }

std::string_view to_string(Emotion e) noexcept { return kNames[static_cast<std::size_t>(e)]; }

Emotion parse_emotion(std::string_view token) {
  const std::string key = normalize(token);
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == key) return static_cast<Emotion>(i);
  }
  throw Error(ErrorCode::parse, "unknown emotion '" + std::string(token) + "'");
}

Level::Level(double value) : value_(value) {
  if (!(value >= 0.0 && value <= kMaxLevel)) {
    throw Error(ErrorCode::range, "level " + std::to_string(value) + " outside [0, 4]");
  }
}

LevelClass::LevelClass(int value) : value_(value) {
  if (value < 0 || value > 4) {
    throw Error(ErrorCode::range, "level class " + std::to_string(value) + " outside {0..4}");
  }
}

double percent(double level) { return Level(level).value() / kMaxLevel * 100.0; }

Level level_from_percent(double p) {
  if (!(p >= 0.0 && p <= 100.0)) {
    throw Error(ErrorCode::range, "percentage " + std::to_string(p) + " outside [0, 100]");
  }
  return Level(p / 100.0 * kMaxLevel);
}

std::string_view to_string(Region r) noexcept { return kRegionNames[static_cast<std::size_t>(r)]; }

Region parse_region(std::string_view token) {
  const std::string key = normalize(token);
  for (std::size_t i = 0; i < kRegionNames.size(); ++i) {
    if (kRegionNames[i] == key) return static_cast<Region>(i);
  }
  throw Error(ErrorCode::parse, "unknown region '" + std::string(token) + "'");
}

}  // namespace affect
