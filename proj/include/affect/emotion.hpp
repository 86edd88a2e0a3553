#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace affect {

/// The 27 self-reportable emotions (PANAS plus the seven missing basic
/// emotions) in questionnaire order, followed by `neutral`, which only exists
/// as an evaluation outcome ("no emotion detected").
enum class Emotion : std::uint8_t {
  joy,
  surprise,
  excited,
  enthusiastic,
  inspired,
  active,
  anticipation,
  fear,
  upset,
  proud,
  nervous,
  afraid,
  anger,
  acceptance,
  strong,
  irritable,
  determined,
  disgust,
  interested,
  guilty,
  alert,
  attentive,
  sadness,
  distressed,
  hostile,
  ashamed,
  jittery,
  neutral,
};

inline constexpr std::size_t kReportableEmotionCount = 27;
inline constexpr std::size_t kBasicEmotionCount = 8;
inline constexpr std::size_t kLevelClassCount = 5;
inline constexpr double kMaxLevel = 4.0;

/// All 27 reportable emotions, questionnaire order. Excludes `neutral`.
std::span<const Emotion> reportable_emotions() noexcept;

/// joy, anticipation, anger, disgust, sadness, surprise, fear, acceptance.
/// This is also the column order of every co-occurrence table.
std::span<const Emotion> basic_emotions() noexcept;

bool is_basic(Emotion e) noexcept;
bool is_reportable(Emotion e) noexcept;

std::string_view to_string(Emotion e) noexcept;

/// Case-insensitive; accepts the 27 reportable names and `neutral`.
/// Throws Error(parse) naming the token otherwise.
Emotion parse_emotion(std::string_view token);

/// Continuous intensity in [0, 4].
class Level {
 public:
  constexpr Level() = default;
  /// Throws Error(range) outside [0, 4] or for non-finite input.
  explicit Level(double value);

  constexpr double value() const noexcept { return value_; }

  friend constexpr auto operator<=>(const Level&, const Level&) = default;

 private:
  double value_ = 0.0;
};

/// Discrete intensity class 0..4. 0 means the emotion is absent.
class LevelClass {
 public:
  constexpr LevelClass() = default;
  /// Throws Error(range) outside {0,..,4}.
  explicit LevelClass(int value);

  constexpr int value() const noexcept { return value_; }

  friend constexpr auto operator<=>(const LevelClass&, const LevelClass&) = default;

 private:
  int value_ = 0;
};

/// level / 4 * 100. Throws Error(range) if level is outside [0, 4].
double percent(double level);
/// p / 100 * 4. Throws Error(range) if p is outside [0, 100].
Level level_from_percent(double p);

enum class Region : std::uint8_t { europe, middle_east, south_east_asia, east_asia, other };

std::string_view to_string(Region r) noexcept;
/// Case-insensitive; spaces, hyphens and underscores are interchangeable.
Region parse_region(std::string_view token);

using EmotionProfile = std::map<Emotion, Level>;

}  // namespace affect
