#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "affect/emotion.hpp"
#include "affect/features.hpp"
#include "affect/random.hpp"
#include "affect/self_report.hpp"

namespace affect {

struct AnchorWeight {
  Emotion anchor = Emotion::joy;
  /// Relative weight of anchor levels 0..4.
  std::array<double, kLevelClassCount> level_weights{1, 1, 1, 1, 1};
};

/// Emotion -> behavior map of the generator. Dwell time, inter-key gap, mouse
/// speed and typing error rate are affine in arousal (mean of joy, anger, fear
/// and surprise levels). Each basic emotion additionally drives one behavior
/// channel of its own so that the full emotion state is recoverable from a
/// session. Per-event noise standard deviations are multiplied by
/// `behavior_noise`; 0 renders noiseless sessions.
struct BehaviorKernel {
  double base_dwell_ms = 90.0;
  double dwell_slope_ms = 15.0;
  double base_flight_ms = 160.0;
  double flight_slope_ms = -20.0;
  double base_mouse_speed = 600.0;
  double speed_slope = 80.0;
  double base_error_rate = 0.02;
  double error_rate_slope = 0.02;

  double fear_dwell_spread_ms = 8.0;           // dwell_std
  double anticipation_flight_spread_ms = 12.0;  // flight_std
  double surprise_speed_spread = 60.0;          // mouse_speed_std
  double sadness_idle_fraction = 0.08;          // mouse_idle_ratio
  double base_click_hold_ms = 100.0;
  double anger_click_slope_ms = 25.0;           // click_hold_mean_ms
  double base_tap_ms = 90.0;
  double disgust_tap_slope_ms = 25.0;           // touch_tap_duration_mean_ms
  double base_swipe_speed = 800.0;
  double joy_swipe_slope = 150.0;               // touch_swipe_speed_mean_px_per_s
  double base_touch_gap_ms = 600.0;
  double acceptance_gap_slope_ms = -100.0;      // touch_event_rate_per_s

  double behavior_noise = 1.0;

  int keystrokes = 80;
  int mouse_moves = 60;
  int mouse_interval_ms = 20;
  int clicks = 6;
  int touch_strokes = 16;
  int swipe_points = 6;
};

struct GeneratorConfig {
  std::uint64_t seed = 42;
  int participants = 10;
  int sessions_per_participant = 50;
  std::vector<AnchorWeight> anchors = default_anchors();
  /// Standard deviation, in levels, of co-occurring emotions around the
  /// anchor's expected profile.
  double noise_std = 0.25;
  BehaviorKernel kernel;

  /// Every supported anchor, all levels equally likely.
  static std::vector<AnchorWeight> default_anchors();

  /// Throws Error(config), or Error(unsupported_anchor) for an anchor without a
  /// co-occurrence table.
  void validate() const;
};

nlohmann::json to_json(const GeneratorConfig& config);

/// Arousal proxy: mean level of joy, anger, fear and surprise.
double arousal_of(const SelfReport& state);

/// Draws an anchor and integer level, then every other basic emotion as
/// clamp(round(expected + N(0, noise_std)), 0, 4). Non-basic emotions are 0.
/// Timestamp and participant are left for the caller.
SelfReport sample_state(const GeneratorConfig& config, KeyedStream& stream);

/// Keyboard, mouse and touch blocks, in that order, starting at `start_ms`.
/// Timestamps are strictly increasing.
Session render_session(const SelfReport& state, const GeneratorConfig& config, KeyedStream& stream,
                       std::int64_t start_ms = 0);

struct Dataset {
  /// reports[i] is the self-report that labels sessions[i].
  std::vector<SelfReport> reports;
  std::vector<Session> sessions;
};

/// Pure function of the config. Participant p, session s uses streams keyed by
/// (p, s, purpose), so adding participants or sessions leaves existing draws
/// unchanged.
Dataset generate(const GeneratorConfig& config);

std::string sha256_hex(std::string_view bytes);
std::string dataset_hash(const Dataset& dataset);

/// reports.jsonl, sessions/<pid>-<nnn>.jsonl and manifest.json (config, config
/// hash and dataset hash).
void write_dataset(const std::filesystem::path& dir, const GeneratorConfig& config, const Dataset& dataset);

}  // namespace affect
