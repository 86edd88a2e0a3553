#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "affect/emotion.hpp"
#include "affect/self_report.hpp"

namespace affect {

enum class EventKind : std::uint8_t {
  key_down,
  key_up,
  mouse_move,
  mouse_down,
  mouse_up,
  touch_down,
  touch_move,
  touch_up,
};

std::string_view to_string(EventKind kind) noexcept;
EventKind parse_event_kind(std::string_view token);

inline constexpr int kBackspaceKey = 8;

/// One recorded input event. Key events use `key`; pointer events use `x`/`y`
/// plus `button` (mouse) or `pointer` (touch).
struct InteractionEvent {
  std::int64_t ts = 0;
  EventKind kind = EventKind::key_down;
  int key = 0;
  double x = 0.0;
  double y = 0.0;
  int button = 0;
  int pointer = 0;

  friend bool operator==(const InteractionEvent&, const InteractionEvent&) = default;
};

struct Session {
  std::string participant_id;
  std::optional<Region> region;
  /// Session start; defaults to the first event's timestamp when absent.
  std::optional<std::int64_t> start_ms;
  std::vector<InteractionEvent> events;

  std::int64_t timestamp() const noexcept;

  friend bool operator==(const Session&, const Session&) = default;
};

inline constexpr int kFeatureSchemaVersion = 1;

enum class Feature : std::uint8_t {
  dwell_mean_ms,
  dwell_std_ms,
  flight_mean_ms,
  flight_std_ms,
  digraph_latency_mean_ms,
  typing_rate_keys_per_s,
  backspace_ratio,
  mouse_speed_mean_px_per_s,
  mouse_speed_std,
  mouse_idle_ratio,
  click_hold_mean_ms,
  touch_tap_duration_mean_ms,
  touch_swipe_speed_mean_px_per_s,
  touch_event_rate_per_s,
  kb_present,
  mouse_present,
  touch_present,
};

inline constexpr std::size_t kFeatureCount = 17;

std::span<const std::string_view> feature_names() noexcept;

struct FeatureVector {
  int schema_version = kFeatureSchemaVersion;
  std::array<double, kFeatureCount> values{};

  double operator[](Feature f) const noexcept { return values[static_cast<std::size_t>(f)]; }
  double& operator[](Feature f) noexcept { return values[static_cast<std::size_t>(f)]; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Feature definitions (schema 1):
///  - dwell: key_up.ts - key_down.ts of the same key code.
///  - flight: next key_down.ts - previous key_up.ts, clamped at 0 (rollover).
///  - digraph latency: gap between consecutive key_down events.
///  - typing rate: keystrokes / (last key_up - first key_down).
///  - mouse speed: path length / elapsed time between consecutive mouse_move
///    events that moved; stationary intervals count toward mouse_idle_ratio.
///  - touch: a stroke without movement is a tap, otherwise a swipe.
/// Means and standard deviations are population statistics. A modality with
/// no events yields zeros and a 0 presence flag.
///
/// Strict mode throws Error(validation) on unsorted timestamps, releases with no
/// matching press and presses never released. Lenient mode skips those events
/// and reports how many were dropped.
struct Extraction {
  FeatureVector features;
  std::size_t skipped_events = 0;
};

Extraction extract_detailed(const Session& session, ParseMode mode = ParseMode::strict);
FeatureVector extract(const Session& session, ParseMode mode = ParseMode::strict);

struct BatchExtraction {
  /// One slot per input session, in input order; empty where extraction failed.
  std::vector<std::optional<FeatureVector>> features;
  std::vector<std::pair<std::size_t, std::string>> errors;
};

/// Strict mode rethrows the first failure; lenient mode records it and moves on.
BatchExtraction extract_batch(std::span<const Session> sessions, ParseMode mode = ParseMode::strict);

// JSON Lines: a header object {"pid", "region"[, "ts"]} then one event per line.
nlohmann::json to_json(const InteractionEvent& event);
InteractionEvent event_from_json(const nlohmann::json& j);
void write_session(std::ostream& out, const Session& session);
Session read_session(std::istream& in, ParseMode mode = ParseMode::strict);
Session load_session(const std::string& path, ParseMode mode = ParseMode::strict);
/// Reads bare event lines (no header), as produced by a recorder or replay file.
std::vector<InteractionEvent> read_events(std::istream& in);

/// One extracted session in a features file.
struct FeatureRecord {
  std::string participant_id;
  std::optional<Region> region;
  std::int64_t timestamp_ms = 0;
  FeatureVector features;

  friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

nlohmann::json to_json(const FeatureRecord& record);
FeatureRecord feature_record_from_json(const nlohmann::json& j);
void write_feature_records(std::ostream& out, std::span<const FeatureRecord> records);
std::vector<FeatureRecord> read_feature_records(std::istream& in);
std::vector<FeatureRecord> load_feature_records(const std::string& path);

}  // namespace affect
