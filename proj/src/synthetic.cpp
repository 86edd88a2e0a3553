#include "affect/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <openssl/evp.h>

#include "affect/cooccurrence.hpp"
#include "affect/error.hpp"
#include "affect/reference.hpp"

namespace affect {

using nlohmann::json;

namespace {

// Stream purposes.
enum : std::uint64_t { kStateStream = 1, kBehaviorStream = 2, kRegionStream = 3 };

constexpr std::int64_t kEpochMs = 1'700'000'000'000;
constexpr std::int64_t kPromptIntervalMs = std::int64_t{reference::kPromptIntervalHours} * 3'600'000;

int level_of(const SelfReport& s, Emotion e) {
  auto it = s.levels.find(e);
  return it == s.levels.end() ? 0 : it->second.value();
}

std::int64_t at_least_one(double ms) { return std::max<std::int64_t>(1, std::llround(ms)); }

// Bresenham-style selector: true for round(fraction * n) of n calls, spread evenly.
class EvenSelector {
 public:
  explicit EvenSelector(double fraction) : fraction_(std::clamp(fraction, 0.0, 1.0)) {}
  bool next() {
    acc_ += fraction_;
    if (acc_ >= 1.0 - 1e-12) {
      acc_ -= 1.0;
      return true;
    }
    return false;
  }

 private:
  double fraction_;
  double acc_ = 0.0;
};

Region draw_region(KeyedStream& stream) {
  // Proportions of participants' regions of origin in the original study.
  const std::array<std::pair<Region, double>, 5> shares = {{{Region::europe, 18.37},
                                                            {Region::middle_east, 44.18},
                                                            {Region::south_east_asia, 13.17},
                                                            {Region::east_asia, 7.75},
                                                            {Region::other, 16.53}}};
  double u = stream.uniform() * 100.0;
  for (const auto& [region, share] : shares) {
    if (u < share) return region;
    u -= share;
  }
  return Region::other;
}

}  // namespace

std::vector<AnchorWeight> GeneratorConfig::default_anchors() {
  std::vector<AnchorWeight> out;
  for (Emotion e : supported_anchors()) out.push_back({e, {1, 1, 1, 1, 1}});
  return out;
}

void GeneratorConfig::validate() const {
  if (participants <= 0) throw Error(ErrorCode::config, "participants must be positive");
  if (sessions_per_participant <= 0) throw Error(ErrorCode::config, "sessions_per_participant must be positive");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw Error(ErrorCode::config, "noise_std must be >= 0");
  if (anchors.empty()) throw Error(ErrorCode::config, "anchor distribution is empty");
  double total = 0.0;
  for (const auto& a : anchors) {
    (void)table_for(a.anchor);
    for (double w : a.level_weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::config, "anchor level weights must be >= 0");
      total += w;
    }
  }
  if (!(total > 0.0)) throw Error(ErrorCode::config, "anchor distribution has zero total weight");

  const auto& k = kernel;
  for (double v : {k.base_dwell_ms, k.dwell_slope_ms, k.base_flight_ms, k.flight_slope_ms, k.base_mouse_speed,
                   k.speed_slope, k.base_error_rate, k.error_rate_slope, k.fear_dwell_spread_ms,
                   k.anticipation_flight_spread_ms, k.surprise_speed_spread, k.sadness_idle_fraction,
                   k.base_click_hold_ms, k.anger_click_slope_ms, k.base_tap_ms, k.disgust_tap_slope_ms,
                   k.base_swipe_speed, k.joy_swipe_slope, k.base_touch_gap_ms, k.acceptance_gap_slope_ms,
                   k.behavior_noise}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::config, "behavior kernel parameters must be finite");
  }
  if (k.behavior_noise < 0.0) throw Error(ErrorCode::config, "behavior_noise must be >= 0");
  if (k.keystrokes < 0 || k.mouse_moves < 0 || k.clicks < 0 || k.touch_strokes < 0 || k.swipe_points < 1 ||
      k.mouse_interval_ms < 1) {
    throw Error(ErrorCode::config, "behavior kernel event counts are invalid");
  }
}

json to_json(const GeneratorConfig& c) {
  json anchors = json::array();
  for (const auto& a : c.anchors) anchors.push_back({{"anchor", std::string(to_string(a.anchor))}, {"level_weights", a.level_weights}});
  const auto& k = c.kernel;
  json kernel = {
      {"base_dwell_ms", k.base_dwell_ms},
      {"dwell_slope_ms", k.dwell_slope_ms},
      {"base_flight_ms", k.base_flight_ms},
      {"flight_slope_ms", k.flight_slope_ms},
      {"base_mouse_speed", k.base_mouse_speed},
      {"speed_slope", k.speed_slope},
      {"base_error_rate", k.base_error_rate},
      {"error_rate_slope", k.error_rate_slope},
      {"fear_dwell_spread_ms", k.fear_dwell_spread_ms},
      {"anticipation_flight_spread_ms", k.anticipation_flight_spread_ms},
      {"surprise_speed_spread", k.surprise_speed_spread},
      {"sadness_idle_fraction", k.sadness_idle_fraction},
      {"base_click_hold_ms", k.base_click_hold_ms},
      {"anger_click_slope_ms", k.anger_click_slope_ms},
      {"base_tap_ms", k.base_tap_ms},
      {"disgust_tap_slope_ms", k.disgust_tap_slope_ms},
      {"base_swipe_speed", k.base_swipe_speed},
      {"joy_swipe_slope", k.joy_swipe_slope},
      {"base_touch_gap_ms", k.base_touch_gap_ms},
      {"acceptance_gap_slope_ms", k.acceptance_gap_slope_ms},
      {"behavior_noise", k.behavior_noise},
      {"keystrokes", k.keystrokes},
      {"mouse_moves", k.mouse_moves},
      {"mouse_interval_ms", k.mouse_interval_ms},
      {"clicks", k.clicks},
      {"touch_strokes", k.touch_strokes},
      {"swipe_points", k.swipe_points},
  };
  return {{"seed", c.seed},
          {"participants", c.participants},
          {"sessions_per_participant", c.sessions_per_participant},
          {"noise_std", c.noise_std},
          {"anchors", anchors},
          {"kernel", kernel}};
}

double arousal_of(const SelfReport& s) {
  return (level_of(s, Emotion::joy) + level_of(s, Emotion::anger) + level_of(s, Emotion::fear) +
          level_of(s, Emotion::surprise)) /
         4.0;
}

SelfReport sample_state(const GeneratorConfig& config, KeyedStream& stream) {
  config.validate();
  double total = 0.0;
  for (const auto& a : config.anchors) {
    for (double w : a.level_weights) total += w;
  }
  double u = stream.uniform() * total;
  Emotion anchor = config.anchors.back().anchor;
  int anchor_level = 4;
  bool picked = false;
  for (const auto& a : config.anchors) {
    for (std::size_t l = 0; l < kLevelClassCount && !picked; ++l) {
      if (u < a.level_weights[l]) {
        anchor = a.anchor;
        anchor_level = static_cast<int>(l);
        picked = true;
      } else {
        u -= a.level_weights[l];
      }
    }
    if (picked) break;
  }

  SelfReport state = SelfReport::all_zero(0, "");
  state.levels[anchor] = LevelClass(anchor_level);
  const auto& table = table_for(anchor);
  for (Emotion e : table.columns()) {
    const double expected = table.at(anchor_level, e);
    const double noisy = expected + config.noise_std * stream.gaussian();
    state.levels[e] = LevelClass(static_cast<int>(std::clamp(std::round(noisy), 0.0, kMaxLevel)));
  }
  return state;
}

Session render_session(const SelfReport& state, const GeneratorConfig& config, KeyedStream& stream,
                       std::int64_t start_ms) {
  const auto& k = config.kernel;
  const double noise = k.behavior_noise;
  const double arousal = arousal_of(state);
  auto level = [&](Emotion e) { return static_cast<double>(level_of(state, e)); };

  Session s;
  s.participant_id = state.participant_id;
  s.region = state.region;
  s.start_ms = start_ms;
  auto& ev = s.events;
  std::int64_t t = start_ms + 1000;

  // Keyboard: dwell and flight are affine in arousal; fear and anticipation
  // alternate them around their means to widen the spread.
  const double dwell_mean = k.base_dwell_ms + k.dwell_slope_ms * arousal;
  const double flight_mean = k.base_flight_ms + k.flight_slope_ms * arousal;
  const double error_rate = std::clamp(k.base_error_rate + k.error_rate_slope * arousal, 0.0, 1.0);
  for (int i = 0; i < k.keystrokes; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    const int key = stream.uniform() < error_rate ? kBackspaceKey : 65 + static_cast<int>(stream.below(26));
    const std::int64_t dwell = at_least_one(dwell_mean + sign * k.fear_dwell_spread_ms * level(Emotion::fear) +
                                            4.0 * noise * stream.gaussian());
    const std::int64_t flight =
        at_least_one(flight_mean + sign * k.anticipation_flight_spread_ms * level(Emotion::anticipation) +
                     6.0 * noise * stream.gaussian());
    ev.push_back({t, EventKind::key_down, key});
    ev.push_back({t + dwell, EventKind::key_up, key});
    t += dwell + flight;
  }

  // Mouse: a sadness-dependent share of intervals is stationary; moving
  // intervals run at an arousal-driven speed spread by surprise.
  t += 500;
  double x = 500.0, y = 400.0;
  EvenSelector idle(k.sadness_idle_fraction * level(Emotion::sadness));
  const double speed_mean = k.base_mouse_speed + k.speed_slope * arousal;
  if (k.mouse_moves > 0) ev.push_back({t, EventKind::mouse_move, 0, x, y});
  int moving = 0;
  for (int i = 1; i < k.mouse_moves; ++i) {
    const double direction = 2.0 * std::numbers::pi * stream.uniform();
    const double jitter = stream.gaussian();
    t += k.mouse_interval_ms;
    if (!idle.next()) {
      const double sign = (moving++ % 2 == 0) ? 1.0 : -1.0;
      const double speed =
          std::max(1.0, speed_mean + sign * k.surprise_speed_spread * level(Emotion::surprise) + 30.0 * noise * jitter);
      const double step = speed * k.mouse_interval_ms / 1000.0;
      x += step * std::cos(direction);
      y += step * std::sin(direction);
    }
    ev.push_back({t, EventKind::mouse_move, 0, x, y});
  }
  for (int i = 0; i < k.clicks; ++i) {
    t += 150;
    const std::int64_t hold =
        at_least_one(k.base_click_hold_ms + k.anger_click_slope_ms * level(Emotion::anger) + 8.0 * noise * stream.gaussian());
    ev.push_back({t, EventKind::mouse_down, 0, x, y, 0});
    t += hold;
    ev.push_back({t, EventKind::mouse_up, 0, x, y, 0});
  }

  // Touch: taps (duration from disgust) alternate with swipes (speed from joy);
  // the gap between strokes shrinks with acceptance.
  t += 500;
  const double tap_ms = k.base_tap_ms + k.disgust_tap_slope_ms * level(Emotion::disgust);
  const double swipe_speed = k.base_swipe_speed + k.joy_swipe_slope * level(Emotion::joy);
  const double gap_ms = k.base_touch_gap_ms + k.acceptance_gap_slope_ms * level(Emotion::acceptance);
  constexpr int kSwipeStepMs = 16;
  for (int i = 0; i < k.touch_strokes; ++i) {
    if (i > 0) t += at_least_one(gap_ms + 30.0 * noise * stream.gaussian());
    double tx = 200.0 + 20.0 * (i % 5), ty = 600.0;
    if (i % 2 == 0) {
      const std::int64_t duration = at_least_one(tap_ms + 8.0 * noise * stream.gaussian());
      ev.push_back({t, EventKind::touch_down, 0, tx, ty, 0, 0});
      t += duration;
      ev.push_back({t, EventKind::touch_up, 0, tx, ty, 0, 0});
    } else {
      const double speed = std::max(1.0, swipe_speed + 50.0 * noise * stream.gaussian());
      const double step = speed * kSwipeStepMs / 1000.0;
      ev.push_back({t, EventKind::touch_down, 0, tx, ty, 0, 0});
      for (int p = 0; p < k.swipe_points; ++p) {
        t += kSwipeStepMs;
        ty -= step;
        ev.push_back({t, p + 1 == k.swipe_points ? EventKind::touch_up : EventKind::touch_move, 0, tx, ty, 0, 0});
      }
    }
  }
  return s;
}

Dataset generate(const GeneratorConfig& config) {
  config.validate();
  Dataset d;
  const auto total = static_cast<std::size_t>(config.participants) * static_cast<std::size_t>(config.sessions_per_participant);
  d.reports.reserve(total);
  d.sessions.reserve(total);
  for (int p = 0; p < config.participants; ++p) {
    std::ostringstream pid;
    pid << 'p' << std::setw(3) << std::setfill('0') << (p + 1);
    KeyedStream region_stream(config.seed, {static_cast<std::uint64_t>(p), kRegionStream});
    const Region region = draw_region(region_stream);
    for (int s = 0; s < config.sessions_per_participant; ++s) {
      const auto key_p = static_cast<std::uint64_t>(p);
      const auto key_s = static_cast<std::uint64_t>(s);
      KeyedStream state_stream(config.seed, {key_p, key_s, kStateStream});
      KeyedStream behavior_stream(config.seed, {key_p, key_s, kBehaviorStream});

      SelfReport report = sample_state(config, state_stream);
      report.participant_id = pid.str();
      report.region = region;
      report.timestamp_ms = kEpochMs + s * kPromptIntervalMs + p * 60'000;
      const std::int64_t start = report.timestamp_ms + 60'000;
      d.sessions.push_back(render_session(report, config, behavior_stream, start));
      d.reports.push_back(std::move(report));
    }
  }
  return d;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::io, "SHA-256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return out.str();
}

namespace {

std::string session_file_name(const Session& s, std::size_t index) {
  std::ostringstream name;
  name << s.participant_id << '-' << std::setw(3) << std::setfill('0') << index << ".jsonl";
  return name.str();
}

}  // namespace

std::string dataset_hash(const Dataset& dataset) {
  std::ostringstream all;
  write_reports(all, dataset.reports);
  for (const auto& s : dataset.sessions) write_session(all, s);
  return sha256_hex(all.str());
}

void write_dataset(const std::filesystem::path& dir, const GeneratorConfig& config, const Dataset& dataset) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir / "sessions", ec);
  if (ec) throw Error(ErrorCode::io, "cannot create '" + (dir / "sessions").string() + "': " + ec.message());

  auto open = [](const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
    return out;
  };
  {
    auto out = open(dir / "reports.jsonl");
    write_reports(out, dataset.reports);
  }
  std::map<std::string, std::size_t> per_participant;
  for (const auto& s : dataset.sessions) {
    auto out = open(dir / "sessions" / session_file_name(s, per_participant[s.participant_id]++));
    write_session(out, s);
  }
  const json cfg = to_json(config);
  const json manifest = {{"config", cfg},
                         {"config_hash", sha256_hex(cfg.dump())},
                         {"dataset_hash", dataset_hash(dataset)},
                         {"reports", dataset.reports.size()},
                         {"sessions", dataset.sessions.size()}};
  auto out = open(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
}

}  // namespace affect
