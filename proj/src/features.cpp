#include "affect/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "affect/error.hpp"

namespace affect {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 8> kKindNames = {
    "key_down", "key_up", "mouse_move", "mouse_down", "mouse_up", "touch_down", "touch_move", "touch_up",
};

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "dwell_mean_ms",
    "dwell_std_ms",
    "flight_mean_ms",
    "flight_std_ms",
    "digraph_latency_mean_ms",
    "typing_rate_keys_per_s",
    "backspace_ratio",
    "mouse_speed_mean_px_per_s",
    "mouse_speed_std",
    "mouse_idle_ratio",
    "click_hold_mean_ms",
    "touch_tap_duration_mean_ms",
    "touch_swipe_speed_mean_px_per_s",
    "touch_event_rate_per_s",
    "kb_present",
    "mouse_present",
    "touch_present",
};

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double stddev() const {
    if (n == 0) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, sum_sq / static_cast<double>(n) - m * m));
  }
};

struct Keystroke {
  std::int64_t down = 0;
  std::int64_t up = 0;
  int key = 0;
};

struct Point {
  std::int64_t ts = 0;
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b) { return std::hypot(b.x - a.x, b.y - a.y); }

double per_second(double count, std::int64_t span_ms) {
  return span_ms > 0 ? count / (static_cast<double>(span_ms) / 1000.0) : 0.0;
}

// Rejects (strict) or drops (lenient) malformed events while pairing presses
// with releases.
class Pairing {
 public:
  explicit Pairing(ParseMode mode) : mode_(mode) {}

  void reject(const std::string& why) {
    if (mode_ == ParseMode::strict) throw Error(ErrorCode::validation, why);
    ++skipped_;
  }
  std::size_t skipped() const { return skipped_; }

 private:
  ParseMode mode_;
  std::size_t skipped_ = 0;
};

std::string at(const InteractionEvent& e) {
  return std::string(to_string(e.kind)) + " at " + std::to_string(e.ts) + " ms";
}

}  // namespace

std::string_view to_string(EventKind kind) noexcept { return kKindNames[static_cast<std::size_t>(kind)]; }

EventKind parse_event_kind(std::string_view token) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == token) return static_cast<EventKind>(i);
  }
  throw Error(ErrorCode::parse, "unknown event kind '" + std::string(token) + "'");
}

std::int64_t Session::timestamp() const noexcept {
  if (start_ms) return *start_ms;
  return events.empty() ? 0 : events.front().ts;
}

std::span<const std::string_view> feature_names() noexcept { return kFeatureNames; }

Extraction extract_detailed(const Session& session, ParseMode mode) {
  Pairing pairing(mode);

  std::vector<Keystroke> keystrokes;
  std::map<int, std::int64_t> held_keys;

  std::vector<Point> moves;
  std::map<int, std::int64_t> held_buttons;
  Moments click_hold;
  bool mouse_seen = false;

  std::map<int, std::vector<Point>> open_strokes;
  std::vector<std::vector<Point>> strokes;
  std::size_t touch_events = 0;
  std::int64_t touch_first = 0, touch_last = 0;

  std::int64_t last_ts = 0;
  bool any = false;
  for (const auto& e : session.events) {
    if (e.ts < 0) {
      pairing.reject("negative timestamp in " + at(e));
      continue;
    }
    if (any && e.ts < last_ts) {
      pairing.reject("events out of order: " + at(e) + " follows " + std::to_string(last_ts) + " ms");
      continue;
    }
    any = true;
    last_ts = e.ts;

    switch (e.kind) {
      case EventKind::key_down:
        // A second press of a held key is auto-repeat, not a new keystroke.
        if (!held_keys.contains(e.key)) held_keys.emplace(e.key, e.ts);
        break;
      case EventKind::key_up: {
        auto it = held_keys.find(e.key);
        if (it == held_keys.end()) {
          pairing.reject("key_up for key " + std::to_string(e.key) + " with no matching key_down, " + at(e));
          break;
        }
        keystrokes.push_back({it->second, e.ts, e.key});
        held_keys.erase(it);
        break;
      }
      case EventKind::mouse_move:
        mouse_seen = true;
        moves.push_back({e.ts, e.x, e.y});
        break;
      case EventKind::mouse_down:
        mouse_seen = true;
        held_buttons[e.button] = e.ts;
        break;
      case EventKind::mouse_up: {
        auto it = held_buttons.find(e.button);
        if (it == held_buttons.end()) {
          pairing.reject("mouse_up with no matching mouse_down, " + at(e));
          break;
        }
        mouse_seen = true;
        click_hold.add(static_cast<double>(e.ts - it->second));
        held_buttons.erase(it);
        break;
      }
      case EventKind::touch_down:
        if (open_strokes.contains(e.pointer)) {
          pairing.reject("touch_down on an active pointer, " + at(e));
          break;
        }
        open_strokes[e.pointer] = {{e.ts, e.x, e.y}};
        break;
      case EventKind::touch_move:
      case EventKind::touch_up: {
        auto it = open_strokes.find(e.pointer);
        if (it == open_strokes.end()) {
          pairing.reject(std::string(to_string(e.kind)) + " with no matching touch_down, " + at(e));
          break;
        }
        it->second.push_back({e.ts, e.x, e.y});
        if (e.kind == EventKind::touch_up) {
          strokes.push_back(std::move(it->second));
          open_strokes.erase(it);
        }
        break;
      }
    }
    const bool is_touch =
        e.kind == EventKind::touch_down || e.kind == EventKind::touch_move || e.kind == EventKind::touch_up;
    if (is_touch) {
      if (touch_events == 0) touch_first = e.ts;
      touch_last = e.ts;
      ++touch_events;
    }
  }
  for (const auto& [key, ts] : held_keys) {
    pairing.reject("key_down for key " + std::to_string(key) + " at " + std::to_string(ts) + " ms never released");
  }
  for (const auto& [button, ts] : held_buttons) {
    pairing.reject("mouse_down at " + std::to_string(ts) + " ms never released");
  }
  for (const auto& [pointer, points] : open_strokes) {
    pairing.reject("touch_down at " + std::to_string(points.front().ts) + " ms never released");
    touch_events -= points.size();
  }

  FeatureVector fv;

  if (!keystrokes.empty()) {
    std::stable_sort(keystrokes.begin(), keystrokes.end(),
                     [](const Keystroke& a, const Keystroke& b) { return a.down < b.down; });
    Moments dwell, flight, digraph;
    std::int64_t last_up = keystrokes.front().up;
    std::size_t kept_backspaces = 0;
    for (std::size_t i = 0; i < keystrokes.size(); ++i) {
      const auto& k = keystrokes[i];
      dwell.add(static_cast<double>(k.up - k.down));
      if (k.key == kBackspaceKey) ++kept_backspaces;
      if (i > 0) {
        const auto& prev = keystrokes[i - 1];
        flight.add(static_cast<double>(std::max<std::int64_t>(0, k.down - prev.up)));
        digraph.add(static_cast<double>(k.down - prev.down));
      }
      last_up = std::max(last_up, k.up);
    }
    fv[Feature::dwell_mean_ms] = dwell.mean();
    fv[Feature::dwell_std_ms] = dwell.stddev();
    fv[Feature::flight_mean_ms] = flight.mean();
    fv[Feature::flight_std_ms] = flight.stddev();
    fv[Feature::digraph_latency_mean_ms] = digraph.mean();
    fv[Feature::typing_rate_keys_per_s] =
        per_second(static_cast<double>(keystrokes.size()), last_up - keystrokes.front().down);
    fv[Feature::backspace_ratio] = static_cast<double>(kept_backspaces) / static_cast<double>(keystrokes.size());
    fv[Feature::kb_present] = 1.0;
  }

  if (mouse_seen) {
    Moments speed;
    std::int64_t idle_ms = 0, total_ms = 0;
    for (std::size_t i = 1; i < moves.size(); ++i) {
      const std::int64_t dt = moves[i].ts - moves[i - 1].ts;
      if (dt <= 0) continue;
      total_ms += dt;
      const double d = distance(moves[i - 1], moves[i]);
      if (d == 0.0) {
        idle_ms += dt;
      } else {
        speed.add(d / (static_cast<double>(dt) / 1000.0));
      }
    }
    fv[Feature::mouse_speed_mean_px_per_s] = speed.mean();
    fv[Feature::mouse_speed_std] = speed.stddev();
    fv[Feature::mouse_idle_ratio] = total_ms > 0 ? static_cast<double>(idle_ms) / static_cast<double>(total_ms) : 0.0;
    fv[Feature::click_hold_mean_ms] = click_hold.mean();
    fv[Feature::mouse_present] = 1.0;
  }

  if (!strokes.empty()) {
    Moments tap, swipe;
    for (const auto& stroke : strokes) {
      double path = 0.0;
      for (std::size_t i = 1; i < stroke.size(); ++i) path += distance(stroke[i - 1], stroke[i]);
      const std::int64_t duration = stroke.back().ts - stroke.front().ts;
      if (path == 0.0) {
        tap.add(static_cast<double>(duration));
      } else if (duration > 0) {
        swipe.add(path / (static_cast<double>(duration) / 1000.0));
      }
    }
    fv[Feature::touch_tap_duration_mean_ms] = tap.mean();
    fv[Feature::touch_swipe_speed_mean_px_per_s] = swipe.mean();
    fv[Feature::touch_event_rate_per_s] = per_second(static_cast<double>(touch_events), touch_last - touch_first);
    fv[Feature::touch_present] = 1.0;
  }

  return {fv, pairing.skipped()};
}

FeatureVector extract(const Session& session, ParseMode mode) { return extract_detailed(session, mode).features; }

BatchExtraction extract_batch(std::span<const Session> sessions, ParseMode mode) {
  BatchExtraction out;
  out.features.reserve(sessions.size());
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    try {
      out.features.emplace_back(extract(sessions[i], mode));
    } catch (const Error& e) {
      if (mode == ParseMode::strict) throw;
      out.features.emplace_back(std::nullopt);
      out.errors.emplace_back(i, e.what());
    }
  }
  return out;
}

// --- JSON Lines --------------------------------------------------------------

json to_json(const InteractionEvent& e) {
  json j;
  j["ts"] = e.ts;
  j["kind"] = std::string(to_string(e.kind));
  switch (e.kind) {
    case EventKind::key_down:
    case EventKind::key_up:
      j["key"] = e.key;
      break;
    case EventKind::mouse_move:
      j["x"] = e.x;
      j["y"] = e.y;
      break;
    case EventKind::mouse_down:
    case EventKind::mouse_up:
      j["x"] = e.x;
      j["y"] = e.y;
      j["button"] = e.button;
      break;
    default:
      j["x"] = e.x;
      j["y"] = e.y;
      j["pointer"] = e.pointer;
      break;
  }
  return j;
}

InteractionEvent event_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::parse, "event line is not a JSON object");
  auto require = [&](const char* key) -> const json& {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) {
      throw Error(ErrorCode::parse, std::string("event requires numeric '") + key + "'");
    }
    return *it;
  };
  InteractionEvent e;
  const json& ts = require("ts");
  if (!ts.is_number_integer()) throw Error(ErrorCode::parse, "'ts' must be an integer");
  e.ts = ts.get<std::int64_t>();
  auto kind = j.find("kind");
  if (kind == j.end() || !kind->is_string()) throw Error(ErrorCode::parse, "event requires 'kind'");
  e.kind = parse_event_kind(kind->get<std::string>());
  switch (e.kind) {
    case EventKind::key_down:
    case EventKind::key_up:
      e.key = require("key").get<int>();
      break;
    default:
      e.x = require("x").get<double>();
      e.y = require("y").get<double>();
      if (auto b = j.find("button"); b != j.end()) e.button = b->get<int>();
      if (auto p = j.find("pointer"); p != j.end()) e.pointer = p->get<int>();
      break;
  }
  return e;
}

void write_session(std::ostream& out, const Session& session) {
  json header;
  header["pid"] = session.participant_id;
  header["region"] = session.region ? json(std::string(to_string(*session.region))) : json(nullptr);
  if (session.start_ms) header["ts"] = *session.start_ms;
  out << header.dump() << '\n';
  for (const auto& e : session.events) out << to_json(e).dump() << '\n';
}

namespace {

json parse_line(const std::string& line, std::size_t line_no) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + e.what());
  }
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

Session read_session(std::istream& in, ParseMode mode) {
  Session s;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const json j = parse_line(line, line_no);
    try {
      if (!have_header) {
        if (!j.is_object() || !j.contains("pid")) throw Error(ErrorCode::parse, "session header requires 'pid'");
        for (const auto& [key, value] : j.items()) {
          if (key == "pid") {
            s.participant_id = value.get<std::string>();
          } else if (key == "region") {
            if (!value.is_null()) s.region = parse_region(value.get<std::string>());
          } else if (key == "ts") {
            s.start_ms = value.get<std::int64_t>();
          } else if (mode == ParseMode::strict) {
            throw Error(ErrorCode::parse, "unknown field '" + key + "' in session header");
          }
        }
        have_header = true;
      } else {
        s.events.push_back(event_from_json(j));
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw Error(ErrorCode::parse, "session file has no header line");
  return s;
}

Session load_session(const std::string& path, ParseMode mode) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  try {
    return read_session(in, mode);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::vector<InteractionEvent> read_events(std::istream& in) {
  std::vector<InteractionEvent> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const json j = parse_line(line, line_no);
    // Tolerate a session header so session files can be replayed too.
    if (j.is_object() && j.contains("pid") && !j.contains("kind")) continue;
    try {
      out.push_back(event_from_json(j));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

json to_json(const FeatureRecord& record) {
  json features = json::object();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    features[std::string(kFeatureNames[i])] = record.features.values[i];
  }
  json j;
  j["pid"] = record.participant_id;
  j["region"] = record.region ? json(std::string(to_string(*record.region))) : json(nullptr);
  j["ts"] = record.timestamp_ms;
  j["schema_version"] = record.features.schema_version;
  j["features"] = std::move(features);
  return j;
}

FeatureRecord feature_record_from_json(const json& j) {
  FeatureRecord r;
  try {
    r.participant_id = j.at("pid").get<std::string>();
    if (auto it = j.find("region"); it != j.end() && !it->is_null()) r.region = parse_region(it->get<std::string>());
    r.timestamp_ms = j.at("ts").get<std::int64_t>();
    r.features.schema_version = j.at("schema_version").get<int>();
    const json& f = j.at("features");
    if (r.features.schema_version != kFeatureSchemaVersion) {
      throw Error(ErrorCode::schema_mismatch, "feature schema version " + std::to_string(r.features.schema_version) +
                                                  " (expected " + std::to_string(kFeatureSchemaVersion) + ")");
    }
    if (f.size() != kFeatureCount) {
      throw Error(ErrorCode::schema_mismatch, "expected " + std::to_string(kFeatureCount) + " features, got " +
                                                  std::to_string(f.size()));
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      const double v = f.at(std::string(kFeatureNames[i])).get<double>();
      if (!std::isfinite(v)) throw Error(ErrorCode::format, "non-finite feature " + std::string(kFeatureNames[i]));
      r.features.values[i] = v;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("feature record: ") + e.what());
  }
  return r;
}

void write_feature_records(std::ostream& out, std::span<const FeatureRecord> records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

std::vector<FeatureRecord> read_feature_records(std::istream& in) {
  std::vector<FeatureRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    try {
      out.push_back(feature_record_from_json(parse_line(line, line_no)));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<FeatureRecord> load_feature_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  return read_feature_records(in);
}

}  // namespace affect
