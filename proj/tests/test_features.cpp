#include <doctest.h>

#include <cmath>
#include <sstream>

#include "affect/error.hpp"
#include "affect/features.hpp"
#include "affect/synthetic.hpp"

using namespace affect;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected affect::Error");
  return ErrorCode::io;
}

InteractionEvent key(std::int64_t ts, EventKind kind, int code) { return {ts, kind, code}; }
InteractionEvent pointer(std::int64_t ts, EventKind kind, double x, double y) { return {ts, kind, 0, x, y}; }

Session session_of(std::vector<InteractionEvent> events) {
  Session s;
  s.participant_id = "p1";
  s.events = std::move(events);
  return s;
}

Session two_keys() {
  return session_of({key(0, EventKind::key_down, 65), key(90, EventKind::key_up, 65), key(150, EventKind::key_down, 66),
                     key(230, EventKind::key_up, 66)});
}

std::vector<Session> synthetic_sessions(int n) {
  GeneratorConfig g;
  g.participants = 1;
  g.sessions_per_participant = n;
  return generate(g).sessions;
}

}  // namespace

TEST_CASE("keystroke example") {
  const auto f = extract(two_keys());
  CHECK(f[Feature::dwell_mean_ms] == 85.0);
  CHECK(f[Feature::dwell_std_ms] == 5.0);
  CHECK(f[Feature::flight_mean_ms] == 60.0);
  CHECK(f[Feature::digraph_latency_mean_ms] == 150.0);
  CHECK(f[Feature::typing_rate_keys_per_s] == doctest::Approx(2.0 / 0.23));
  CHECK(f[Feature::kb_present] == 1.0);
  CHECK(f[Feature::mouse_present] == 0.0);
  CHECK(f[Feature::touch_present] == 0.0);
}

TEST_CASE("mouse speed example") {
  const auto f = extract(session_of({pointer(0, EventKind::mouse_move, 0, 0), pointer(100, EventKind::mouse_move, 3, 4)}));
  CHECK(f[Feature::mouse_speed_mean_px_per_s] == doctest::Approx(50.0));
  CHECK(f[Feature::mouse_idle_ratio] == 0.0);
  CHECK(f[Feature::mouse_present] == 1.0);
}

TEST_CASE("empty session is all zeros") {
  const auto f = extract(session_of({}));
  for (double v : f.values) CHECK(v == 0.0);
  CHECK(f.schema_version == kFeatureSchemaVersion);
}

TEST_CASE("flight is clamped at zero on rollover") {
  const auto f = extract(session_of({key(0, EventKind::key_down, 65), key(50, EventKind::key_down, 66),
                                     key(100, EventKind::key_up, 65), key(140, EventKind::key_up, 66)}));
  CHECK(f[Feature::flight_mean_ms] == 0.0);
  CHECK(f[Feature::dwell_mean_ms] == 95.0);
}

TEST_CASE("backspace ratio, clicks, idle mouse and touch") {
  const auto f = extract(session_of({
      key(0, EventKind::key_down, kBackspaceKey),
      key(50, EventKind::key_up, kBackspaceKey),
      key(100, EventKind::key_down, 65),
      key(150, EventKind::key_up, 65),
      pointer(200, EventKind::mouse_move, 0, 0),
      pointer(300, EventKind::mouse_move, 0, 0),
      pointer(400, EventKind::mouse_move, 30, 40),
      pointer(450, EventKind::mouse_down, 30, 40),
      pointer(570, EventKind::mouse_up, 30, 40),
      {600, EventKind::touch_down, 0, 10, 10, 0, 0},
      {680, EventKind::touch_up, 0, 10, 10, 0, 0},
      {700, EventKind::touch_down, 0, 10, 10, 0, 0},
      {750, EventKind::touch_move, 0, 10, 60, 0, 0},
      {800, EventKind::touch_up, 0, 10, 110, 0, 0},
  }));
  CHECK(f[Feature::backspace_ratio] == 0.5);
  CHECK(f[Feature::mouse_idle_ratio] == 0.5);
  CHECK(f[Feature::mouse_speed_mean_px_per_s] == doctest::Approx(500.0));
  CHECK(f[Feature::click_hold_mean_ms] == 120.0);
  CHECK(f[Feature::touch_tap_duration_mean_ms] == 80.0);
  CHECK(f[Feature::touch_swipe_speed_mean_px_per_s] == doctest::Approx(1000.0));
  CHECK(f[Feature::touch_present] == 1.0);
  for (double v : f.values) CHECK(std::isfinite(v));
}

TEST_CASE("strict mode rejects malformed sessions; lenient skips and counts") {
  const Session orphan = session_of({key(0, EventKind::key_up, 65), key(10, EventKind::key_down, 66),
                                     key(90, EventKind::key_up, 66)});
  CHECK(code_of([&] { extract(orphan); }) == ErrorCode::validation);
  const auto lenient = extract_detailed(orphan, ParseMode::lenient);
  CHECK(lenient.skipped_events == 1);
  CHECK(lenient.features[Feature::dwell_mean_ms] == 80.0);

  const Session unsorted = session_of({key(100, EventKind::key_down, 65), key(50, EventKind::key_up, 65)});
  CHECK(code_of([&] { extract(unsorted); }) == ErrorCode::validation);

  const Session unreleased = session_of({key(0, EventKind::key_down, 65)});
  CHECK(code_of([&] { extract(unreleased); }) == ErrorCode::validation);
  CHECK(extract_detailed(unreleased, ParseMode::lenient).skipped_events == 1);

  const Session negative = session_of({key(-5, EventKind::key_down, 65), key(10, EventKind::key_up, 65)});
  CHECK(code_of([&] { extract(negative); }) == ErrorCode::validation);
}

TEST_CASE("auto-repeat key_down while held is ignored") {
  const auto f = extract(session_of({key(0, EventKind::key_down, 65), key(30, EventKind::key_down, 65),
                                     key(60, EventKind::key_down, 65), key(100, EventKind::key_up, 65)}));
  CHECK(f[Feature::dwell_mean_ms] == 100.0);
}

TEST_CASE("batch extraction") {
  CHECK(extract_batch({}).features.empty());
  const std::vector<Session> twice{two_keys(), two_keys()};
  const auto b = extract_batch(twice);
  REQUIRE(b.features.size() == 2);
  CHECK(*b.features[0] == *b.features[1]);

  const std::vector<Session> mixed{two_keys(), session_of({key(0, EventKind::key_down, 65)}), two_keys()};
  CHECK(code_of([&] { extract_batch(mixed); }) == ErrorCode::validation);
}

TEST_CASE("500 synthetic sessions give 500 finite vectors") {
  const auto sessions = synthetic_sessions(500);
  const auto b = extract_batch(sessions);
  REQUIRE(b.features.size() == 500);
  CHECK(b.errors.empty());
  for (const auto& f : b.features) {
    REQUIRE(f.has_value());
    for (double v : f->values) CHECK(std::isfinite(v));
  }
}

TEST_CASE("property: determinism, time shift and time scaling") {
  for (const Session& s : synthetic_sessions(20)) {
    const auto base = extract(s);
    CHECK(extract(s) == base);

    Session shifted = s;
    for (auto& e : shifted.events) e.ts += 123456;
    CHECK(extract(shifted) == base);

    Session scaled = s;
    const std::int64_t origin = s.events.front().ts;
    for (auto& e : scaled.events) e.ts = origin + 2 * (e.ts - origin);
    const auto f2 = extract(scaled);
    CHECK(f2[Feature::typing_rate_keys_per_s] == doctest::Approx(base[Feature::typing_rate_keys_per_s] / 2));
    CHECK(f2[Feature::mouse_speed_mean_px_per_s] == doctest::Approx(base[Feature::mouse_speed_mean_px_per_s] / 2));
    CHECK(f2[Feature::touch_swipe_speed_mean_px_per_s] ==
          doctest::Approx(base[Feature::touch_swipe_speed_mean_px_per_s] / 2));
    CHECK(f2[Feature::dwell_mean_ms] == doctest::Approx(base[Feature::dwell_mean_ms] * 2));
    CHECK(f2[Feature::flight_mean_ms] == doctest::Approx(base[Feature::flight_mean_ms] * 2));
  }
}

TEST_CASE("session and event JSON lines") {
  std::istringstream events(R"({"ts":0,"kind":"key_down","key":65}
{"ts":0,"kind":"mouse_move","x":3,"y":4}
)");
  const auto ev = read_events(events);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] == key(0, EventKind::key_down, 65));
  CHECK(ev[1].x == 3.0);
  CHECK(ev[1].y == 4.0);

  for (const Session& s : synthetic_sessions(3)) {
    std::stringstream io;
    write_session(io, s);
    CHECK(read_session(io) == s);
  }

  std::istringstream bad(R"({"pid":"p1","region":null}
{"ts":0,"kind":"key_hover","key":65}
)");
  CHECK(code_of([&] { read_session(bad); }) == ErrorCode::parse);
  std::istringstream no_header(R"({"ts":0,"kind":"key_down","key":65})");
  CHECK(code_of([&] { read_session(no_header); }) == ErrorCode::parse);
  CHECK(code_of([] { load_session("/nonexistent/session.jsonl"); }) == ErrorCode::io);
}

TEST_CASE("feature records round trip and reject other schema versions") {
  FeatureRecord r{"p3", Region::europe, 42, extract(two_keys())};
  std::stringstream io;
  write_feature_records(io, std::vector<FeatureRecord>{r});
  const auto back = read_feature_records(io);
  REQUIRE(back.size() == 1);
  CHECK(back[0] == r);

  auto j = to_json(r);
  j["schema_version"] = 2;
  CHECK(code_of([&] { feature_record_from_json(j); }) == ErrorCode::schema_mismatch);
}
