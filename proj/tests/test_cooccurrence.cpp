#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "affect/cooccurrence.hpp"
#include "affect/error.hpp"
#include "affect/random.hpp"

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

SelfReport report_with(int joy, int disgust) {
  SelfReport r = SelfReport::all_zero(0, "p");
  r.levels[Emotion::joy] = LevelClass(joy);
  r.levels[Emotion::disgust] = LevelClass(disgust);
  return r;
}

}  // namespace

TEST_CASE("table lookup") {
  const auto& joy = table_for(Emotion::joy);
  CHECK(joy.at(2, Emotion::disgust) == 0.84);
  CHECK(joy.at(2, Emotion::fear) == 1.04);
  CHECK(joy.at(2, Emotion::acceptance) == 2.15);
  const auto& anger = table_for(Emotion::anger);
  CHECK(anger.at(4, Emotion::sadness) == 3.25);
  CHECK(anger.at(4, Emotion::disgust) == 3.0);
  CHECK(code_of([] { table_for(Emotion::sadness); }) == ErrorCode::unsupported_anchor);
  CHECK(code_of([] { table_for(Emotion::disgust); }) == ErrorCode::unsupported_anchor);
  CHECK(code_of([] { table_for(Emotion::surprise); }) == ErrorCode::unsupported_anchor);
}

TEST_CASE("table shape invariants") {
  for (Emotion anchor : supported_anchors()) {
    const auto& t = table_for(anchor);
    const auto cols = t.columns();
    CHECK(cols.size() == 7);
    CHECK(std::find(cols.begin(), cols.end(), anchor) == cols.end());
    for (const auto& row : t.rows) {
      for (double v : row) CHECK((v >= 0.0 && v <= 4.0));
    }
  }
  for (const auto& row : regional_table().values) {
    for (double v : row) CHECK((v >= 0.0 && v <= 4.0));
  }
}

TEST_CASE("expected profile examples") {
  const auto p = expected_profile(Emotion::joy, 2.0);
  CHECK(p.size() == 7);
  CHECK(p.at(Emotion::anticipation).value() == 1.7);
  CHECK(p.at(Emotion::anger).value() == 0.95);
  CHECK(p.at(Emotion::disgust).value() == 0.84);
  CHECK(p.at(Emotion::sadness).value() == 1.34);
  CHECK(p.at(Emotion::surprise).value() == 1.06);
  CHECK(p.at(Emotion::fear).value() == 1.04);
  CHECK(p.at(Emotion::acceptance).value() == 2.15);

  const auto mid = expected_profile(Emotion::joy, 2.5);
  CHECK(mid.at(Emotion::disgust).value() == doctest::Approx(0.74).epsilon(1e-12));
  CHECK(mid.at(Emotion::anticipation).value() == doctest::Approx(1.92).epsilon(1e-12));

  const auto fear0 = expected_profile(Emotion::fear, 0.0);
  CHECK(fear0.at(Emotion::joy).value() == 2.09);
  CHECK(fear0.at(Emotion::anticipation).value() == 1.72);
  CHECK(fear0.at(Emotion::anger).value() == 0.77);
  CHECK(fear0.at(Emotion::disgust).value() == 0.61);
  CHECK(fear0.at(Emotion::sadness).value() == 0.87);
  CHECK(fear0.at(Emotion::surprise).value() == 0.77);
  CHECK(fear0.at(Emotion::acceptance).value() == 1.85);

  CHECK(code_of([] { expected_profile(Emotion::joy, 4.5); }) == ErrorCode::range);
  CHECK(code_of([] { expected_profile(Emotion::sadness, 1.0); }) == ErrorCode::unsupported_anchor);
}

TEST_CASE("integer levels return stored rows exactly") {
  for (Emotion anchor : supported_anchors()) {
    const auto& t = table_for(anchor);
    for (int l = 0; l <= 4; ++l) {
      const auto p = expected_profile(anchor, l);
      for (Emotion e : t.columns()) CHECK(p.at(e).value() == t.at(l, e));
    }
  }
}

TEST_CASE("property: interpolation is linear within each segment") {
  KeyedStream rng(7, {1});
  for (int trial = 0; trial < 500; ++trial) {
    const Emotion anchor = supported_anchors()[rng.below(supported_anchors().size())];
    const double seg = static_cast<double>(rng.below(4));
    double a = seg + rng.uniform();
    double b = seg + rng.uniform();
    if (a > b) std::swap(a, b);
    const auto pa = expected_profile(anchor, a);
    const auto pb = expected_profile(anchor, b);
    const auto pm = expected_profile(anchor, (a + b) / 2.0);
    for (const auto& [e, level] : pm) {
      CHECK(std::abs(level.value() - (pa.at(e).value() + pb.at(e).value()) / 2.0) <= 1e-12);
    }
  }
}

TEST_CASE("plausibility verdicts") {
  const auto fear = plausibility(Emotion::joy, 2, Emotion::fear, 2.2);
  CHECK_FALSE(fear.plausible);
  CHECK(fear.expected == 1.04);
  CHECK(fear.margin == doctest::Approx(1.16));
  CHECK(fear.tolerance == 0.75);

  const auto acc = plausibility(Emotion::joy, 2, Emotion::acceptance, 2.2);
  CHECK(acc.plausible);
  CHECK(acc.margin == doctest::Approx(0.05));

  const auto same = plausibility(Emotion::joy, 2, Emotion::disgust, 0.84, 1e-9);
  CHECK(same.plausible);
  CHECK(same.margin == 0.0);

  CHECK(code_of([] { plausibility(Emotion::joy, 2, Emotion::joy, 2); }) == ErrorCode::invalid_candidate);
  CHECK(code_of([] { plausibility(Emotion::joy, 2, Emotion::proud, 2); }) == ErrorCode::invalid_candidate);
  CHECK(code_of([] { plausibility(Emotion::sadness, 2, Emotion::joy, 2); }) == ErrorCode::unsupported_anchor);
  CHECK(code_of([] { plausibility(Emotion::joy, 2, Emotion::fear, 2, 0.0); }) == ErrorCode::range);
}

TEST_CASE("property: plausibility is monotone in tolerance and accepts the expectation") {
  KeyedStream rng(11, {2});
  for (int trial = 0; trial < 500; ++trial) {
    const Emotion anchor = supported_anchors()[rng.below(supported_anchors().size())];
    const auto cols = table_for(anchor).columns();
    const Emotion cand = cols[rng.below(cols.size())];
    const double level = 4.0 * rng.uniform();
    const double hyp = 4.0 * rng.uniform();
    const double tau = 0.01 + 2.0 * rng.uniform();
    const auto v = plausibility(anchor, level, cand, hyp, tau);
    CHECK(v.plausible == (v.margin <= v.tolerance));
    if (v.plausible) CHECK(plausibility(anchor, level, cand, hyp, tau + rng.uniform()).plausible);
    const double expected = expected_profile(anchor, level).at(cand).value();
    CHECK(plausibility(anchor, level, cand, expected, 1e-6 + rng.uniform()).plausible);
  }
}

TEST_CASE("regional profiles") {
  const auto eu = regional_profile(Region::europe, Emotion::joy, 2);
  CHECK(eu.at(Emotion::anticipation).value() == 1.14);
  CHECK(eu.at(Emotion::anger).value() == 0.42);
  CHECK(eu.at(Emotion::disgust).value() == 0.71);
  CHECK(eu.at(Emotion::sadness).value() == 1.0);
  CHECK(eu.at(Emotion::surprise).value() == 0.57);
  CHECK(eu.at(Emotion::fear).value() == 0.85);
  CHECK(eu.at(Emotion::acceptance).value() == 2.0);
  const auto sea = regional_profile(Region::south_east_asia, Emotion::joy, 2);
  CHECK(sea.at(Emotion::sadness).value() == 0.5);
  CHECK(sea.at(Emotion::acceptance).value() == 2.33);
  CHECK(code_of([] { regional_profile(Region::east_asia, Emotion::joy, 2); }) == ErrorCode::no_regional_data);
  CHECK(code_of([] { regional_profile(Region::europe, Emotion::joy, 3); }) == ErrorCode::no_regional_data);
  CHECK(code_of([] { regional_profile(Region::europe, Emotion::fear, 2); }) == ErrorCode::no_regional_data);
}

TEST_CASE("recompute_table constant mean") {
  std::vector<SelfReport> reports;
  for (int l : {0, 1, 3, 4}) reports.push_back(report_with(l, 0));
  for (int i = 0; i < 3; ++i) reports.push_back(report_with(2, 1));
  const auto t = recompute_table(reports, Emotion::joy);
  CHECK(t.at(2, Emotion::disgust) == 1.0);
  CHECK(t.at(0, Emotion::disgust) == 0.0);
}

TEST_CASE("recompute_table two-point mean") {
  std::vector<SelfReport> reports;
  for (int l : {0, 1, 2, 4}) reports.push_back(report_with(l, 0));
  reports.push_back(report_with(3, 1));
  reports.push_back(report_with(3, 2));
  CHECK(recompute_table(reports, Emotion::joy).at(3, Emotion::disgust) == 1.5);
}

TEST_CASE("recompute_table reports missing levels") {
  std::vector<SelfReport> reports{report_with(0, 0), report_with(2, 0), report_with(4, 0)};
  try {
    recompute_table(reports, Emotion::joy);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::incomplete_data);
    const std::string msg = e.what();
    CHECK(msg.find('1') != std::string::npos);
    CHECK(msg.find('3') != std::string::npos);
  }
}

TEST_CASE("property: recompute_table is permutation-invariant") {
  KeyedStream rng(3, {3});
  std::vector<SelfReport> reports;
  for (int i = 0; i < 200; ++i) {
    SelfReport r = SelfReport::all_zero(0, "p");
    for (Emotion e : basic_emotions()) r.levels[e] = LevelClass(static_cast<int>(rng.below(5)));
    reports.push_back(r);
  }
  for (int l = 0; l <= 4; ++l) reports.push_back(report_with(l, 1));
  const auto base = recompute_table(reports, Emotion::fear);
  for (int trial = 0; trial < 20; ++trial) {
    for (std::size_t i = reports.size(); i > 1; --i) std::swap(reports[i - 1], reports[rng.below(i)]);
    CHECK(recompute_table(reports, Emotion::fear).rows == base.rows);
  }
}

TEST_CASE("table CSV export") {
  std::ostringstream out;
  write_table_csv(out, table_for(Emotion::joy));
  std::istringstream in(out.str());
  std::string header, row0;
  std::getline(in, header);
  std::getline(in, row0);
  CHECK(header == "anchor_level,anticipation,anger,disgust,sadness,surprise,fear,acceptance");
  CHECK(row0.rfind("0,", 0) == 0);
  std::ostringstream regional;
  write_regional_csv(regional, regional_table());
  CHECK(regional.str().rfind("emotion,europe,middle_east,south_east_asia\n", 0) == 0);
}
