#include "affect/fuzzifier.hpp"

#include <cmath>
#include <numeric>

#include "affect/error.hpp"

namespace affect {

double Membership::sum() const noexcept { return std::accumulate(weights.begin(), weights.end(), 0.0); }

bool Membership::is_triangular() const noexcept {
  int first = -1;
  int count = 0;
  for (int c = 0; c < static_cast<int>(weights.size()); ++c) {
    if (weights[static_cast<std::size_t>(c)] != 0.0) {
      if (first < 0) first = c;
      ++count;
      if (c - first > 1) return false;
    }
  }
  return count <= 2;
}

int Membership::argmax() const noexcept {
  int best = 0;
  for (int c = 1; c < static_cast<int>(weights.size()); ++c) {
    if (weights[static_cast<std::size_t>(c)] > weights[static_cast<std::size_t>(best)]) best = c;
  }
  return best;
}

Membership fuzzify(double level) {
  const double v = Level(level).value();
  Membership m;
  const double lower = std::floor(v);
  const auto lo = static_cast<std::size_t>(lower);
  const double frac = v - lower;
  m.weights[lo] = 1.0 - frac;
  if (frac > 0.0) m.weights[lo + 1] = frac;
  return m;
}

double defuzzify(const Membership& m) {
  double total = 0.0;
  double centroid = 0.0;
  for (std::size_t c = 0; c < m.weights.size(); ++c) {
    const double w = m.weights[c];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::invalid_membership, "membership weight " + std::to_string(c) + " is negative or not finite");
    }
    total += w;
    centroid += static_cast<double>(c) * w;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw Error(ErrorCode::invalid_membership, "membership weights sum to " + std::to_string(total));
  }
  return centroid;
}

std::map<Emotion, Membership> fuzzify_profile(const EmotionProfile& profile) {
  std::map<Emotion, Membership> out;
  for (const auto& [emotion, level] : profile) out.emplace(emotion, fuzzify(level.value()));
  return out;
}

}  // namespace affect
