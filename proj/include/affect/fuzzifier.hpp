#pragma once

#include <array>
#include <map>

#include "affect/emotion.hpp"

namespace affect {

/// Weights over the five level classes.
struct Membership {
  std::array<double, kLevelClassCount> weights{};

  double sum() const noexcept;
  /// At most two adjacent non-zero weights.
  bool is_triangular() const noexcept;
  /// Index of the largest weight; ties go to the lower class.
  int argmax() const noexcept;

  friend bool operator==(const Membership&, const Membership&) = default;
};

/// Triangular memberships peaked at each integer level with unit spacing.
Membership fuzzify(double level);

/// Centroid. Throws Error(invalid_membership) for negative or non-finite
/// weights, or weights not summing to 1 within 1e-6.
double defuzzify(const Membership& m);

std::map<Emotion, Membership> fuzzify_profile(const EmotionProfile& profile);

}  // namespace affect
