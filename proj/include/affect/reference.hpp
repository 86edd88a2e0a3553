#pragma once

// Values reported for the original 130-participant study. The dataset behind
// them is not available, so they are documentation only and nothing in the
// library is calibrated against them.

#include <array>

#include "affect/emotion.hpp"

namespace affect::reference {

inline constexpr int kParticipants = 130;
inline constexpr double kMenShare = 0.51;
inline constexpr double kWomenShare = 0.49;
inline constexpr double kMenAverageAge = 30.13;
inline constexpr double kWomenAverageAge = 28.29;

inline constexpr double kStrongestMeanLevel = 3.24;  // "active"
// "unfriendly" is not one of the 27 questionnaire emotions.
inline constexpr double kWeakestMeanLevel = 1.62;

inline constexpr int kPromptIntervalHours = 4;

struct ConfusionDiagonalEntry {
  Emotion emotion;
  double rate;
};

// Only the diagonal was reported; off-diagonal cells are unreported, not zero.
inline constexpr std::array<ConfusionDiagonalEntry, 4> kConfusionDiagonal = {{
    {Emotion::neutral, 0.68},
    {Emotion::afraid, 0.87},
    {Emotion::sadness, 0.86},
    {Emotion::nervous, 0.65},
}};

// Accuracy gain of the fuzzy model over crisp detection, in percentage points.
inline constexpr double kAccuracyGainMinPoints = 3.0;
inline constexpr double kAccuracyGainMaxPoints = 5.0;
inline constexpr double kLevelFprMin = 0.0;
inline constexpr double kLevelFprMax = 0.167;

}  // namespace affect::reference
