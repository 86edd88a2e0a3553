#pragma once

#include <cstdint>
#include <initializer_list>

namespace affect {

/// Counter-based random stream keyed by a seed plus a tuple of identifiers
/// (participant, session, purpose, ...). Draw i of a stream depends only on its
/// key and i, so streams never perturb each other and results do not depend on
/// the order in which streams are consumed. Portable across standard libraries,
/// unlike the <random> distributions.
class KeyedStream {
 public:
  KeyedStream(std::uint64_t seed, std::initializer_list<std::uint64_t> key) noexcept;

  std::uint64_t next() noexcept;
  /// Uniform in [0, 1).
  double uniform() noexcept;
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;
  /// Standard normal (Box-Muller).
  double gaussian() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace affect
