#include "affect/random.hpp"

#include <cmath>
#include <numbers>

namespace affect {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

KeyedStream::KeyedStream(std::uint64_t seed, std::initializer_list<std::uint64_t> key) noexcept
    : key_(mix64(seed + kGolden)) {
  for (std::uint64_t k : key) key_ = mix64(key_ ^ mix64(k + kGolden));
}

std::uint64_t KeyedStream::next() noexcept { return mix64(key_ + (++counter_) * kGolden); }

double KeyedStream::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t KeyedStream::below(std::uint64_t n) noexcept {
  // Lemire's multiply-shift; the bias is below 2^-64 * n.
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
}

double KeyedStream::gaussian() noexcept {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace affect
