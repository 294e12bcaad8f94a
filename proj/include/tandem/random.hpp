#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace tandem {

/// Exact probability num/den. Kept rational so that seeded runs make the
/// same choices on every platform.
struct Probability {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  /// Accepts "1/4", "0.25", "0", "1". Throws std::invalid_argument.
  static Probability parse(std::string_view text);
  std::string to_string() const;
  bool is_zero() const { return num == 0; }

  friend bool operator==(const Probability&, const Probability&) = default;
};

/// Seeded generator with platform-independent draws (the standard
/// distributions are implementation-defined, the engine is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

  bool chance(const Probability& p);

 private:
  std::mt19937_64 engine_;
};

}  // namespace tandem
