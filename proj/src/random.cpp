#include "tandem/random.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tandem {

namespace {

std::uint64_t parse_digits(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a probability: " + std::string(whole));
  }
  return v;
}

}  // namespace

Probability Probability::parse(std::string_view text) {
  Probability p;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    p.num = parse_digits(text.substr(0, slash), text);
    p.den = parse_digits(text.substr(slash + 1), text);
  } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto frac = text.substr(dot + 1);
    if (frac.size() > 12) throw std::invalid_argument("too many decimals: " + std::string(text));
    const auto whole = dot == 0 ? 0 : parse_digits(text.substr(0, dot), text);
    p.den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) p.den *= 10;
    p.num = whole * p.den + (frac.empty() ? 0 : parse_digits(frac, text));
  } else {
    p.num = parse_digits(text, text);
    p.den = 1;
  }
  if (p.den == 0 || p.num > p.den) throw std::invalid_argument("probability outside [0,1]: " + std::string(text));
  const auto g = std::gcd(p.num, p.den);
  if (g > 1) {
    p.num /= g;
    p.den /= g;
  }
  if (p.num == 0) p.den = 1;
  return p;
}

std::string Probability::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

bool Rng::chance(const Probability& p) {
  if (p.num == 0) return false;
  if (p.num >= p.den) return true;
  return below(p.den) < p.num;
}

}  // namespace tandem
