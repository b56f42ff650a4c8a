#pragma once

#include <cstdint>
#include <vector>

namespace ring {

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return double(num) / double(den); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Continued-fraction convergents of x >= 0 with denominator <= max_den, in
/// order of increasing denominator. Stops early if x is exhausted exactly.
std::vector<Fraction> convergents(double x, std::int64_t max_den);

/// Closest fraction to x >= 0 among all denominators <= max_den (convergent
/// or semiconvergent).
Fraction best_rational(double x, std::int64_t max_den);

std::int64_t gcd(std::int64_t a, std::int64_t b);

}  // namespace ring
