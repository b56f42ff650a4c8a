#include "ring/rational.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ring {
namespace {

void check(double x, std::int64_t max_den) {
  if (!(x >= 0) || !std::isfinite(x)) throw std::invalid_argument("rational: x must be finite and >= 0");
  if (max_den < 1) throw std::invalid_argument("rational: max_den must be >= 1");
}

// Walks the expansion; calls emit(p0, q0, p1, q1) after each accepted
// convergent p1/q1, p0/q0 being its predecessor. Returns the state at exit.
struct Expansion {
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  bool exact = false;
};

template <typename Emit>
Expansion expand(double x, std::int64_t max_den, Emit&& emit) {
  Expansion s;
  long double y = x;
  for (int iter = 0; iter < 64; ++iter) {
    const long double a_ld = std::floor(y);
    if (a_ld > 9.0e18L) break;
    const auto a = static_cast<std::int64_t>(a_ld);
    if (s.q1 != 0 && a > (max_den - s.q0) / s.q1) break;
    const std::int64_t q2 = s.q0 + a * s.q1;
    if (q2 > max_den) break;
    const std::int64_t p2 = s.p0 + a * s.p1;
    s = {s.p1, s.q1, p2, q2, false};
    emit(s);
    const long double frac = y - a_ld;
    if (frac == 0) {
      s.exact = true;
      break;
    }
    y = 1.0L / frac;
  }
  return s;
}

}  // namespace

std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::vector<Fraction> convergents(double x, std::int64_t max_den) {
  check(x, max_den);
  std::vector<Fraction> out;
  expand(x, max_den, [&](const Expansion& s) { out.push_back({s.p1, s.q1}); });
  return out;
}

Fraction best_rational(double x, std::int64_t max_den) {
  check(x, max_den);
  const Expansion s = expand(x, max_den, [](const Expansion&) {});
  const Fraction last{s.p1, s.q1};
  if (s.exact || s.q1 == 0) return last;
  // Largest semiconvergent (p0 + k p1) / (q0 + k q1) that still fits.
  const std::int64_t k = (max_den - s.q0) / s.q1;
  const Fraction semi{s.p0 + k * s.p1, s.q0 + k * s.q1};
  if (k == 0) return last;
  const long double xl = x;
  const long double e_last = std::fabs(xl - (long double)last.num / last.den);
  const long double e_semi = std::fabs(xl - (long double)semi.num / semi.den);
  return e_semi < e_last ? semi : last;
}

}  // namespace ring
