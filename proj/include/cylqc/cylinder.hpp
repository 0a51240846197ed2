// Hyperbolic geometry of finite flat cylinders.
//
// C(H) is the strip {|Im z| < H} modulo the horizontal translation
// z -> z + 2*pi.  Everything here is a closed-form function of the
// half-height H, the band fraction a, and the deformation time t:
// metric density, core-curve length, the horizontal-curve upper bound
// for the injectivity radius, and collar half-widths h(l).

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cylqc {

inline constexpr double kXPeriod = 2.0 * std::numbers::pi;

// Height above which the injectivity-radius bound over the stretched band
// stays below 1/2 for the whole deformation (band fraction 1/2).
inline const double kTallCylinderThreshold =
    2.0 * std::sqrt(2.0) * std::numbers::pi * std::numbers::pi;

struct CylinderSpec {
  double half_height;         // H, strip units
  double band_fraction;       // a in (0,1); the stretched band is |y| <= a*H

  explicit CylinderSpec(double H, double a = 0.5)
      : half_height(H), band_fraction(a) {
    if (!(H > 0.0)) throw std::invalid_argument("CylinderSpec: H must be positive");
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("CylinderSpec: band fraction must be in (0,1)");
  }

  double modulus() const { return half_height / std::numbers::pi; }
};

struct InjRadiusReport {
  double t;
  double upper_bound;   // length of the horizontal curve bounding the band
  double lower_bound;   // core-curve length
};

namespace detail {
inline void check_time(double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("deformation time t must lie in [0,1]");
}
}  // namespace detail

// Half-height of the deformed cylinder C((1+a*t)H).
inline double deformed_half_height(const CylinderSpec& c, double t) {
  detail::check_time(t);
  return (1.0 + c.band_fraction * t) * c.half_height;
}

// Hyperbolic metric density of C((1+a*t)H) at height y,
//   pi / (2(1+at)H * cos(pi*y / (2(1+at)H))).
// Diverges at |y| -> (1+at)H.
inline double metric_density(const CylinderSpec& c, double t, double y) {
  const double Ht = deformed_half_height(c, t);
  if (!(std::abs(y) < Ht))
    throw std::domain_error("metric_density: |y| must be < (1+at)H");
  const double pi = std::numbers::pi;
  return pi / (2.0 * Ht * std::cos(pi * y / (2.0 * Ht)));
}

// Hyperbolic length of the core curve x -> x of C((1+a*t)H): pi^2 / ((1+at)H).
inline double core_length(const CylinderSpec& c, double t) {
  const double pi = std::numbers::pi;
  return pi * pi / deformed_half_height(c, t);
}

// Length of the closed horizontal curve at height a(1+t)H inside C((1+at)H).
// Upper bound for the injectivity radius over the stretched band.
inline double horizontal_curve_length(const CylinderSpec& c, double t) {
  const double Ht = deformed_half_height(c, t);
  const double a = c.band_fraction;
  const double pi = std::numbers::pi;
  const double arg = a * (1.0 + t) * pi / (2.0 * (1.0 + a * t));
  return pi * pi / (Ht * std::cos(arg));
}

// Injectivity-radius bounds for the stretched band of C((1+at)H).
// Only stated for band fraction 1/2.  For H above kTallCylinderThreshold the
// upper bound stays <= 1/2 for every t in [0,1].
inline InjRadiusReport inj_radius_bounds(const CylinderSpec& c, double t) {
  if (c.band_fraction != 0.5)
    throw std::invalid_argument("inj_radius_bounds: requires band fraction 1/2");
  return InjRadiusReport{t, horizontal_curve_length(c, t), core_length(c, t)};
}

// Collar half-width h(l) about a simple closed geodesic of length l.
// Equivalent to (1/2) log((cosh(l/2)+1)/(cosh(l/2)-1)); evaluated as
// log(coth(l/4)), which stays accurate down to l ~ 1e-300 where the
// cosh form loses all digits to cancellation.
inline double collar_width(double l) {
  if (!(l > 0.0)) throw std::domain_error("collar_width: length must be positive");
  return -std::log(std::tanh(0.25 * l));
}

// Inverse of collar_width by geometric bisection: the geodesic length whose
// collar half-width equals `width`.  The bracket is shrunk until its relative
// width is below rel_tol.
inline double collar_length_for_width(double width, double rel_tol = 1e-6) {
  if (!(width > 0.0))
    throw std::domain_error("collar_length_for_width: width must be positive");
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw std::invalid_argument("collar_length_for_width: bad tolerance");
  double lo = 1.0, hi = 1.0;
  // h is strictly decreasing: walk the bracket out first.
  if (collar_width(lo) > width) {
    while (collar_width(hi) > width) {
      hi *= 2.0;
      if (hi > 1e12) throw std::runtime_error("collar bracket blew up");
    }
  } else {
    while (collar_width(lo) <= width) {
      lo *= 0.5;
      if (lo < 1e-300) throw std::runtime_error("collar bracket underflow");
    }
    hi = 2.0 * lo;
  }
  while (hi / lo > 1.0 + rel_tol) {
    const double mid = std::sqrt(lo * hi);
    if (collar_width(mid) > width)
      lo = mid;
    else
      hi = mid;
  }
  return std::sqrt(lo * hi);
}

}  // namespace cylqc
