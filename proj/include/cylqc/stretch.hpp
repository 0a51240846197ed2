// Vertical stretch deformations of a cylinder and their Beltrami coefficients.
//
// A PiecewiseVerticalMap acts on x + iy as x + i*m(y) where m is a continuous,
// odd, strictly increasing piecewise-affine function.  The stretch family
// doubles the central band |y| <= a*H over time t and shifts the rest, so all
// deformations of interest (single stages, homotopies, iterated schedules)
// live in this class and compose exactly: breakpoints, slopes and offsets are
// carried symbolically, never resampled.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "cylqc/cylinder.hpp"

namespace cylqc {

class PiecewiseVerticalMap {
 public:
  // `breakpoints` are the interior joints; piece k covers
  // [breakpoints[k-1], breakpoints[k]] with the convention that piece 0
  // starts at -source_halfheight and the last piece ends at +source_halfheight.
  PiecewiseVerticalMap(std::vector<double> breakpoints, std::vector<double> slopes,
                       std::vector<double> offsets, double source_halfheight)
      : breakpoints_(std::move(breakpoints)),
        slopes_(std::move(slopes)),
        offsets_(std::move(offsets)),
        source_halfheight_(source_halfheight) {
    validate();
    target_halfheight_ = slopes_.back() * source_halfheight_ + offsets_.back();
  }

  static PiecewiseVerticalMap identity(double halfheight) {
    return PiecewiseVerticalMap({}, {1.0}, {0.0}, halfheight);
  }

  double operator()(double y) const {
    const double h = source_halfheight_;
    if (!(std::abs(y) <= h * (1.0 + 1e-12) + 1e-12))
      throw std::domain_error("PiecewiseVerticalMap: evaluation outside source");
    const std::size_t k = piece_index(y);
    return slopes_[k] * y + offsets_[k];
  }

  std::size_t piece_index(double y) const {
    return static_cast<std::size_t>(
        std::upper_bound(breakpoints_.begin(), breakpoints_.end(), y) -
        breakpoints_.begin());
  }

  double slope_at(double y) const { return slopes_[piece_index(y)]; }

  std::size_t piece_count() const { return slopes_.size(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& slopes() const { return slopes_; }
  const std::vector<double>& offsets() const { return offsets_; }
  double source_halfheight() const { return source_halfheight_; }
  double target_halfheight() const { return target_halfheight_; }

  // Lower edge of piece k (-h for the first piece).
  double piece_lo(std::size_t k) const {
    return k == 0 ? -source_halfheight_ : breakpoints_[k - 1];
  }
  double piece_hi(std::size_t k) const {
    return k == breakpoints_.size() ? source_halfheight_ : breakpoints_[k];
  }

  PiecewiseVerticalMap inverse() const {
    std::vector<double> bp(breakpoints_.size());
    std::vector<double> sl(slopes_.size()), of(offsets_.size());
    for (std::size_t k = 0; k < breakpoints_.size(); ++k)
      bp[k] = slopes_[k] * breakpoints_[k] + offsets_[k];
    for (std::size_t k = 0; k < slopes_.size(); ++k) {
      sl[k] = 1.0 / slopes_[k];
      of[k] = -offsets_[k] / slopes_[k];
    }
    return PiecewiseVerticalMap(std::move(bp), std::move(sl), std::move(of),
                                target_halfheight_);
  }

  // Merge adjacent pieces with identical slope and offset.
  PiecewiseVerticalMap normalized() const {
    std::vector<double> bp, sl{slopes_[0]}, of{offsets_[0]};
    for (std::size_t k = 1; k < slopes_.size(); ++k) {
      if (slopes_[k] == sl.back() && offsets_[k] == of.back()) continue;
      bp.push_back(breakpoints_[k - 1]);
      sl.push_back(slopes_[k]);
      of.push_back(offsets_[k]);
    }
    return PiecewiseVerticalMap(std::move(bp), std::move(sl), std::move(of),
                                source_halfheight_);
  }

 private:
  void validate() const {
    if (slopes_.empty() || slopes_.size() != offsets_.size() ||
        slopes_.size() != breakpoints_.size() + 1)
      throw std::invalid_argument("PiecewiseVerticalMap: inconsistent piece data");
    if (!(source_halfheight_ > 0.0))
      throw std::invalid_argument("PiecewiseVerticalMap: nonpositive half-height");
    for (double s : slopes_)
      if (!(s > 0.0))
        throw std::invalid_argument("PiecewiseVerticalMap: slopes must be positive");
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k)
      if (!(breakpoints_[k] < breakpoints_[k + 1]))
        throw std::invalid_argument("PiecewiseVerticalMap: breakpoints not sorted");
    if (!breakpoints_.empty() &&
        (breakpoints_.front() <= -source_halfheight_ ||
         breakpoints_.back() >= source_halfheight_))
      throw std::invalid_argument("PiecewiseVerticalMap: breakpoints outside source");
    // Continuity at the joints and odd symmetry.
    const double tol = 1e-9 * std::max(1.0, source_halfheight_);
    for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
      const double b = breakpoints_[k];
      const double left = slopes_[k] * b + offsets_[k];
      const double right = slopes_[k + 1] * b + offsets_[k + 1];
      if (std::abs(left - right) > tol)
        throw std::invalid_argument("PiecewiseVerticalMap: discontinuous at breakpoint");
    }
    for (std::size_t k = 0; k < slopes_.size(); ++k) {
      const double y = 0.5 * (piece_lo_raw(k) + piece_hi_raw(k));
      const std::size_t km = mirror_index(-y);
      const double v = slopes_[k] * y + offsets_[k];
      const double vm = slopes_[km] * (-y) + offsets_[km];
      if (std::abs(v + vm) > tol)
        throw std::invalid_argument("PiecewiseVerticalMap: not odd-symmetric");
    }
  }

  double piece_lo_raw(std::size_t k) const {
    return k == 0 ? -source_halfheight_ : breakpoints_[k - 1];
  }
  double piece_hi_raw(std::size_t k) const {
    return k == breakpoints_.size() ? source_halfheight_ : breakpoints_[k];
  }
  std::size_t mirror_index(double y) const {
    return static_cast<std::size_t>(
        std::upper_bound(breakpoints_.begin(), breakpoints_.end(), y) -
        breakpoints_.begin());
  }

  std::vector<double> breakpoints_;
  std::vector<double> slopes_;
  std::vector<double> offsets_;
  double source_halfheight_;
  double target_halfheight_;
};

// Complex dilatation field that is constant on horizontal bands.
struct BandBeltrami {
  struct Band {
    double y_lo, y_hi;
    std::complex<double> value;  // |value| < 1
  };
  std::vector<Band> bands;  // contiguous, covering [-half_height, half_height]
  double half_height = 0.0;

  std::complex<double> value_at(double y) const {
    for (const Band& b : bands)
      if (y >= b.y_lo && y <= b.y_hi) return b.value;
    throw std::domain_error("BandBeltrami: y outside the covered strip");
  }

  double sup_modulus() const {
    double m = 0.0;
    for (const Band& b : bands) m = std::max(m, std::abs(b.value));
    return m;
  }
};

// y -> (1+t)y on the central band |y| <= a*H, parallel shift by a*t*H outside.
// Maps C(H) onto C((1+a*t)H).
inline PiecewiseVerticalMap stretch_map(double H, double a, double t) {
  CylinderSpec c(H, a);  // validates H and a
  detail::check_time(t);
  const double aH = a * H;
  const double shift = a * t * H;
  PiecewiseVerticalMap m({-aH, aH}, {1.0, 1.0 + t, 1.0}, {-shift, 0.0, shift}, H);
  return m.normalized();
}

// Beltrami coefficient of x + i*m(y): constant (1-s)/(1+s) on each band of
// slope s.  Real and <= 0 for slopes >= 1; the stretch stage at time t gives
// -t/(2+t) on the central band and 0 outside, independent of H and a.
inline BandBeltrami beltrami_of(const PiecewiseVerticalMap& m) {
  BandBeltrami spec;
  spec.half_height = m.source_halfheight();
  for (std::size_t k = 0; k < m.piece_count(); ++k) {
    const double s = m.slopes()[k];
    spec.bands.push_back({m.piece_lo(k), m.piece_hi(k), {(1.0 - s) / (1.0 + s), 0.0}});
  }
  return spec;
}

// Derivative at h=0 of the coefficient of (stage t+h) o (stage t)^{-1}:
// -1/(2+2t) on |y| <= (1+t)aH inside C((1+at)H), zero outside.  The value does
// not depend on H or a; only the band edges do.
inline BandBeltrami infinitesimal_beltrami(double H, double a, double t) {
  CylinderSpec c(H, a);
  if (!(t >= 0.0)) throw std::domain_error("infinitesimal_beltrami: t must be >= 0");
  const double edge = (1.0 + t) * a * H;
  const double h = (1.0 + a * t) * H;
  const double v = -1.0 / (2.0 + 2.0 * t);
  BandBeltrami spec;
  spec.half_height = h;
  spec.bands = {{-h, -edge, {0.0, 0.0}}, {-edge, edge, {v, 0.0}}, {edge, h, {0.0, 0.0}}};
  return spec;
}

// Exact composition outer o inner.  Breakpoints are the union of the inner
// breakpoints and the inner preimages of the outer ones; slopes multiply and
// offsets follow from the per-piece affine data, not from resampling.
inline PiecewiseVerticalMap compose(const PiecewiseVerticalMap& outer,
                                    const PiecewiseVerticalMap& inner) {
  const double ht = inner.target_halfheight();
  const double hs = outer.source_halfheight();
  if (std::abs(ht - hs) > 1e-9 * std::max(1.0, hs))
    throw std::invalid_argument("compose: inner target and outer source heights differ");

  std::vector<double> joints(inner.breakpoints());
  const PiecewiseVerticalMap inv = inner.inverse();
  for (double b : outer.breakpoints()) joints.push_back(inv(b));
  std::sort(joints.begin(), joints.end());
  const double tol = 1e-12 * std::max(1.0, inner.source_halfheight());
  joints.erase(std::unique(joints.begin(), joints.end(),
                           [tol](double p, double q) { return std::abs(p - q) <= tol; }),
               joints.end());
  // Keep only joints strictly inside the source interval.
  std::vector<double> bp;
  for (double b : joints)
    if (b > -inner.source_halfheight() + tol && b < inner.source_halfheight() - tol)
      bp.push_back(b);

  std::vector<double> sl(bp.size() + 1), of(bp.size() + 1);
  for (std::size_t k = 0; k <= bp.size(); ++k) {
    const double lo = k == 0 ? -inner.source_halfheight() : bp[k - 1];
    const double hi = k == bp.size() ? inner.source_halfheight() : bp[k];
    const double ym = 0.5 * (lo + hi);
    const std::size_t ki = inner.piece_index(ym);
    const std::size_t ko = outer.piece_index(inner(ym));
    const double si = inner.slopes()[ki], oi = inner.offsets()[ki];
    const double so = outer.slopes()[ko], oo = outer.offsets()[ko];
    sl[k] = so * si;
    of[k] = so * oi + oo;
  }
  return PiecewiseVerticalMap(std::move(bp), std::move(sl), std::move(of),
                              inner.source_halfheight())
      .normalized();
}

// Iterated schedule on C(H) with band fraction 1/2: stage m runs on
// C((3/2)^{m-1}H) over local time t-(m-1).  Integer global time t = m yields
// the m-fold composition with maximal slope 2^m and target height (3/2)^m H.
inline PiecewiseVerticalMap iterate_schedule(double H, int stages, double t) {
  if (stages < 1) throw std::invalid_argument("iterate_schedule: stages must be >= 1");
  if (!(t >= 0.0 && t <= static_cast<double>(stages)))
    throw std::domain_error("iterate_schedule: global time outside [0, stages]");
  const double a = 0.5;
  int m = std::min(static_cast<int>(std::floor(t)) + 1, stages);
  const double local = t - static_cast<double>(m - 1);
  PiecewiseVerticalMap acc = PiecewiseVerticalMap::identity(H);
  double h = H;
  for (int k = 1; k < m; ++k) {
    acc = compose(stretch_map(h, a, 1.0), acc);
    h *= 1.5;
  }
  return compose(stretch_map(h, a, local), acc);
}

// Maximal dilatation sup max(s, 1/s) over the pieces.
inline double max_dilatation(const PiecewiseVerticalMap& m) {
  double K = 1.0;
  for (double s : m.slopes()) K = std::max(K, std::max(s, 1.0 / s));
  return K;
}

inline double max_dilatation(const BandBeltrami& spec) {
  double K = 1.0;
  for (const auto& b : spec.bands) {
    const double mod = std::abs(b.value);
    if (mod >= 1.0) throw std::domain_error("max_dilatation: |value| >= 1");
    K = std::max(K, (1.0 + mod) / (1.0 - mod));
  }
  return K;
}

// Conformal conjugation by a rotation of phase theta multiplies every
// coefficient by the unimodular factor e^{-2 i theta}; moduli are unchanged.
inline BandBeltrami conjugate_phase(const BandBeltrami& spec, double theta) {
  BandBeltrami out = spec;
  const std::complex<double> factor = std::polar(1.0, -2.0 * theta);
  for (auto& b : out.bands) b.value *= factor;
  return out;
}

}  // namespace cylqc
