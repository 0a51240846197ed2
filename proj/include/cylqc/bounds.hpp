// Convergence bookkeeping for the iterated stretch schedule.
//
// Per-stage distance bounds C (L log 1/L)^2 * (ln 2)/2 with radii shrinking by
// 2*sqrt(2)/3 per stage, the summable majorant series j^2 r^j with its closed
// form, the geodesic-length decay (2/3)^{n-1} pi^2/H, and the stage index at
// which a K-quasiconformal image would violate the length comparison
// l/K <= l' <= lK.

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cylqc {

// Per-stage injectivity-radius contraction of the stretch schedule.
inline const double kRadiusContractionRatio = 2.0 * std::sqrt(2.0) / 3.0;

// One step of the derivative estimate: C * (L log(1/L))^2 * integral_0^1
// dt/(2+2t), the integral in closed form (ln 2)/2.
inline double mcmullen_step(double L, double C = 1.0) {
  if (!(L > 0.0 && L < 1.0))
    throw std::domain_error("mcmullen_step: radius bound must lie in (0,1)");
  const double s = L * std::log(1.0 / L);
  return C * s * s * (0.5 * std::numbers::ln2);
}

// L'_j = L0 * ratio^j for j = 0..J.
inline std::vector<double> radius_sequence(double L0, double ratio, std::size_t J) {
  if (!(L0 > 0.0 && L0 <= 0.5))
    throw std::invalid_argument("radius_sequence: L0 must lie in (0, 1/2]");
  if (!(ratio >= 0.0 && ratio < 1.0))
    throw std::invalid_argument("radius_sequence: ratio must lie in [0,1)");
  std::vector<double> out(J + 1);
  double v = L0;
  for (std::size_t j = 0; j <= J; ++j) {
    out[j] = v;
    v *= ratio;
  }
  return out;
}

// Closed form sum_{j>=1} j^2 r^j = r(1+r)/(1-r)^3.
inline double base_series_closed_form(double r) {
  if (!(r >= 0.0 && r < 1.0))
    throw std::invalid_argument("base_series_closed_form: r must lie in [0,1)");
  const double d = 1.0 - r;
  return r * (1.0 + r) / (d * d * d);
}

struct SeriesSum {
  double base_partial;   // sum_{1<=j<=J} j^2 (ratio^2)^j
  double base_closed;    // r(1+r)/(1-r)^3 at r = ratio^2
  double step_partial;   // sum_{0<=j<=J} mcmullen_step(L0 ratio^j, C)
  double step_cap;       // provable upper bound for all partial step sums
};

// Partial sums of the per-stage bounds and of the majorant base series.
//
// The cap splits the stages at 1/e: for ratio^j <= 1/e the step is dominated
// by j^2 r^j (log 1/ratio)^2 termwise (s(x) = x log 1/x is increasing there);
// the finitely many earlier stages are bounded by the global maximum s(1/e).
inline SeriesSum series_sum(double C, double L0, double ratio, std::size_t J) {
  if (!(C > 0.0)) throw std::invalid_argument("series_sum: C must be positive");
  if (!(L0 > 0.0 && L0 <= 0.5))
    throw std::invalid_argument("series_sum: L0 must lie in (0, 1/2]");
  if (!(ratio >= 0.0 && ratio < 1.0))
    throw std::invalid_argument("series_sum: ratio must lie in [0,1)");
  if (J < 1) throw std::invalid_argument("series_sum: J must be >= 1");

  const double r = ratio * ratio;
  SeriesSum out{0.0, base_series_closed_form(r), 0.0, 0.0};
  double rj = 1.0;
  for (std::size_t j = 1; j <= J; ++j) {
    rj *= r;
    out.base_partial += static_cast<double>(j) * static_cast<double>(j) * rj;
  }
  double L = L0;
  for (std::size_t j = 0; j <= J; ++j) {
    if (L > 0.0) out.step_partial += mcmullen_step(L, C);
    L *= ratio;
  }
  const double inv_e = 1.0 / std::numbers::e;
  double head = 1.0;  // stages with ratio^j > 1/e, bounded by s(1/e) = 1/e
  if (ratio > 0.0) head = std::floor(1.0 / std::log(1.0 / ratio)) + 1.0;
  const double log_inv_ratio = ratio > 0.0 ? std::log(1.0 / ratio) : 0.0;
  out.step_cap = C * (0.5 * std::numbers::ln2) *
                 (head * inv_e * inv_e +
                  log_inv_ratio * log_inv_ratio * out.base_closed);
  return out;
}

struct ConvergenceLedger {
  double C;
  double L0;
  double ratio;
  std::vector<double> radii;         // L'_j
  std::vector<double> step_bounds;   // per-stage bound in multiples of C
  std::vector<double> partial_sums;  // cumulative
  SeriesSum series;
};

inline ConvergenceLedger build_ledger(double C, double L0, double ratio,
                                      std::size_t J) {
  ConvergenceLedger led;
  led.C = C;
  led.L0 = L0;
  led.ratio = ratio;
  led.radii = radius_sequence(L0, ratio, J);
  led.series = series_sum(C, L0, ratio, J);
  double acc = 0.0;
  for (double L : led.radii) {
    const double s = L > 0.0 ? mcmullen_step(L, C) : 0.0;
    led.step_bounds.push_back(s);
    acc += s;
    led.partial_sums.push_back(acc);
  }
  return led;
}

// Upper bound (2/3)^{n-1} pi^2/H for the shortest geodesic after n stages.
inline double geodesic_decay(std::size_t n, double H) {
  if (n < 1) throw std::invalid_argument("geodesic_decay: n must be >= 1");
  if (!(H > 0.0)) throw std::invalid_argument("geodesic_decay: H must be positive");
  const double pi = std::numbers::pi;
  return std::pow(2.0 / 3.0, static_cast<double>(n - 1)) * pi * pi / H;
}

// Least stage n at which the decayed length drops below short/K, so no
// K-quasiconformal map can match the limit lengths: the certificate of
// non-interiority.
inline std::size_t wolpert_contradiction(double short_length, double K, double H) {
  if (!(short_length > 0.0))
    throw std::invalid_argument("wolpert_contradiction: short length must be positive");
  if (!(K >= 1.0)) throw std::invalid_argument("wolpert_contradiction: K must be >= 1");
  const double target = short_length / K;
  for (std::size_t n = 1; n < 100000; ++n)
    if (geodesic_decay(n, H) < target) return n;
  throw std::runtime_error("wolpert_contradiction: no stage found (target too small)");
}

}  // namespace cylqc
