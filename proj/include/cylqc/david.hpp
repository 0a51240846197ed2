// Budgeted assembly of a degenerate dilatation field and its certificates.
//
// The construction pairs a summable budget p_j with a vanishing area sequence:
// stage j is placed on the first region whose area times e^{2*2^j} still fits
// under p_j.  The resulting field has moduli (2^j-1)/(2^j+1) -> 1 but its
// distortion K stays exponentially integrable, which is certified by a
// Chebychev-type superlevel-set bound |{|mu| > 1-eps}| <= C e^{-2/eps}.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cylqc {

// A positive sequence together with its exact tail sums.
struct SummableSequence {
  std::function<double(std::size_t)> at;
  std::function<double(std::size_t)> tail_from;  // sum_{n >= j} at(n)
};

inline SummableSequence geometric_sequence(double first, double ratio) {
  if (!(first > 0.0)) throw std::invalid_argument("geometric_sequence: first <= 0");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("geometric_sequence: ratio must be in (0,1)");
  return SummableSequence{
      [first, ratio](std::size_t n) { return first * std::pow(ratio, static_cast<double>(n)); },
      [first, ratio](std::size_t j) {
        return first * std::pow(ratio, static_cast<double>(j)) / (1.0 - ratio);
      }};
}

struct DavidBudget {
  std::vector<double> p;             // budget values p_j
  std::vector<std::size_t> M;        // selected region index per stage
  std::vector<double> area_at_M;     // area of the selected regions
  SummableSequence p_seq;            // kept for tail sums

  std::size_t stages() const { return p.size(); }
};

// Dilatation K_j = 2^j of the j-fold iterated stretch.
inline double stage_dilatation(std::size_t j) {
  return std::ldexp(1.0, static_cast<int>(j));
}

// For each stage j pick the smallest index m > M(j-1) with
// area(m) * e^{2*2^j} < p_j.  Evaluated in log space so large stages do not
// overflow.  Throws if the area sequence fails to decay far enough.
inline DavidBudget select_budget(const SummableSequence& p,
                                 const std::function<double(std::size_t)>& area,
                                 std::size_t stages) {
  if (stages == 0) throw std::invalid_argument("select_budget: no stages");
  DavidBudget budget;
  budget.p_seq = p;
  std::size_t m = 0;
  bool first = true;
  for (std::size_t j = 0; j < stages; ++j) {
    const double pj = p.at(j);
    if (!(pj > 0.0)) throw std::invalid_argument("select_budget: budget not positive");
    const double need = std::log(pj) - 2.0 * stage_dilatation(j);
    std::size_t start = first ? 0 : m + 1;
    bool found = false;
    for (std::size_t cand = start; cand < start + 1000000; ++cand) {
      const double a = area(cand);
      if (!(a > 0.0)) throw std::invalid_argument("select_budget: area not positive");
      if (std::log(a) < need) {
        m = cand;
        found = true;
        break;
      }
    }
    if (!found)
      throw std::runtime_error("select_budget: area sequence does not decay enough");
    budget.p.push_back(pj);
    budget.M.push_back(m);
    budget.area_at_M.push_back(area(m));
    first = false;
  }
  return budget;
}

// Dilatation field described by labeled regions of known area and constant
// modulus, sitting inside a domain of total area `domain_area` (unit disk by
// default); the complement carries modulus 0.
struct RegionBeltrami {
  struct Region {
    std::size_t label;
    double area;
    double modulus;
  };
  std::vector<Region> regions;
  double domain_area = std::numbers::pi;

  double region_area_total() const {
    double s = 0.0;
    for (const auto& r : regions) s += r.area;
    return s;
  }
  double background_area() const { return domain_area - region_area_total(); }
  double sup_modulus() const {
    double m = 0.0;
    for (const auto& r : regions) m = std::max(m, r.modulus);
    return m;
  }
  // Area of {|mu| > 1-eps}: a right-continuous step function of eps.
  double superlevel_area(double eps) const {
    double s = 0.0;
    for (const auto& r : regions)
      if (r.modulus > 1.0 - eps) s += r.area;
    return s;
  }
};

// Field assembled from the budget: stage j contributes a region of area
// area(M(j)) and modulus (2^j-1)/(2^j+1), the modulus of the deepest band of
// the j-fold stretch.
inline RegionBeltrami assemble_mu(const DavidBudget& budget) {
  RegionBeltrami spec;
  for (std::size_t j = 0; j < budget.stages(); ++j) {
    const double K = stage_dilatation(j);
    spec.regions.push_back({budget.M[j], budget.area_at_M[j], (K - 1.0) / (K + 1.0)});
  }
  if (spec.background_area() < 0.0)
    throw std::invalid_argument("assemble_mu: selected areas exceed the domain area");
  return spec;
}

struct ExpIntegrability {
  double region_sum;   // sum over regions of area * e^{p K}
  double background;   // background area * e^{p}
  double total() const { return region_sum + background; }
};

// Exact integral of e^{p K(mu)} for a region field, K = (1+|mu|)/(1-|mu|).
// Region terms are evaluated as exp(log(area) + pK) so huge dilatations with
// tiny areas do not overflow.
inline ExpIntegrability exp_integrability(const RegionBeltrami& spec, double p) {
  double rs = 0.0;
  for (const auto& r : spec.regions) {
    if (!(r.modulus < 1.0))
      throw std::domain_error("exp_integrability: region modulus >= 1");
    if (!(r.area > 0.0)) throw std::invalid_argument("exp_integrability: area <= 0");
    const double K = (1.0 + r.modulus) / (1.0 - r.modulus);
    rs += std::exp(std::log(r.area) + p * K);
  }
  const double bg = spec.background_area();
  const double bgterm = bg > 0.0 ? std::exp(std::log(bg) + p) : 0.0;
  return ExpIntegrability{rs, bgterm};
}

struct DavidCertificate {
  double alpha = 2.0;           // decay rate of the superlevel bound
  double C = 0.0;               // prefactor: integral of e^{p(K+1)}
  double eps0 = 0.0;            // smallest tested eps
  double exponent_p = 2.0;
  ExpIntegrability exp_integral{0.0, 0.0};

  struct Point {
    double eps;
    double measured;
    double bound;
    bool holds;
  };
  std::vector<Point> grid;

  // Informational two-parameter fit log(measured) ~ log(C_fit) - alpha_fit/eps
  // over the nonempty superlevel sets; not asserted anywhere.
  double fitted_alpha = 0.0;
  double fitted_log_C = 0.0;
  std::size_t fit_points = 0;

  bool all_hold() const {
    for (const auto& pt : grid)
      if (!pt.holds) return false;
    return true;
  }
};

// Chebychev certificate with alpha = 2: the measured superlevel areas are
// compared against C e^{-2/eps} with C = e^p * (integral of e^{pK}).
inline DavidCertificate certify(const RegionBeltrami& spec,
                                const std::vector<double>& eps_grid,
                                double p = 2.0) {
  if (eps_grid.empty()) throw std::invalid_argument("certify: empty eps grid");
  DavidCertificate cert;
  cert.exponent_p = p;
  cert.exp_integral = exp_integrability(spec, p);  // throws on |mu| >= 1
  cert.C = std::exp(p) * cert.exp_integral.total();
  cert.alpha = 2.0;
  cert.eps0 = eps_grid.front();
  for (double eps : eps_grid) {
    if (!(eps > 0.0)) throw std::invalid_argument("certify: eps must be positive");
    cert.eps0 = std::min(cert.eps0, eps);
    const double measured = spec.superlevel_area(eps);
    const double bound = cert.C * std::exp(-cert.alpha / eps);
    cert.grid.push_back({eps, measured, bound, measured <= bound});
  }
  // Least-squares fit on the nonzero measurements, reported only.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const auto& pt : cert.grid) {
    if (pt.measured <= 0.0) continue;
    const double x = 1.0 / pt.eps, y = std::log(pt.measured);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++n;
  }
  if (n >= 2) {
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    if (denom != 0.0) {
      const double slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
      cert.fitted_alpha = -slope;
      cert.fitted_log_C = (sy - slope * sx) / static_cast<double>(n);
      cert.fit_points = n;
    }
  }
  return cert;
}

// Remaining budget mass sum_{n >= j} p_n; dominates the L1 distortion gap
// between the stage-j field and the limit field.
inline double l1_tail(const DavidBudget& budget, std::size_t j) {
  return budget.p_seq.tail_from(j);
}

}  // namespace cylqc
