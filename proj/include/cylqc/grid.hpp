// Rectangular cylinder grids: periodic in x with period 2*pi, plain rows in y.
// Column 0 is identified with column nx; solution fields cross the seam with
// the x-period shift, f(x + 2*pi, y) = f(x, y) + 2*pi.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "cylqc/cylinder.hpp"
#include "cylqc/stretch.hpp"

namespace cylqc {

struct GridGeometry {
  int nx = 0, ny = 0;
  double x_period = kXPeriod;
  double y_min = 0.0, y_max = 0.0;

  void validate() const {
    if (nx < 8 || ny < 8) throw std::invalid_argument("grid: nx, ny must be >= 8");
    if (!(y_max > y_min)) throw std::invalid_argument("grid: y_max must exceed y_min");
    if (!(x_period > 0.0)) throw std::invalid_argument("grid: bad x period");
  }
  double dx() const { return x_period / nx; }
  double dy() const { return (y_max - y_min) / (ny - 1); }
  double x(int j) const { return j * dx(); }
  double y(int i) const { return y_min + i * dy(); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * nx + j;
  }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
};

struct GridField {
  GridGeometry geom;
  std::vector<std::complex<double>> values;  // row-major, ny x nx

  std::complex<double> at(int i, int j) const { return values[geom.index(i, j)]; }
  std::complex<double>& at(int i, int j) { return values[geom.index(i, j)]; }

  double sup_modulus() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

// Discrete solution of a Beltrami equation on the grid.
struct GridMap {
  GridGeometry geom;
  std::vector<std::complex<double>> f;
  double residual_norm = 0.0;

  std::complex<double> at(int i, int j) const { return f[geom.index(i, j)]; }
};

inline GridField conjugate_phase(const GridField& field, double theta) {
  GridField out = field;
  const std::complex<double> factor = std::polar(1.0, -2.0 * theta);
  for (auto& v : out.values) v *= factor;
  return out;
}

// Symmetric grid whose rows contain the band interfaces y = +-a*H of a
// stretch stage, so piecewise-constant coefficients are sampled without
// straddling an interface.  outer_rows rows are placed beyond each interface;
// the extent stays inside the source cylinder for outer_rows <= (ny-1)/4
// when a = 1/2.
inline GridGeometry stretch_aligned_geometry(double H, double a, int nx, int ny,
                                             int outer_rows = -1) {
  CylinderSpec c(H, a);
  const int intervals = ny - 1;
  if (outer_rows < 0) outer_rows = intervals / 8;
  const int inner = intervals - 2 * outer_rows;
  if (outer_rows < 1 || inner < 2)
    throw std::invalid_argument("stretch_aligned_geometry: bad row split");
  const double y_b = a * H * intervals / static_cast<double>(inner);
  if (y_b > H)
    throw std::invalid_argument("stretch_aligned_geometry: extent exceeds the cylinder");
  GridGeometry g{nx, ny, kXPeriod, -y_b, y_b};
  g.validate();
  return g;
}

// Sample a band field onto grid rows.  Rows that land on a band interface get
// the coefficient of the averaged slope (1-s)/(1+s) with s the mean of the
// adjacent slopes, which keeps centered differences of the exact piecewise
// solution residual-free; complex band values fall back to the plain mean.
inline GridField sample_bands(const BandBeltrami& spec, const GridGeometry& geom) {
  geom.validate();
  GridField out{geom, std::vector<std::complex<double>>(geom.size())};
  const double tol = 1e-9 * std::max(1.0, spec.half_height);
  for (int i = 0; i < geom.ny; ++i) {
    const double yv = geom.y(i);
    std::complex<double> value{0.0, 0.0};
    bool on_edge = false;
    for (std::size_t k = 0; k + 1 < spec.bands.size(); ++k) {
      const double edge = spec.bands[k].y_hi;
      if (std::abs(yv - edge) <= tol) {
        const auto v1 = spec.bands[k].value, v2 = spec.bands[k + 1].value;
        if (v1.imag() == 0.0 && v2.imag() == 0.0) {
          const double s1 = (1.0 - v1.real()) / (1.0 + v1.real());
          const double s2 = (1.0 - v2.real()) / (1.0 + v2.real());
          const double sm = 0.5 * (s1 + s2);
          value = {(1.0 - sm) / (1.0 + sm), 0.0};
        } else {
          value = 0.5 * (v1 + v2);
        }
        on_edge = true;
        break;
      }
    }
    if (!on_edge) value = spec.value_at(yv);
    for (int j = 0; j < geom.nx; ++j) out.at(i, j) = value;
  }
  return out;
}

// Constant-coefficient field.
inline GridField constant_field(const GridGeometry& geom, std::complex<double> v) {
  geom.validate();
  return GridField{geom, std::vector<std::complex<double>>(geom.size(), v)};
}

// Boundary normalization: prescribed values on the bottom (i = 0) and top
// (i = ny-1) rows.
struct BoundaryRows {
  std::vector<std::complex<double>> bottom, top;
  std::string description;
};

inline BoundaryRows identity_rows(const GridGeometry& geom) {
  geom.validate();
  BoundaryRows rows;
  rows.description = "identity";
  rows.bottom.resize(geom.nx);
  rows.top.resize(geom.nx);
  for (int j = 0; j < geom.nx; ++j) {
    rows.bottom[j] = {geom.x(j), geom.y_min};
    rows.top[j] = {geom.x(j), geom.y_max};
  }
  return rows;
}

// Rows of x + i*m(y) for a vertical map covering the grid extent.
inline BoundaryRows map_rows(const GridGeometry& geom, const PiecewiseVerticalMap& m) {
  geom.validate();
  BoundaryRows rows;
  rows.description = "vertical map rows";
  rows.bottom.resize(geom.nx);
  rows.top.resize(geom.nx);
  const double mb = m(geom.y_min), mt = m(geom.y_max);
  for (int j = 0; j < geom.nx; ++j) {
    rows.bottom[j] = {geom.x(j), mb};
    rows.top[j] = {geom.x(j), mt};
  }
  return rows;
}

// Exact solution field x + i*m(y) on the grid.
inline GridMap exact_vertical_solution(const GridGeometry& geom,
                                       const PiecewiseVerticalMap& m) {
  geom.validate();
  GridMap out{geom, std::vector<std::complex<double>>(geom.size()), 0.0};
  for (int i = 0; i < geom.ny; ++i) {
    const double mv = m(geom.y(i));
    for (int j = 0; j < geom.nx; ++j) out.f[geom.index(i, j)] = {geom.x(j), mv};
  }
  return out;
}

}  // namespace cylqc
