#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "specode/common.hpp"

namespace specode {

/// Uniform frequency grid in units of Gamma. Quadrature is the trapezoidal
/// rule; Lorentzian tails converge slowly under it, so callers size grids with
/// generous half-widths (see spectra::default_half_width).
struct FrequencyGrid {
  double min = -1.0;
  double max = 1.0;
  std::size_t points = 2;

  double spacing() const { return (max - min) / static_cast<double>(points - 1); }
  double at(std::size_t i) const { return min + spacing() * static_cast<double>(i); }
  std::vector<double> values() const;
  void validate() const;

  static FrequencyGrid centered(double center, double half_width, std::size_t points);
  /// Smallest grid on [lo, hi] whose spacing does not exceed max_spacing.
  static FrequencyGrid covering(double lo, double hi, double max_spacing);
  /// Grid with exactly the given spacing, anchored so that `anchor` is a node.
  static FrequencyGrid aligned(double lo, double hi, double spacing, double anchor = 0.0);
};

std::vector<double> trapezoid_weights(const FrequencyGrid& grid);

double integrate(const FrequencyGrid& grid, std::span<const double> f);
cplx integrate(const FrequencyGrid& grid, std::span<const cplx> f);

/// Returns int conj(a) b under trapezoid quadrature.
cplx inner_product(const FrequencyGrid& grid, std::span<const cplx> a, std::span<const cplx> b);

/// Returns sqrt(int |f|^2).
double l2_norm(const FrequencyGrid& grid, std::span<const cplx> f);

bool same_spacing(const FrequencyGrid& a, const FrequencyGrid& b, double rel_tol = 1e-9);

}  // namespace specode
