#include "specode/grid.hpp"

#include <cmath>
#include <string>

namespace specode {

std::vector<double> FrequencyGrid::values() const {
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) v[i] = at(i);
  return v;
}

void FrequencyGrid::validate() const {
  if (points < 2) throw InvalidArgument("FrequencyGrid needs at least 2 points");
  if (!(min < max)) throw InvalidArgument("FrequencyGrid requires min < max");
  if (!std::isfinite(min) || !std::isfinite(max)) throw InvalidArgument("FrequencyGrid bounds must be finite");
}

FrequencyGrid FrequencyGrid::centered(double center, double half_width, std::size_t points) {
  FrequencyGrid g{center - half_width, center + half_width, points};
  g.validate();
  return g;
}

FrequencyGrid FrequencyGrid::covering(double lo, double hi, double max_spacing) {
  if (!(max_spacing > 0.0)) throw InvalidArgument("grid spacing must be positive");
  const auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) / max_spacing - 1e-12));
  FrequencyGrid g{lo, hi, std::max<std::size_t>(intervals, 1) + 1};
  g.validate();
  return g;
}

FrequencyGrid FrequencyGrid::aligned(double lo, double hi, double spacing, double anchor) {
  if (!(spacing > 0.0)) throw InvalidArgument("grid spacing must be positive");
  const double first = anchor + std::floor((lo - anchor) / spacing) * spacing;
  const double last = anchor + std::ceil((hi - anchor) / spacing) * spacing;
  const auto n = std::max<std::size_t>(static_cast<std::size_t>(std::llround((last - first) / spacing)) + 1, 2);
  FrequencyGrid g{first, first + spacing * static_cast<double>(n - 1), n};
  g.validate();
  return g;
}

std::vector<double> trapezoid_weights(const FrequencyGrid& grid) {
  grid.validate();
  std::vector<double> w(grid.points, grid.spacing());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

double integrate(const FrequencyGrid& grid, std::span<const double> f) {
  if (f.size() != grid.points) throw BadLength("sample count does not match grid");
  const auto w = trapezoid_weights(grid);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
  return s;
}

cplx integrate(const FrequencyGrid& grid, std::span<const cplx> f) {
  if (f.size() != grid.points) throw BadLength("sample count does not match grid");
  const auto w = trapezoid_weights(grid);
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
  return s;
}

cplx inner_product(const FrequencyGrid& grid, std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != grid.points || b.size() != grid.points) throw BadLength("sample count does not match grid");
  const auto w = trapezoid_weights(grid);
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * std::conj(a[i]) * b[i];
  return s;
}

double l2_norm(const FrequencyGrid& grid, std::span<const cplx> f) {
  if (f.size() != grid.points) throw BadLength("sample count does not match grid");
  const auto w = trapezoid_weights(grid);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::norm(f[i]);
  return std::sqrt(s);
}

bool same_spacing(const FrequencyGrid& a, const FrequencyGrid& b, double rel_tol) {
  return std::abs(a.spacing() - b.spacing()) <= rel_tol * std::max(a.spacing(), b.spacing());
}

}  // namespace specode
