#include "specode/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace specode {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

ModeFunction normalise(const FrequencyGrid& grid, CVector raw) {
  ModeFunction m;
  m.grid = grid;
  m.norm = l2_norm(grid, raw);
  if (!(m.norm > 0.0)) throw UnderResolvedGrid("mode profile vanishes on the grid");
  for (auto& v : raw) v /= m.norm;
  m.samples = std::move(raw);
  return m;
}

}  // namespace

void PhysicalParams::validate() const {
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be > 0");
  if (!(gamma3N > 0.0)) throw InvalidArgument("gamma3N must be > 0");
  if (!(tau > 0.0)) throw InvalidArgument("tau must be > 0");
  for (double v : {delta1, delta2, omega_a_tilde, omega_b_tilde}) {
    if (!std::isfinite(v)) throw InvalidArgument("physical parameters must be finite");
  }
  if (!finite(coupling_prefactor)) throw InvalidArgument("coupling_prefactor must be finite");
}

void PairShift::validate() const {
  if (!finite(weight)) throw InvalidArgument("pair weight must be finite");
  if (!std::isfinite(delta_p) || !std::isfinite(delta_q)) throw InvalidArgument("pair shifts must be finite");
}

void MultiplexedSpectrum::validate() const {
  params.validate();
  if (pairs.empty()) throw InvalidArgument("spectrum needs at least one pair");
  for (const auto& p : pairs) p.validate();
}

double gaussian_factor(const PhysicalParams& params, double x) {
  return std::exp(-x * x * params.tau * params.tau / 8.0);
}

cplx lorentzian_amplitude(const PhysicalParams& params, double x) {
  return 1.0 / cplx(params.gamma3N / 2.0, -x);
}

cplx jsa_single(const PhysicalParams& params, double dws, double dwi) {
  return gaussian_factor(params, dws + dwi) * lorentzian_amplitude(params, dwi);
}

cplx jsa_multiplexed(const MultiplexedSpectrum& spec, double dws, double dwi) {
  cplx s = 0.0;
  for (const auto& p : spec.pairs) {
    s += p.weight * gaussian_factor(spec.params, dws + dwi + p.delta_q) *
         lorentzian_amplitude(spec.params, dwi - p.delta_p);
  }
  return s;
}

ModeFunction marginal_signal_mode(const PairShift& pair, const PhysicalParams& params,
                                  const FrequencyGrid& grid) {
  params.validate();
  grid.validate();
  const double width = 1.0 / params.tau;
  if (grid.spacing() > width / 8.0) {
    throw UnderResolvedGrid("signal grid spacing " + fmt(grid.spacing()) + " exceeds (1/tau)/8 = " +
                            fmt(width / 8.0));
  }
  const double c = pair.signal_center();
  if (grid.min > c - 6.0 * width || grid.max < c + 6.0 * width) {
    throw UnderResolvedGrid("signal grid does not cover 6/tau around the mode center");
  }
  const double t2 = params.tau * params.tau;
  const cplx shift(pair.delta_p + pair.delta_q, params.gamma3N / 2.0);
  CVector raw(grid.points);
  for (std::size_t k = 0; k < grid.points; ++k) {
    const cplx z = grid.at(k) + shift;
    raw[k] = -std::exp(-z * z * t2 / 8.0);
  }
  return normalise(grid, std::move(raw));
}

ModeFunction marginal_idler_mode(const PairShift& pair, const PhysicalParams& params,
                                 const FrequencyGrid& grid) {
  params.validate();
  grid.validate();
  if (grid.spacing() > params.gamma3N / 8.0) {
    throw UnderResolvedGrid("idler grid spacing " + fmt(grid.spacing()) + " exceeds gamma3N/8 = " +
                            fmt(params.gamma3N / 8.0));
  }
  const double reach = 20.0 * params.gamma3N;
  if (grid.min > pair.delta_p - reach || grid.max < pair.delta_p + reach) {
    throw UnderResolvedGrid("idler grid does not span +-20 gamma3N around delta_p");
  }
  CVector raw(grid.points);
  for (std::size_t k = 0; k < grid.points; ++k) raw[k] = lorentzian_amplitude(params, grid.at(k) - pair.delta_p);
  return normalise(grid, std::move(raw));
}

double signal_norm_continuum(const PhysicalParams& params) {
  const double g = params.gamma3N * params.tau;
  return std::sqrt(std::exp(g * g / 16.0) * 2.0 * std::sqrt(kPi) / params.tau);
}

double idler_norm_continuum(const PhysicalParams& params) {
  return std::sqrt(2.0 * kPi / params.gamma3N);
}

double default_half_width(const MultiplexedSpectrum& spec) {
  double outer = 0.0;
  for (const auto& p : spec.pairs) outer = std::max(outer, std::abs(p.delta_p));
  return outer + 50.0 * spec.params.gamma3N;
}

void check_coverage(const MultiplexedSpectrum& spec, const FrequencyGrid& grid) {
  grid.validate();
  double offset = 0.0;
  for (const auto& p : spec.pairs) offset = std::max({offset, std::abs(p.delta_p), std::abs(p.delta_q)});
  const double need = std::max(6.0 / spec.params.tau, 6.0 * spec.params.gamma3N) + offset;
  if (grid.min > -need || grid.max < need) {
    throw UnderResolvedGrid("grid must cover +-" + fmt(need) + " (6/tau or 6 gamma3N plus offsets)");
  }
}

JointAmplitude sample_jsa(const MultiplexedSpectrum& spec, const FrequencyGrid& grid_s,
                          const FrequencyGrid& grid_i) {
  spec.validate();
  grid_s.validate();
  grid_i.validate();
  JointAmplitude j{grid_s, grid_i, Eigen::MatrixXcd::Zero(grid_s.points, grid_i.points)};
  // Factor each pair into a Lorentzian column vector and Gaussian rows.
  for (const auto& p : spec.pairs) {
    CVector lor(grid_i.points);
    for (std::size_t b = 0; b < grid_i.points; ++b)
      lor[b] = p.weight * lorentzian_amplitude(spec.params, grid_i.at(b) - p.delta_p);
    for (std::size_t a = 0; a < grid_s.points; ++a) {
      const double ws = grid_s.at(a);
      for (std::size_t b = 0; b < grid_i.points; ++b)
        j.values(a, b) += gaussian_factor(spec.params, ws + grid_i.at(b) + p.delta_q) * lor[b];
    }
  }
  return j;
}

void write_mode_csv(std::ostream& out, const ModeFunction& mode) {
  out << "omega,re,im\n" << std::setprecision(12);
  for (std::size_t k = 0; k < mode.samples.size(); ++k)
    out << mode.grid.at(k) << ',' << mode.samples[k].real() << ',' << mode.samples[k].imag() << '\n';
}

}  // namespace specode
