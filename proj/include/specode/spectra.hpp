#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "specode/common.hpp"
#include "specode/grid.hpp"

namespace specode {

/// Atomic and pulse constants. Frequencies are in units of Gamma, times in 1/Gamma.
struct PhysicalParams {
  double gamma = 1.0;
  double gamma3N = 5.0;
  double tau = 0.5;
  double delta1 = 50.0;
  double delta2 = 50.0;
  double omega_a_tilde = 1.0;
  double omega_b_tilde = 1.0;
  /// Folds the drive, coupling and phase-sum constants into one amplitude.
  cplx coupling_prefactor{1.0, 0.0};

  void validate() const;
};

/// One multiplexed pair: weight H_n, idler shift delta_p, joint shift delta_q.
struct PairShift {
  cplx weight{1.0, 0.0};
  double delta_p = 0.0;
  double delta_q = 0.0;

  void validate() const;
  /// Center of the pair's signal support, -(delta_p + delta_q).
  double signal_center() const { return -(delta_p + delta_q); }
};

struct MultiplexedSpectrum {
  PhysicalParams params;
  std::vector<PairShift> pairs;

  void validate() const;
  std::size_t size() const { return pairs.size(); }
};

/// e^{-(ws+wi)^2 tau^2/8} / (G3N/2 - i wi)
cplx jsa_single(const PhysicalParams& params, double dws, double dwi);

/// Sum over pairs of H_n e^{-(ws+wi+dq_n)^2 tau^2/8} / (G3N/2 - i(wi-dp_n)).
cplx jsa_multiplexed(const MultiplexedSpectrum& spec, double dws, double dwi);

/// Gaussian energy-conservation factor e^{-x^2 tau^2/8} with x = ws + wi + dq.
double gaussian_factor(const PhysicalParams& params, double x);

/// Lorentzian amplitude 1/(G3N/2 - i x).
cplx lorentzian_amplitude(const PhysicalParams& params, double x);

/// A sampled mode profile. `samples` are unit-normalised under trapezoid
/// quadrature; `norm` is the quadrature L2 norm of the raw profile.
struct ModeFunction {
  FrequencyGrid grid;
  CVector samples;
  double norm = 0.0;
};

/// Integrated signal profile -e^{-(ws+dp+dq+i G3N/2)^2 tau^2/8}.
/// Throws UnderResolvedGrid if the spacing exceeds (1/tau)/8 or the grid does
/// not reach 6/tau beyond the mode center.
ModeFunction marginal_signal_mode(const PairShift& pair, const PhysicalParams& params,
                                  const FrequencyGrid& grid);

/// Integrated idler profile 1/(G3N/2 - i(wi - dp)).
/// Throws UnderResolvedGrid if the spacing exceeds G3N/8 or the grid does not
/// span +-20 G3N around delta_p.
ModeFunction marginal_idler_mode(const PairShift& pair, const PhysicalParams& params,
                                 const FrequencyGrid& grid);

/// Continuum norms of the integrated profiles.
/// Ns^2 = e^{(G3N tau)^2/16} 2 sqrt(pi)/tau, Ni^2 = 2 pi / G3N.
double signal_norm_continuum(const PhysicalParams& params);
double idler_norm_continuum(const PhysicalParams& params);

/// Default one-sided grid half-width: 50 G3N beyond the outermost idler shift.
double default_half_width(const MultiplexedSpectrum& spec);

/// Throws UnderResolvedGrid unless the grid covers +-max(6/tau, 6 G3N) plus
/// every |delta_p| and |delta_q|.
void check_coverage(const MultiplexedSpectrum& spec, const FrequencyGrid& grid);

/// Sampled joint amplitude; rows index the signal grid, columns the idler grid.
struct JointAmplitude {
  FrequencyGrid grid_s;
  FrequencyGrid grid_i;
  Eigen::MatrixXcd values;
};

JointAmplitude sample_jsa(const MultiplexedSpectrum& spec, const FrequencyGrid& grid_s,
                          const FrequencyGrid& grid_i);

/// Writes "omega,re,im" rows, 12 significant digits. Frequencies stay in Gamma units.
void write_mode_csv(std::ostream& out, const ModeFunction& mode);

}  // namespace specode
