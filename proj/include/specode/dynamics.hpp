#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specode/common.hpp"
#include "specode/grid.hpp"

namespace specode {

/// Gaussian two-photon drive of the symmetric collective mode:
/// Omega(t) = Omega~ / (sqrt(pi) tau) e^{-t^2/tau^2}.
struct DriveParams {
  double omega_a_tilde = 1.0;
  double omega_b_tilde = 1.0;
  double tau = 0.5;
  double delta1 = 50.0;
  double delta2 = 50.0;
  double gamma3N = 5.0;
  /// Constant cooperative Lamb shift of the idler transition.
  double lamb_shift = 0.0;
  /// Field-mode coupling g (rescales C and D).
  double coupling = 1.0;
  /// Atom number; only enters the weak-drive validity check via sqrt(N).
  double atom_number = 1.0;

  void validate() const;
  double omega_a(double t) const;
  double omega_b(double t) const;
};

struct ModeGrids {
  FrequencyGrid signal{-32.0, 32.0, 32};
  FrequencyGrid idler{-20.0, 20.0, 32};
};

enum class IdlerEmission {
  /// Idler continuum eliminated: C_s decays at G3N/2 - i lamb_shift and feeds D.
  kMarkovDecay,
  /// Idler modes kept explicitly, no decay (norm-conserving with back-action).
  kDiscreteModes,
};

struct DynamicsOptions {
  double rtol = 1e-8;
  double atol = 1e-14;
  /// Defaults: t0 = -8 tau, t_final = 8 tau + 10/G3N.
  std::optional<double> t0;
  std::optional<double> t_final;
  IdlerEmission emission = IdlerEmission::kMarkovDecay;
  /// Adds the Hermitian partners of the emission couplings (B <- C, C <- D).
  bool back_action = false;
  /// Spacing of the recorded eps/A/B trace.
  double trace_dt = 0.005;
  std::size_t max_steps = 5'000'000;
  /// Throws NotConverged if |D|^2 still moves by > 1e-4 of its peak per unit time.
  bool check_convergence = true;
};

struct AmplitudeState {
  cplx eps{1.0, 0.0};
  cplx a_amp{0.0, 0.0};
  cplx b_amp{0.0, 0.0};
  CVector c_amp;            ///< per signal mode
  Eigen::MatrixXcd d_amp;   ///< signal rows, idler columns
  double time = 0.0;

  double norm_squared() const;
  /// |eps|^2 + |A|^2 + |B|^2 + sum |C|^2
  double emitter_norm_squared() const;
};

struct AtomicTrace {
  std::vector<double> t;
  CVector eps;
  CVector a;
  CVector b;
};

struct DynamicsResult {
  AmplitudeState state;
  AtomicTrace trace;
  std::vector<std::string> warnings;
  std::size_t steps = 0;
};

/// Integrates the reduced cascade equations
///   eps' = i Wa/2 A
///   A'   = i Wa/2 eps + i Wb/2 B + i D1 A
///   B'   = i Wb/2 A + i D2 B            [+ i g sum_s e^{-i ws t} C_s]
///   C_s' = i g e^{i ws t} B - (G3N/2 - i dw) C_s   (Markov emission)
///   D_si' = g e^{i wi t} C_s
/// with an adaptive Dormand-Prince 5(4) stepper. Throws StepFailure,
/// NotConverged; a weak-drive violation adds a "ValidityWarning" entry.
DynamicsResult integrate_eom(const DriveParams& drive, const ModeGrids& grids, const DynamicsOptions& options = {});

/// Long-time closed form
/// (Wa~ Wb~ / 4 D1 D2) (1/(sqrt(2 pi) tau)) e^{-(ws+wi)^2 tau^2/8} / (G3N/2 - i(wi + dw)).
/// The integrated amplitude equals i times this value.
cplx dsi_analytic(const DriveParams& drive, double dws, double dwi);

/// Adiabatic amplitudes -Wa(t)/(2 D1) and Wa(t) Wb(t)/(4 D1 D2).
double a_adiabatic(const DriveParams& drive, double t);
double b_adiabatic(const DriveParams& drive, double t);

struct TrackingReport {
  double a_error = 0.0;            ///< max |A - A_ad| / max |A_ad| over the window
  double b_error = 0.0;            ///< same for B
  double b_magnitude_error = 0.0;  ///< max ||B| - |B_ad|| / max |B_ad|
};

/// Tracking of the adiabatic forms over |t| <= window (default tau).
TrackingReport adiabatic_tracking(const DynamicsResult& result, const DriveParams& drive,
                                  std::optional<double> window = std::nullopt);

struct DynamicsComparison {
  /// Sup-norm difference of |D|^2 surfaces, each normalised to unit peak.
  double shape_deviation = 0.0;
  /// max |D_numeric| / max |D_analytic|
  double peak_ratio = 0.0;
  Eigen::MatrixXd numeric_shape;
  Eigen::MatrixXd analytic_shape;
  ModeGrids grids;
  TrackingReport tracking;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
  double max_abs_d = 0.0;
};

/// Throws InvalidArgument if t_final < 8 tau + 10/G3N.
DynamicsComparison compare_dynamics(const DriveParams& drive, const ModeGrids& grids,
                                    const DynamicsOptions& options = {});

/// C_s(t) = i g int_{t0}^{t} e^{i ws t'} B(t') e^{-(G3N/2 - i dw)(t - t')} dt' by
/// trapezoid quadrature over the recorded trace (or the adiabatic B).
cplx c_quadrature(const AtomicTrace& trace, const DriveParams& drive, double dws, double t,
                  bool adiabatic_b = false);

}  // namespace specode
