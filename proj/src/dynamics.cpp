#include "specode/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

namespace specode {

namespace odeint = boost::numeric::odeint;
using State = std::vector<cplx>;

void DriveParams::validate() const {
  if (!(tau > 0.0)) throw InvalidArgument("tau must be > 0");
  if (!(gamma3N >= 0.0)) throw InvalidArgument("gamma3N must be >= 0");
  if (delta1 == 0.0 || delta2 == 0.0) throw InvalidArgument("detunings must be nonzero");
  if (!(atom_number >= 1.0)) throw InvalidArgument("atom_number must be >= 1");
  for (double v : {omega_a_tilde, omega_b_tilde, delta1, delta2, lamb_shift, coupling})
    if (!std::isfinite(v)) throw InvalidArgument("drive parameters must be finite");
}

double DriveParams::omega_a(double t) const {
  return omega_a_tilde / (std::sqrt(kPi) * tau) * std::exp(-t * t / (tau * tau));
}

double DriveParams::omega_b(double t) const {
  return omega_b_tilde / (std::sqrt(kPi) * tau) * std::exp(-t * t / (tau * tau));
}

double AmplitudeState::emitter_norm_squared() const {
  double s = std::norm(eps) + std::norm(a_amp) + std::norm(b_amp);
  for (const auto& c : c_amp) s += std::norm(c);
  return s;
}

double AmplitudeState::norm_squared() const { return emitter_norm_squared() + d_amp.squaredNorm(); }

double a_adiabatic(const DriveParams& drive, double t) { return -drive.omega_a(t) / (2.0 * drive.delta1); }

double b_adiabatic(const DriveParams& drive, double t) {
  return drive.omega_a(t) * drive.omega_b(t) / (4.0 * drive.delta1 * drive.delta2);
}

cplx dsi_analytic(const DriveParams& drive, double dws, double dwi) {
  const double x = dws + dwi;
  const double pref = drive.omega_a_tilde * drive.omega_b_tilde / (4.0 * drive.delta1 * drive.delta2) /
                      (std::sqrt(2.0 * kPi) * drive.tau);
  return pref * std::exp(-x * x * drive.tau * drive.tau / 8.0) / cplx(drive.gamma3N / 2.0, -(dwi + drive.lamb_shift));
}

namespace {

class Equations {
 public:
  Equations(const DriveParams& d, const ModeGrids& g, const DynamicsOptions& o)
      : drive_(d), ws_(g.signal.values()), wi_(g.idler.values()), opts_(o),
        ps_(ws_.size()), pi_(wi_.size()) {}

  std::size_t ns() const { return ws_.size(); }
  std::size_t ni() const { return wi_.size(); }
  std::size_t size() const { return 3 + ns() + ns() * ni(); }

  void operator()(const State& x, State& dx, double t) {
    const cplx I(0.0, 1.0);
    const double wa = drive_.omega_a(t), wb = drive_.omega_b(t), g = drive_.coupling;
    for (std::size_t s = 0; s < ns(); ++s) ps_[s] = std::polar(1.0, ws_[s] * t);
    for (std::size_t i = 0; i < ni(); ++i) pi_[i] = std::polar(1.0, wi_[i] * t);

    const cplx eps = x[0], a = x[1], b = x[2];
    dx[0] = I * (wa / 2.0) * a;
    dx[1] = I * (wa / 2.0) * eps + I * (wb / 2.0) * b + I * drive_.delta1 * a;
    dx[2] = I * (wb / 2.0) * a + I * drive_.delta2 * b;

    const bool markov = opts_.emission == IdlerEmission::kMarkovDecay;
    const cplx decay(drive_.gamma3N / 2.0, -drive_.lamb_shift);
    cplx feed = 0.0;
    for (std::size_t s = 0; s < ns(); ++s) {
      const cplx c = x[3 + s];
      const std::size_t row = 3 + ns() + s * ni();
      cplx dc = I * g * ps_[s] * b;
      if (markov) {
        dc -= decay * c;
      } else if (opts_.back_action) {
        cplx sum = 0.0;
        for (std::size_t i = 0; i < ni(); ++i) sum += std::conj(pi_[i]) * x[row + i];
        dc -= g * sum;
      }
      dx[3 + s] = dc;
      for (std::size_t i = 0; i < ni(); ++i) dx[row + i] = g * pi_[i] * c;
      if (opts_.back_action) feed += std::conj(ps_[s]) * c;
    }
    if (opts_.back_action) dx[2] += I * g * feed;
  }

 private:
  DriveParams drive_;
  std::vector<double> ws_, wi_;
  DynamicsOptions opts_;
  std::vector<cplx> ps_, pi_;
};

AmplitudeState unpack(const State& x, std::size_t ns, std::size_t ni, double t) {
  AmplitudeState st;
  st.eps = x[0];
  st.a_amp = x[1];
  st.b_amp = x[2];
  st.c_amp.assign(x.begin() + 3, x.begin() + 3 + static_cast<std::ptrdiff_t>(ns));
  st.d_amp.resize(ns, ni);
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t i = 0; i < ni; ++i) st.d_amp(s, i) = x[3 + ns + s * ni + i];
  st.time = t;
  return st;
}

}  // namespace

DynamicsResult integrate_eom(const DriveParams& drive, const ModeGrids& grids, const DynamicsOptions& options) {
  drive.validate();
  grids.signal.validate();
  grids.idler.validate();
  const double t0 = options.t0.value_or(-8.0 * drive.tau);
  const double t1 = options.t_final.value_or(8.0 * drive.tau + (drive.gamma3N > 0 ? 10.0 / drive.gamma3N : 0.0));
  if (!(t1 > t0)) throw InvalidArgument("t_final must exceed t0");
  if (!(options.trace_dt > 0.0)) throw InvalidArgument("trace_dt must be positive");

  DynamicsResult res;
  const double peak = std::max(std::abs(drive.omega_a(0.0)), std::abs(drive.omega_b(0.0)));
  const double detuning = std::min(std::abs(drive.delta1), std::abs(drive.delta2));
  if (std::sqrt(drive.atom_number) * peak >= 0.1 * detuning) {
    std::ostringstream os;
    os << "ValidityWarning: sqrt(N) peak |Omega| = " << std::sqrt(drive.atom_number) * peak
       << " is not small against the detuning " << detuning << "; weak-drive reduction may fail";
    res.warnings.push_back(os.str());
  }

  Equations eq(drive, grids, options);
  State x(eq.size(), cplx(0.0));
  x[0] = 1.0;

  const double fastest = std::max({std::abs(drive.delta1), std::abs(drive.delta2), 1.0 / drive.tau});
  const double max_dt = std::min(drive.tau / 10.0, 1.0 / fastest);
  auto stepper = odeint::make_dense_output(options.atol, options.rtol, max_dt, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(x, t0, std::min(max_dt, 1e-3));

  State obs(eq.size());
  const auto record = [&](double t, const State& s) {
    res.trace.t.push_back(t);
    res.trace.eps.push_back(s[0]);
    res.trace.a.push_back(s[1]);
    res.trace.b.push_back(s[2]);
  };
  record(t0, x);
  std::size_t next_obs = 1;
  const auto obs_time = [&](std::size_t k) { return t0 + options.trace_dt * static_cast<double>(k); };

  try {
    while (stepper.current_time() < t1) {
      if (++res.steps > options.max_steps) throw StepFailure("step budget exhausted; system too stiff");
      stepper.do_step(std::ref(eq));
      const double tc = std::min(stepper.current_time(), t1);
      while (obs_time(next_obs) <= tc) {
        stepper.calc_state(obs_time(next_obs), obs);
        record(obs_time(next_obs), obs);
        ++next_obs;
      }
    }
  } catch (const odeint::odeint_error& e) {
    throw StepFailure(std::string("integrator failed: ") + e.what());
  }
  stepper.calc_state(t1, x);
  for (const auto& v : x)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw StepFailure("integrator produced non-finite values");

  res.state = unpack(x, grids.signal.points, grids.idler.points, t1);

  if (options.check_convergence) {
    State dx(eq.size());
    eq(x, dx, t1);
    const std::size_t off = 3 + grids.signal.points;
    double peak_d = 0.0, rate = 0.0;
    for (std::size_t k = off; k < x.size(); ++k) {
      peak_d = std::max(peak_d, std::norm(x[k]));
      rate = std::max(rate, std::abs(2.0 * (std::conj(x[k]) * dx[k]).real()));
    }
    if (peak_d > 0.0 && rate > 1e-4 * peak_d) {
      std::ostringstream os;
      os << "|D|^2 still changing at t_final: relative rate " << rate / peak_d << " > 1e-4";
      throw NotConverged(os.str());
    }
  }
  return res;
}

TrackingReport adiabatic_tracking(const DynamicsResult& result, const DriveParams& drive,
                                  std::optional<double> window) {
  const double w = window.value_or(drive.tau);
  double a_peak = 0.0, b_peak = 0.0, a_dev = 0.0, b_dev = 0.0, b_mag = 0.0;
  for (std::size_t k = 0; k < result.trace.t.size(); ++k) {
    const double t = result.trace.t[k];
    if (std::abs(t) > w) continue;
    const double aa = a_adiabatic(drive, t), ba = b_adiabatic(drive, t);
    a_peak = std::max(a_peak, std::abs(aa));
    b_peak = std::max(b_peak, std::abs(ba));
    a_dev = std::max(a_dev, std::abs(result.trace.a[k] - aa));
    b_dev = std::max(b_dev, std::abs(result.trace.b[k] - ba));
    b_mag = std::max(b_mag, std::abs(std::abs(result.trace.b[k]) - std::abs(ba)));
  }
  TrackingReport r;
  if (a_peak > 0.0) r.a_error = a_dev / a_peak;
  if (b_peak > 0.0) {
    r.b_error = b_dev / b_peak;
    r.b_magnitude_error = b_mag / b_peak;
  }
  return r;
}

DynamicsComparison compare_dynamics(const DriveParams& drive, const ModeGrids& grids,
                                    const DynamicsOptions& options) {
  drive.validate();
  const double need = 8.0 * drive.tau + (drive.gamma3N > 0 ? 10.0 / drive.gamma3N : 0.0);
  if (options.t_final && *options.t_final < need)
    throw InvalidArgument("t_final must be at least 8 tau + 10/gamma3N after the pulse center");

  const DynamicsResult run = integrate_eom(drive, grids, options);
  DynamicsComparison cmp;
  cmp.grids = grids;
  cmp.warnings = run.warnings;
  cmp.tracking = adiabatic_tracking(run, drive);
  const auto ws = grids.signal.values();
  const auto wi = grids.idler.values();
  Eigen::MatrixXd num = run.state.d_amp.cwiseAbs2();
  Eigen::MatrixXd ana(ws.size(), wi.size());
  for (std::size_t s = 0; s < ws.size(); ++s)
    for (std::size_t i = 0; i < wi.size(); ++i) ana(s, i) = std::norm(dsi_analytic(drive, ws[s], wi[i]));

  cmp.max_abs_d = std::sqrt(num.maxCoeff());
  if (num.maxCoeff() == 0.0) {
    cmp.numeric_shape = num;
    cmp.analytic_shape = Eigen::MatrixXd::Zero(ws.size(), wi.size());
    cmp.notes.push_back("no biphoton generated");
    return cmp;
  }
  cmp.peak_ratio = std::sqrt(num.maxCoeff() / ana.maxCoeff());
  cmp.numeric_shape = num / num.maxCoeff();
  cmp.analytic_shape = ana / ana.maxCoeff();
  cmp.shape_deviation = (cmp.numeric_shape - cmp.analytic_shape).cwiseAbs().maxCoeff();
  return cmp;
}

cplx c_quadrature(const AtomicTrace& trace, const DriveParams& drive, double dws, double t, bool adiabatic_b) {
  const cplx decay(drive.gamma3N / 2.0, -drive.lamb_shift);
  cplx sum = 0.0;
  cplx prev = 0.0;
  double prev_t = 0.0;
  bool have_prev = false;
  for (std::size_t k = 0; k < trace.t.size() && trace.t[k] <= t; ++k) {
    const double tk = trace.t[k];
    const cplx b = adiabatic_b ? cplx(b_adiabatic(drive, tk)) : trace.b[k];
    const cplx v = std::polar(1.0, dws * tk) * b * std::exp(-decay * (t - tk));
    if (have_prev) sum += 0.5 * (tk - prev_t) * (v + prev);
    prev = v;
    prev_t = tk;
    have_prev = true;
  }
  return cplx(0.0, drive.coupling) * sum;
}

}  // namespace specode
