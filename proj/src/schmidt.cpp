#include "specode/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace specode {

namespace {

std::vector<double> sqrt_weights(const FrequencyGrid& g) {
  auto w = trapezoid_weights(g);
  for (auto& v : w) v = std::sqrt(v);
  return w;
}

// Rotates a mode so its largest-magnitude sample is real positive; returns the
// applied phase factor.
cplx fix_phase(CVector& mode) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < mode.size(); ++k)
    if (std::abs(mode[k]) > std::abs(mode[best])) best = k;
  if (std::abs(mode[best]) == 0.0) return 1.0;
  const cplx phase = std::conj(mode[best]) / std::abs(mode[best]);
  for (auto& v : mode) v *= phase;
  mode[best] = std::abs(mode[best]);  // drop rounding residue in the imaginary part
  return phase;
}

}  // namespace

Eigen::MatrixXcd weight_matrix(const JointAmplitude& amplitude) {
  const auto ws = sqrt_weights(amplitude.grid_s);
  const auto wi = sqrt_weights(amplitude.grid_i);
  Eigen::MatrixXcd m = amplitude.values;
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b) m(a, b) *= ws[a] * wi[b];
  return m;
}

Eigen::MatrixXcd unweight_matrix(const FrequencyGrid& grid_s, const FrequencyGrid& grid_i,
                                 const Eigen::MatrixXcd& weighted) {
  const auto ws = sqrt_weights(grid_s);
  const auto wi = sqrt_weights(grid_i);
  Eigen::MatrixXcd m = weighted;
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b) m(a, b) /= ws[a] * wi[b];
  return m;
}

SchmidtDecomposition decompose(const MultiplexedSpectrum& spec, const FrequencyGrid& grid_s,
                               const FrequencyGrid& grid_i, std::size_t n_modes) {
  spec.validate();
  const double limit = std::min(1.0 / spec.params.tau, spec.params.gamma3N) / 2.0;
  for (const auto* g : {&grid_s, &grid_i}) {
    g->validate();
    if (g->spacing() > limit) {
      std::ostringstream os;
      os << "grid spacing " << g->spacing() << " exceeds min(1/tau, gamma3N)/2 = " << limit;
      throw UnderResolvedGrid(os.str());
    }
  }
  return decompose(sample_jsa(spec, grid_s, grid_i), n_modes);
}

SchmidtDecomposition decompose(const JointAmplitude& amplitude, std::size_t n_modes) {
  if (amplitude.values.rows() != static_cast<Eigen::Index>(amplitude.grid_s.points) ||
      amplitude.values.cols() != static_cast<Eigen::Index>(amplitude.grid_i.points))
    throw BadLength("amplitude shape does not match its grids");

  const Eigen::MatrixXcd weighted = weight_matrix(amplitude);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(weighted, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sigma = svd.singularValues();
  const double total = sigma.squaredNorm();
  if (!(total > 0.0)) throw InvalidArgument("cannot decompose an all-zero amplitude");

  SchmidtDecomposition d;
  d.grid_s = amplitude.grid_s;
  d.grid_i = amplitude.grid_i;
  d.norm = std::sqrt(total);
  d.lambdas.resize(sigma.size());
  for (Eigen::Index n = 0; n < sigma.size(); ++n) d.lambdas[n] = sigma[n] * sigma[n] / total;

  std::size_t rank = 0;
  for (double l : d.lambdas)
    if (l > 1e-15) ++rank;
  if (n_modes == 0) n_modes = std::min<std::size_t>(64, std::max<std::size_t>(rank, 1));
  n_modes = std::min<std::size_t>(n_modes, sigma.size());

  const auto ws = sqrt_weights(amplitude.grid_s);
  const auto wi = sqrt_weights(amplitude.grid_i);
  const auto& u = svd.matrixU();
  const auto& v = svd.matrixV();
  for (std::size_t n = 0; n < n_modes; ++n) {
    CVector psi(ws.size()), phi(wi.size());
    for (std::size_t a = 0; a < ws.size(); ++a) psi[a] = u(a, n) / ws[a];
    for (std::size_t b = 0; b < wi.size(); ++b) phi[b] = std::conj(v(b, n)) / wi[b];
    const cplx phase = fix_phase(psi);
    for (auto& x : phi) x /= phase;
    d.signal_modes.push_back(std::move(psi));
    d.idler_modes.push_back(std::move(phi));
  }

  for (std::size_t n = 0; n + 1 < n_modes; ++n) {
    if (d.lambdas[n + 1] > 1e-12 && d.lambdas[n] - d.lambdas[n + 1] < 1e-10) {
      std::ostringstream os;
      os << "DegenerateSpectrum: lambda_" << n + 1 << " and lambda_" << n + 2
         << " differ by less than 1e-10; modes within the subspace are arbitrary";
      d.warnings.push_back(os.str());
    }
  }
  return d;
}

double entropy(std::span<const double> lambdas) {
  double s = 0.0;
  for (double l : lambdas)
    if (l > 0.0) s -= l * std::log(l);
  return s;
}

double entropy(const SchmidtDecomposition& d) { return entropy(d.lambdas); }

Eigen::MatrixXcd reconstruct(const SchmidtDecomposition& d, std::size_t n_modes) {
  if (n_modes == 0 || n_modes > d.mode_count()) n_modes = d.mode_count();
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(d.grid_s.points, d.grid_i.points);
  for (std::size_t n = 0; n < n_modes; ++n) {
    const double amp = d.norm * std::sqrt(d.lambdas[n]);
    for (std::size_t a = 0; a < d.grid_s.points; ++a) {
      const cplx sa = amp * d.signal_modes[n][a];
      for (std::size_t b = 0; b < d.grid_i.points; ++b) f(a, b) += sa * d.idler_modes[n][b];
    }
  }
  return f;
}

}  // namespace specode
