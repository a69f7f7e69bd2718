#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specode/common.hpp"
#include "specode/grid.hpp"
#include "specode/spectra.hpp"

namespace specode {

/// Discrete Schmidt decomposition of a sampled joint amplitude.
///
/// f(ws, wi) = norm * sum_n sqrt(lambda_n) psi_n(ws) phi_n(wi), with psi and
/// phi orthonormal under trapezoid quadrature. `lambdas` holds the full
/// spectrum (so it sums to one); only the first n_modes mode pairs are kept.
struct SchmidtDecomposition {
  std::vector<double> lambdas;
  std::vector<CVector> signal_modes;
  std::vector<CVector> idler_modes;
  FrequencyGrid grid_s;
  FrequencyGrid grid_i;
  double norm = 0.0;
  std::vector<std::string> warnings;

  std::size_t mode_count() const { return signal_modes.size(); }
};

/// Throws UnderResolvedGrid when the spacing exceeds min(1/tau, G3N)/2.
SchmidtDecomposition decompose(const MultiplexedSpectrum& spec, const FrequencyGrid& grid_s,
                               const FrequencyGrid& grid_i, std::size_t n_modes = 0);

/// Decomposes an already sampled amplitude. n_modes = 0 selects min(64, rank).
SchmidtDecomposition decompose(const JointAmplitude& amplitude, std::size_t n_modes = 0);

double entropy(std::span<const double> lambdas);
double entropy(const SchmidtDecomposition& d);

/// norm * sum over the first n_modes pairs (all kept pairs when 0).
Eigen::MatrixXcd reconstruct(const SchmidtDecomposition& d, std::size_t n_modes = 0);

/// Quadrature weighting used by decompose: sqrt(w_s) f sqrt(w_i), and its inverse.
Eigen::MatrixXcd weight_matrix(const JointAmplitude& amplitude);
Eigen::MatrixXcd unweight_matrix(const FrequencyGrid& grid_s, const FrequencyGrid& grid_i,
                                 const Eigen::MatrixXcd& weighted);

}  // namespace specode
