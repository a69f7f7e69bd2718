#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "specode/codes.hpp"
#include "specode/common.hpp"
#include "specode/grid.hpp"
#include "specode/schmidt.hpp"
#include "specode/spectra.hpp"

namespace specode {

/// Samples of a complex function on a uniform grid.
struct GridFunction {
  FrequencyGrid grid;
  CVector values;
};

/// (a*b)(w) = int a(ws) b(w - ws) dws under trapezoid weights of a's grid.
/// Both grids must share one spacing (UnderResolvedGrid otherwise). The result
/// lives on [a.min + b.min, a.max + b.max] with na + nb - 1 points.
GridFunction convolution(const FrequencyGrid& grid_a, std::span<const cplx> a, const FrequencyGrid& grid_b,
                         std::span<const cplx> b);
GridFunction convolution(const ModeFunction& signal_mode, const ModeFunction& idler_mode);

/// Ideal uncoded single-pair value |kappa|^2 2 sqrt(pi)/(Ns^2 Ni^2 tau) with continuum norms.
double unit_g2(const PhysicalParams& params);

/// How pairs are grouped into channels, and how the pair index is enumerated.
enum class PairEnumeration {
  kChannelMajor,  ///< n = (r-1) M + m
  kPairMajor,     ///< n = r + (m-1) R
};

struct ChannelMap {
  std::size_t r = 1;
  std::size_t m = 1;
  PairEnumeration enumeration = PairEnumeration::kChannelMajor;

  /// Zero-based pair index of (channel, slot), both zero-based.
  std::size_t pair_index(std::size_t channel, std::size_t slot) const;
};

struct CodingAssignment {
  CVector encode;
  CVector decode;
  std::optional<ChannelMap> channel_map;

  void validate(std::size_t pair_count) const;
};

/// Single channel closed form with lambda_n = 1/N: prefactor/N |sum_n Hd_n He_n|^2.
double g2_ideal_single(const CodingAssignment& assign, double prefactor);

enum class LambdaNormalization {
  kGlobal,      ///< lambda = 1/(R M) over all pairs
  kPerChannel,  ///< the printed 1/M factor
};

/// prefactor/norm sum_r |sum_m He_rm Hd_rm|^2 with norm = R M (global) or M.
/// Throws ChannelShapeMismatch unless every channel carries M entries.
double g2_ideal_multi(std::size_t r, std::size_t m, std::span<const CVector> encodes,
                      std::span<const CVector> decodes, double prefactor,
                      LambdaNormalization normalization = LambdaNormalization::kGlobal);

/// Encode-by-decode table; row = encode codeword index, column = decode index.
/// For multi-channel matrices the index is a = sum_r i_r M^{R-1-r}.
struct G2Matrix {
  Eigen::MatrixXd values;
  std::size_t r_channels = 1;
  std::size_t m_per_channel = 0;

  std::size_t dimension() const { return static_cast<std::size_t>(values.rows()); }
  /// Number of channels whose codeword indices agree for cell (a, b).
  std::size_t matched_channels(std::size_t a, std::size_t b) const;
};

/// Ideal single-channel matrix over all codeword pairs of `code`.
G2Matrix g2_matrix_ideal(const CodeMatrix& code, double prefactor);

/// Ideal multi-channel matrix; every channel uses the same codebook.
G2Matrix g2_matrix_ideal_multi(const CodeMatrix& code, std::size_t r, double prefactor,
                               LambdaNormalization normalization = LambdaNormalization::kGlobal);

/// One distinct value of a multi-channel matrix and how often it occurs.
struct Level {
  double value = 0.0;
  std::size_t matched_channels = 0;
  std::uint64_t multiplicity = 0;
};

/// Distinct levels (merged at relative tolerance) with multiplicities, sorted
/// by matched count then value. Built channel by channel, never materialising
/// the D x D matrix.
struct LevelSummary {
  std::size_t r_channels = 1;
  std::size_t m_per_channel = 0;
  std::vector<Level> levels;

  std::uint64_t total_cells() const;
};

LevelSummary level_summary_ideal_multi(const CodeMatrix& code, std::size_t r, double prefactor,
                                       LambdaNormalization normalization = LambdaNormalization::kGlobal,
                                       double rel_tol = 1e-12);
LevelSummary level_summary(const G2Matrix& m, double rel_tol = 1e-12);

struct ContrastReport {
  double v = 0.0;
  double c_od = 0.0;
  std::optional<double> c_non;
  double g2_max = 0.0;
  double g2_min = 0.0;
  double g2_od = 0.0;
};

/// V from the global extremes, C_od against the largest entry with at most R-1
/// matched channels (off-diagonal for R = 1). For R > 1, C_non compares the
/// lowest fully matched level with the lowest (R-1)-matched level.
/// Throws DegenerateMatrix if every entry is equal.
ContrastReport contrasts(const G2Matrix& m, std::size_t r_channels = 1);
ContrastReport contrasts(const LevelSummary& s);

// ---- numeric path -------------------------------------------------------

enum class SpectralModel {
  /// Each pair is the separable product of its normalised integrated signal
  /// and idler profiles with weight 1/sqrt(N).
  kMarginalModes,
  /// The full sampled joint amplitude, coded and anti-diagonally integrated.
  kFullJsa,
};

enum class EncodeMode {
  /// Encode values applied as piecewise-constant masks on signal bins.
  kSignalBins,
  /// Encode values applied as per-pair weights.
  kPairWeights,
};

/// Piecewise-constant spectral filter on [center - width/2, center + width/2).
struct SpectralBin {
  double center = 0.0;
  double width = 0.0;
  cplx value{1.0, 0.0};
};

struct SpectralMasks {
  std::vector<SpectralBin> signal;
  std::vector<SpectralBin> idler;

  /// Throws BinOverlap if two bins on one axis intersect.
  void validate() const;
};

/// Mask values sampled on a grid; zero outside every bin.
CVector sample_mask(std::span<const SpectralBin> bins, const FrequencyGrid& grid);

struct NumericOptions {
  SpectralModel model = SpectralModel::kMarginalModes;
  EncodeMode encode = EncodeMode::kSignalBins;
  /// Largest grid spacing; 0 picks min(1/(8 tau), G3N/8).
  double max_spacing = 0.0;
};

/// Coded g2 for a single channel. Idler bins of width bin_width sit at each
/// pair's delta_p carrying Hd_n; encode goes on signal bins at each pair's
/// signal center (kSignalBins) or onto the pair weights (kPairWeights).
/// g2 = unit_g2 * int|F|^2 / int|F_ref|^2 with F_ref the uncoded single pair at
/// the origin seen through its own signal and idler bins.
/// Throws BinOverlap, UnderResolvedGrid.
double g2_numeric(const MultiplexedSpectrum& spec, const CodingAssignment& assign, double bin_width,
                  const NumericOptions& options = {});

/// General form: pair weights are spec weights times `pair_encode`, filters are
/// explicit masks. An empty signal mask list means no signal filter.
double g2_numeric_masked(const MultiplexedSpectrum& spec, std::span<const cplx> pair_encode,
                         const SpectralMasks& masks, double bin_width, const NumericOptions& options = {});

/// Coded two-photon amplitude F(w) for the marginal-mode model.
GridFunction coded_convolution(const MultiplexedSpectrum& spec, std::span<const cplx> pair_encode,
                               const SpectralMasks& masks, double spacing);

/// Coded joint amplitude: E(ws) S(ws) sum_n He_n f_n(ws, wi) D(wi) sampled on the grids.
JointAmplitude coded_amplitude(const MultiplexedSpectrum& spec, std::span<const cplx> pair_encode,
                               const SpectralMasks& masks, const FrequencyGrid& grid_s,
                               const FrequencyGrid& grid_i);

/// F(w) = int f(ws, w - ws) dws by direct summation along anti-diagonals.
GridFunction antidiagonal_integral(const JointAmplitude& amplitude);

/// F(w) = norm sum_n sqrt(lambda_n) (psi_n * phi_n)(w) over the kept modes.
GridFunction schmidt_convolution_sum(const SchmidtDecomposition& d);

/// Builds the single-channel masks used by g2_numeric.
SpectralMasks single_channel_masks(const MultiplexedSpectrum& spec, const CodingAssignment& assign,
                                   double bin_width, EncodeMode encode);

}  // namespace specode
