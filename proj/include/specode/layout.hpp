#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "specode/common.hpp"
#include "specode/correlation.hpp"
#include "specode/spectra.hpp"

namespace specode {

/// A pair placed on signal bin k and idler bin k'.
struct Cell {
  std::size_t signal_bin = 0;
  std::size_t idler_bin = 0;
  bool operator==(const Cell&) const = default;
};

/// R channels of M pairs on a signal-bin x idler-bin grid.
///
/// Bin centers: idler k' at (k' - (n_i - 1)/2) delta, signal k at
/// -(k - (n_s - 1)/2) delta, so a pair's idler shift is its idler center and its
/// joint shift is -(signal center + idler center). A channel lives on one
/// diagonal d = k - k', which fixes one joint shift per channel.
struct ChannelLayout {
  std::size_t r = 1;
  std::size_t m = 2;
  double bin_width = 100.0;
  std::size_t signal_bins = 0;
  std::size_t idler_bins = 0;
  /// placement[channel][slot]
  std::vector<std::vector<Cell>> placement;
  PairEnumeration enumeration = PairEnumeration::kChannelMajor;

  ChannelMap channel_map() const { return {r, m, enumeration}; }
  double signal_center(std::size_t k) const;
  double idler_center(std::size_t kp) const;
  /// Joint shift of a channel, taken from its first pair.
  double channel_shift(std::size_t channel) const;
  std::vector<double> delta_r() const;
};

/// Dense staircase placement: a single monotone rook path whose diagonal
/// sequence repeats the block (2j, 2j+1) M times for j = 0 .. R/2 - 1, so
/// every bin is shared by at most two pairs and the bin graph is one tree
/// (dof = 1, RM + 1 bins). R = 1 gives M isolated cells on one diagonal; for
/// odd R > 1 the last channel hangs one pair off the path and keeps the rest
/// on fresh bins. Throws OddM.
ChannelLayout staircase(std::size_t r, std::size_t m, double bin_width = 100.0);

/// Builds a layout from explicit cells; bin counts are inferred.
ChannelLayout make_layout(std::size_t r, std::size_t m, std::vector<std::vector<Cell>> placement,
                          double bin_width = 100.0);

struct ComponentReport {
  std::vector<std::string> nodes;
  std::size_t edges = 0;
  long dof = 0;
};

struct ValidationReport {
  bool valid = false;
  long dof = 0;
  std::vector<ComponentReport> components;
  /// Offending cycle as node labels ("s3", "i1", ...), closing back to the first.
  std::vector<std::string> cycle;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
};

/// Non-throwing analysis of the placement graph. `tau` > 0 enables the
/// channel-spacing warning (spacing below 20/tau).
ValidationReport inspect(const ChannelLayout& layout, double tau = 0.0);

/// As inspect, but throws CycleDetected on a cycle and InvalidArgument on any
/// other violation.
ValidationReport validate(const ChannelLayout& layout, double tau = 0.0);

/// M^R; throws Overflow beyond 64 bits.
std::uint64_t dimension(const ChannelLayout& layout);

struct DecoderSettings {
  CVector signal;  ///< one value per signal bin
  CVector idler;   ///< one value per idler bin
};

/// Finds bin decoder values whose products reproduce every requested decode
/// entry. Each component is gauge-fixed by setting one node to 1.
/// Throws CycleDetected, Infeasible (zero target off a leaf edge),
/// ChannelShapeMismatch.
DecoderSettings factor_decode(const ChannelLayout& layout, const std::vector<CVector>& per_channel_decodes);

/// Per-channel products H_sk H_ik' for every placed pair.
std::vector<CVector> effective_decode(const ChannelLayout& layout, const DecoderSettings& settings);

/// Pairs in the layout's enumeration order, with shifts from the bin centers.
MultiplexedSpectrum to_spectrum(const ChannelLayout& layout, const PhysicalParams& params);

/// Signal and idler decode masks for the used bins.
SpectralMasks decode_masks(const ChannelLayout& layout, const DecoderSettings& settings);

/// Numeric multi-channel g2: per-pair encode weights, factorised bin decoders.
double g2_numeric_layout(const ChannelLayout& layout, const PhysicalParams& params,
                         const std::vector<CVector>& per_channel_encodes,
                         const std::vector<CVector>& per_channel_decodes, const NumericOptions& options = {});

}  // namespace specode
