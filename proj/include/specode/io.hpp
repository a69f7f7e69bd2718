#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace specode {

/// Library version string.
const char* version();

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

/// Fixed 12-significant-digit rendering used for every CSV number.
std::string format_number(double v);

/// Provenance stamped into every output file.
struct OutputStamp {
  std::string config_hash;
  std::string version;
};

/// "# specode <version> config_hash=<hash>" followed by the column line.
void write_csv_header(std::ostream& out, const OutputStamp& stamp, const std::vector<std::string>& columns);

/// Matrix as CSV with columns "encode,decode,value" (row-major order).
void write_matrix_csv(std::ostream& out, const OutputStamp& stamp, const Eigen::MatrixXd& m);

/// Minimal grayscale heatmap rendering of a nonnegative matrix.
std::string heatmap_svg(const Eigen::MatrixXd& m, const std::string& title);

}  // namespace specode
