#include "specode/io.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#ifndef SPECODE_VERSION
#define SPECODE_VERSION "0.0.0"
#endif

namespace specode {

const char* version() { return SPECODE_VERSION; }

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv_header(std::ostream& out, const OutputStamp& stamp, const std::vector<std::string>& columns) {
  out << "# specode " << stamp.version << " config_hash=" << stamp.config_hash << '\n';
  for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << columns[k];
  out << '\n';
}

void write_matrix_csv(std::ostream& out, const OutputStamp& stamp, const Eigen::MatrixXd& m) {
  write_csv_header(out, stamp, {"encode", "decode", "value"});
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b) out << a << ',' << b << ',' << format_number(m(a, b)) << '\n';
}

std::string heatmap_svg(const Eigen::MatrixXd& m, const std::string& title) {
  const int cell = std::max(2, 400 / static_cast<int>(std::max<Eigen::Index>(m.rows(), 1)));
  const int w = cell * static_cast<int>(m.cols()), h = cell * static_cast<int>(m.rows());
  const double mx = m.size() ? m.maxCoeff() : 0.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h + 20 << "\">\n";
  os << "<text x=\"2\" y=\"14\" font-size=\"12\">" << title << "</text>\n";
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = 0; b < m.cols(); ++b) {
      const int level = mx > 0 ? static_cast<int>(255.0 * (1.0 - m(a, b) / mx)) : 255;
      os << "<rect x=\"" << b * cell << "\" y=\"" << 20 + a * cell << "\" width=\"" << cell << "\" height=\"" << cell
         << "\" fill=\"rgb(" << level << ',' << level << ',' << level << ")\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace specode
