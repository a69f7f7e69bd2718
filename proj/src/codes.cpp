#include "specode/codes.hpp"

#include <cmath>
#include <string>

namespace specode {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

CodeMatrix alamouti2(cplx c1, cplx c2) {
  CodeMatrix m(2, 2);
  m << c1, c2, -std::conj(c2), std::conj(c1);
  return m;
}

CodeMatrix alamouti_n(std::span<const cplx> c, std::size_t n) {
  if (c.size() != n) throw BadLength("code vector length " + std::to_string(c.size()) + " != n = " + std::to_string(n));
  if (!is_power_of_two(n)) throw NotPowerOfTwo("code size must be a power of two, got " + std::to_string(n));
  if (n == 1) {
    CodeMatrix m(1, 1);
    m(0, 0) = c[0];
    return m;
  }
  const std::size_t h = n / 2;
  const CodeMatrix lo = alamouti_n(c.subspan(0, h), h);
  const CodeMatrix hi = alamouti_n(c.subspan(h, h), h);
  CodeMatrix m(n, n);
  m.topLeftCorner(h, h) = lo;
  m.topRightCorner(h, h) = hi;
  m.bottomLeftCorner(h, h) = -hi.conjugate();
  m.bottomRightCorner(h, h) = lo.conjugate();
  return m;
}

Eigen::MatrixXcd gram(const CodeMatrix& code) { return code.adjoint() * code; }

CVector make_c(const CodeVectorSpec& spec) {
  if (spec.n == 0) throw InvalidArgument("code vector length must be positive");
  CVector c(spec.n);
  switch (spec.kind) {
    case CodeVectorSpec::Kind::kLinearH: {
      if (!(spec.h > 0.0) || !std::isfinite(spec.h)) throw InvalidArgument("h must be a positive finite real");
      const double lo = std::min(1.0, spec.h);
      const double span = std::abs(spec.h - 1.0);
      for (std::size_t l = 0; l < spec.n; ++l) {
        const double frac = spec.n == 1 ? 0.0 : static_cast<double>(l) / static_cast<double>(spec.n - 1);
        c[l] = lo + span * frac;
      }
      break;
    }
    case CodeVectorSpec::Kind::kGeometric: {
      cplx v = spec.a;
      for (std::size_t l = 0; l < spec.n; ++l) {
        c[l] = v;
        v *= spec.r;
      }
      break;
    }
  }
  return c;
}

CVector codeword(const CodeMatrix& code, std::size_t column) {
  if (column >= static_cast<std::size_t>(code.cols())) throw InvalidArgument("codeword index out of range");
  CVector w(code.rows());
  for (Eigen::Index k = 0; k < code.rows(); ++k) w[k] = code(k, column);
  return w;
}

CVector matched_decode(std::span<const cplx> encode) {
  CVector d(encode.size());
  for (std::size_t k = 0; k < encode.size(); ++k) d[k] = std::conj(encode[k]);
  return d;
}

}  // namespace specode
