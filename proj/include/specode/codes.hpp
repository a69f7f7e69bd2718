#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "specode/common.hpp"

namespace specode {

/// Square quasi-orthogonal code; codewords are columns.
using CodeMatrix = Eigen::MatrixXcd;

/// [[c1, c2], [-conj(c2), conj(c1)]]
CodeMatrix alamouti2(cplx c1, cplx c2);

/// Recursive Alamouti block code:
/// C(c) = [[C(lo), C(hi)], [-conj(C(hi)), conj(C(lo))]] with lo/hi the two halves of c.
/// Throws BadLength if c.size() != n and NotPowerOfTwo if n is not a power of two.
CodeMatrix alamouti_n(std::span<const cplx> c, std::size_t n);

/// gram(a, b) = sum_k conj(C(k, a)) C(k, b).
Eigen::MatrixXcd gram(const CodeMatrix& code);

struct CodeVectorSpec {
  enum class Kind { kLinearH, kGeometric };
  Kind kind = Kind::kLinearH;
  std::size_t n = 4;
  double h = 1.0;
  cplx a{1.0, 0.0};
  cplx r{1.0, 0.0};

  static CodeVectorSpec linear(std::size_t n, double h) { return {Kind::kLinearH, n, h, 1.0, 1.0}; }
  static CodeVectorSpec geometric(std::size_t n, cplx a, cplx r) { return {Kind::kGeometric, n, 1.0, a, r}; }
};

/// Linear-h: n equally spaced reals from min(1,h) to max(1,h), so c(1/h) = c(h)/h.
/// Geometric: c_l = a r^{l-1}.
CVector make_c(const CodeVectorSpec& spec);

bool is_power_of_two(std::size_t n);

CVector codeword(const CodeMatrix& code, std::size_t column);

/// Matched decoder for an encode codeword. The convention (entrywise complex
/// conjugate) lives only here so it can be swapped in one place.
CVector matched_decode(std::span<const cplx> encode);

}  // namespace specode
