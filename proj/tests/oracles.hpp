#pragma once

// Independent reference computations for the unit and acceptance tests. These
// deliberately avoid the library's FFT, SVD and quadrature helpers.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline std::vector<double> trap(std::size_t n, double h) {
  std::vector<double> w(n, h);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

// (a*b)[k] = sum_i w_i a_i b_{k-i}, O(n^2).
inline std::vector<cplx> direct_convolution(const std::vector<cplx>& a, const std::vector<cplx>& b, double h) {
  const auto w = trap(a.size(), h);
  std::vector<cplx> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += w[i] * a[i] * b[j];
  return out;
}

inline double sq_integral(const std::vector<cplx>& f, double h) {
  const auto w = trap(f.size(), h);
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += w[k] * std::norm(f[k]);
  return s;
}

// Simpson rule on [a, b] with n (even) intervals.
template <class F>
auto simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  auto s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * (h / 3.0);
}

}  // namespace oracle
