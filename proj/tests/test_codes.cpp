#include <gtest/gtest.h>

#include <random>

#include "specode/codes.hpp"

using namespace specode;

namespace {

// Plain triple loop, independent of Eigen's adjoint product.
Eigen::MatrixXcd gram_loop(const CodeMatrix& c) {
  Eigen::MatrixXcd g(c.cols(), c.cols());
  for (Eigen::Index a = 0; a < c.cols(); ++a)
    for (Eigen::Index b = 0; b < c.cols(); ++b) {
      cplx s = 0.0;
      for (Eigen::Index k = 0; k < c.rows(); ++k) s += std::conj(c(k, a)) * c(k, b);
      g(a, b) = s;
    }
  return g;
}

CVector random_c(std::mt19937& rng, std::size_t n) {
  std::normal_distribution<double> d;
  CVector c(n);
  for (auto& v : c) v = cplx(d(rng), d(rng));
  return c;
}

}  // namespace

TEST(Codes, Alamouti2Examples) {
  const CodeMatrix a = alamouti2(1.0, 1.0);
  EXPECT_EQ(a(0, 0), cplx(1)); EXPECT_EQ(a(0, 1), cplx(1));
  EXPECT_EQ(a(1, 0), cplx(-1)); EXPECT_EQ(a(1, 1), cplx(1));
  const CodeMatrix b = alamouti2(1.0, cplx(0, 1));
  EXPECT_EQ(b(0, 1), cplx(0, 1));
  EXPECT_EQ(b(1, 0), cplx(0, 1));
  EXPECT_EQ(b(1, 1), cplx(1));
}

TEST(Codes, Alamouti2ColumnsAlwaysOrthogonal) {
  std::mt19937 rng(7);
  for (int k = 0; k < 200; ++k) {
    const CVector c = random_c(rng, 2);
    const auto g = gram_loop(alamouti2(c[0], c[1]));
    EXPECT_LT(std::abs(g(0, 1)), 1e-12 * std::abs(g(0, 0)));
  }
}

TEST(Codes, FourByFourMatchesPrintedMatrix) {
  const CVector c{cplx(1, 2), cplx(3, -1), cplx(-2, 0.5), cplx(0.25, 4)};
  const CodeMatrix m = alamouti_n(c, 4);
  const auto C = [&](int l) { return c[l - 1]; };
  const auto S = [&](int l) { return std::conj(c[l - 1]); };
  const cplx expected[4][4] = {{C(1), C(2), C(3), C(4)},
                               {-S(2), S(1), -S(4), S(3)},
                               {-S(3), -S(4), S(1), S(2)},
                               {C(4), -C(3), -C(2), C(1)}};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) EXPECT_EQ(m(a, b), expected[a][b]) << a << "," << b;
}

TEST(Codes, TwoByTwoRecursionBaseCase) {
  const CVector c{cplx(0.3, -1), cplx(2, 0.7)};
  EXPECT_TRUE(alamouti_n(c, 2).isApprox(alamouti2(c[0], c[1]), 0.0));
}

TEST(Codes, HadamardReduction) {
  for (std::size_t n : {2u, 4u, 8u, 16u, 32u}) {
    const CodeMatrix m = alamouti_n(CVector(n, 1.0), n);
    const auto g = gram_loop(m);
    EXPECT_LT((g - static_cast<double>(n) * Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(gram(m).isApprox(g, 1e-14));
  }
}

TEST(Codes, GeometricVectorsGiveOrthogonalFourCodes) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const auto c = make_c(CodeVectorSpec::geometric(4, u(rng), u(rng)));
    const auto g = gram_loop(alamouti_n(c, 4));
    const double scale = g.cwiseAbs().maxCoeff();
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (a != b) EXPECT_LT(std::abs(g(a, b)), 1e-12 * scale);
  }
}

TEST(Codes, GenericFourCodeOrthogonalityPattern) {
  std::mt19937 rng(3);
  for (int k = 0; k < 50; ++k) {
    const CVector c = random_c(rng, 4);
    const auto g = gram_loop(alamouti_n(c, 4));
    const double scale = g.cwiseAbs().maxCoeff();
    for (auto [a, b] : {std::pair{0, 1}, {0, 2}, {1, 3}, {2, 3}}) {
      EXPECT_LT(std::abs(g(a, b)), 1e-12 * scale);
      EXPECT_LT(std::abs(g(b, a)), 1e-12 * scale);
    }
    EXPECT_GT(std::abs(g(0, 3)), 1e-6 * scale);
    EXPECT_GT(std::abs(g(1, 2)), 1e-6 * scale);
  }
}

TEST(Codes, LinearHCornerEntry) {
  for (double h : {0.5, 1.5, 2.0}) {
    const auto c = make_c(CodeVectorSpec::linear(4, h));
    const auto g = gram(alamouti_n(c, 4));
    const double expected = 2.0 * (c[0].real() * c[3].real() - c[1].real() * c[2].real());
    EXPECT_NEAR(g(0, 3).real(), expected, 1e-12);
    EXPECT_NE(expected, 0.0);
  }
}

TEST(Codes, PatternInvariantUnderScaling) {
  std::mt19937 rng(5);
  const CVector c = random_c(rng, 4);
  CVector sc = c;
  const cplx s(0.0, -3.0);
  for (auto& v : sc) v *= s;
  const auto g = gram(alamouti_n(c, 4)), gs = gram(alamouti_n(sc, 4));
  EXPECT_TRUE(gs.isApprox(std::norm(s) * g, 1e-12));
}

TEST(Codes, EveryColumnCarriesEachMagnitudeOnce) {
  std::mt19937 rng(9);
  for (std::size_t n : {4u, 8u, 16u}) {
    const CVector c = random_c(rng, n);
    const CodeMatrix m = alamouti_n(c, n);
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      std::vector<int> hits(n, 0);
      for (Eigen::Index k = 0; k < m.rows(); ++k)
        for (std::size_t l = 0; l < n; ++l)
          if (std::abs(std::abs(m(k, col)) - std::abs(c[l])) < 1e-14) ++hits[l];
      for (int h : hits) EXPECT_EQ(h, 1);
    }
  }
}

TEST(Codes, LengthAndSizeErrors) {
  EXPECT_THROW(alamouti_n(CVector(3, 1.0), 4), BadLength);
  EXPECT_THROW(alamouti_n(CVector(6, 1.0), 6), NotPowerOfTwo);
  EXPECT_THROW(alamouti_n(CVector(3, 1.0), 3), NotPowerOfTwo);
}

TEST(Codes, MakeCExamples) {
  const auto c4 = make_c(CodeVectorSpec::linear(4, 2.0));
  const double expected[] = {1.0, 4.0 / 3.0, 5.0 / 3.0, 2.0};
  for (int l = 0; l < 4; ++l) EXPECT_NEAR(c4[l].real(), expected[l], 1e-15);
  const auto c2 = make_c(CodeVectorSpec::linear(2, 2.0));
  EXPECT_EQ(c2[0], cplx(1.0));
  EXPECT_EQ(c2[1], cplx(2.0));
  for (const auto& v : make_c(CodeVectorSpec::linear(16, 1.0))) EXPECT_EQ(v, cplx(1.0));
  const auto g = make_c(CodeVectorSpec::geometric(3, cplx(2, 0), cplx(0, 1)));
  EXPECT_EQ(g[2], cplx(-2, 0));
}

TEST(Codes, ReciprocalHIsARescaling) {
  for (double h : {1.25, 1.5, 2.0, 3.0}) {
    const auto a = make_c(CodeVectorSpec::linear(8, h));
    const auto b = make_c(CodeVectorSpec::linear(8, 1.0 / h));
    for (std::size_t l = 0; l < 8; ++l) EXPECT_NEAR(std::abs(b[l] - a[l] / h), 0.0, 1e-15);
    EXPECT_NEAR(b.front().real(), 1.0 / h, 1e-15);
    EXPECT_NEAR(b.back().real(), 1.0, 1e-15);
  }
}

TEST(Codes, MatchedDecodeConjugates) {
  const CVector e{cplx(1, 2), cplx(-3, 0.5)};
  const CVector d = matched_decode(e);
  EXPECT_EQ(d[0], cplx(1, -2));
  EXPECT_EQ(d[1], cplx(-3, -0.5));
  cplx s = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) s += d[k] * e[k];
  EXPECT_EQ(s.imag(), 0.0);
}
