#include <gtest/gtest.h>

#include <cmath>

#include "specode/schmidt.hpp"

using namespace specode;

namespace {

PhysicalParams base(double tau) {
  PhysicalParams p;
  p.gamma3N = 5.0;
  p.tau = tau;
  return p;
}

JointAmplitude separable(std::size_t n) {
  const FrequencyGrid g{-20.0, 20.0, n};
  JointAmplitude j{g, g, Eigen::MatrixXcd(n, n)};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const double ws = g.at(a), wi = g.at(b);
      j.values(a, b) = std::exp(cplx(-ws * ws / 8.0, 0.3 * ws)) / cplx(1.5, -(wi - 2.0));
    }
  return j;
}

double frob(const Eigen::MatrixXcd& m) { return m.norm(); }

}  // namespace

TEST(Schmidt, SeparableInputIsRankOne) {
  const JointAmplitude j = separable(256);
  const SchmidtDecomposition d = decompose(j);
  EXPECT_NEAR(d.lambdas[0], 1.0, 1e-6);
  EXPECT_LT(entropy(d), 1e-4);
  EXPECT_LT(frob(reconstruct(d, 1) - j.values) / frob(j.values), 1e-6);
}

TEST(Schmidt, SinglePairIsEntangled) {
  const FrequencyGrid g{-250.0, 250.0, 512};
  const SchmidtDecomposition d = decompose(MultiplexedSpectrum{base(0.25), {PairShift{}}}, g, g, 16);
  EXPECT_LT(d.lambdas[0], 1.0);
  EXPECT_GT(entropy(d), 0.0);
  // Regression baseline from an independent numpy SVD of the same weighted matrix.
  EXPECT_NEAR(d.lambdas[0], 0.8026251512181556, 1e-9);
  EXPECT_NEAR(entropy(d), 0.8726173364847383, 1e-8);
}

TEST(Schmidt, SpectrumInvariants) {
  const FrequencyGrid gs{-300.0, 300.0, 700}, gi{-300.0, 300.0, 640};
  MultiplexedSpectrum spec{base(0.5), {{1.0, -100.0, 0.0}, {cplx(0.5, 0.5), 100.0, 5.0}}};
  const SchmidtDecomposition d = decompose(spec, gs, gi, 12);
  double sum = 0.0;
  for (std::size_t n = 0; n < d.lambdas.size(); ++n) {
    sum += d.lambdas[n];
    EXPECT_GE(d.lambdas[n], 0.0);
    if (n) EXPECT_LE(d.lambdas[n], d.lambdas[n - 1]);
  }
  EXPECT_NEAR(sum, 1.0, 1e-8);
  ASSERT_EQ(d.mode_count(), 12u);
  for (std::size_t m = 0; m < 12; ++m)
    for (std::size_t n = 0; n < 12; ++n) {
      const double delta = m == n ? 1.0 : 0.0;
      EXPECT_NEAR(std::abs(inner_product(gs, d.signal_modes[m], d.signal_modes[n]) - delta), 0.0, 1e-6);
      EXPECT_NEAR(std::abs(inner_product(gi, d.idler_modes[m], d.idler_modes[n]) - delta), 0.0, 1e-6);
    }
}

TEST(Schmidt, PhaseGauge) {
  const FrequencyGrid g{-200.0, 200.0, 480};
  const SchmidtDecomposition d = decompose(MultiplexedSpectrum{base(0.5), {{cplx(0, 1), 10.0, 3.0}}}, g, g, 6);
  for (const auto& psi : d.signal_modes) {
    std::size_t arg = 0;
    for (std::size_t k = 0; k < psi.size(); ++k)
      if (std::abs(psi[k]) > std::abs(psi[arg])) arg = k;
    EXPECT_GT(psi[arg].real(), 0.0);
    EXPECT_EQ(psi[arg].imag(), 0.0);
  }
  // Two runs on the same input are identical.
  const SchmidtDecomposition e = decompose(MultiplexedSpectrum{base(0.5), {{cplx(0, 1), 10.0, 3.0}}}, g, g, 6);
  for (std::size_t n = 0; n < 6; ++n) EXPECT_EQ(d.signal_modes[n], e.signal_modes[n]);
}

TEST(Schmidt, WeightRoundTrip) {
  const JointAmplitude j = separable(64);
  const Eigen::MatrixXcd back = unweight_matrix(j.grid_s, j.grid_i, weight_matrix(j));
  EXPECT_LT((back - j.values).cwiseAbs().maxCoeff() / j.values.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Schmidt, ReconstructionErrorFallsWithModes) {
  const FrequencyGrid g{-200.0, 200.0, 256};
  MultiplexedSpectrum spec{base(0.5), {PairShift{}}};
  const JointAmplitude j = sample_jsa(spec, g, g);
  const SchmidtDecomposition d = decompose(j, 256);
  double prev = 1e300;
  for (std::size_t n : {1u, 2u, 4u, 8u, 16u, 32u, 64u, 256u}) {
    const double err = frob(reconstruct(d, n) - j.values);
    EXPECT_LE(err, prev * (1.0 + 1e-12));
    prev = err;
  }
  EXPECT_LT(prev / frob(j.values), 1e-10);
}

TEST(Schmidt, SeparatedPairsRepeatTheSinglePairSpectrum) {
  const FrequencyGrid g{-500.0, 500.0, 1024};
  const auto p = base(0.5);
  const SchmidtDecomposition one = decompose(MultiplexedSpectrum{p, {PairShift{}}}, g, g, 8);
  MultiplexedSpectrum four{p, {}};
  for (double k : {-1.5, -0.5, 0.5, 1.5}) four.pairs.push_back({1.0, 200.0 * k, 0.0});
  const SchmidtDecomposition d = decompose(four, g, g, 8);
  // The leading four are nearly degenerate and dominate the rest. Lorentzian
  // tails of neighbouring pairs still overlap at the percent level.
  EXPECT_LT(d.lambdas[0] - d.lambdas[3], 1e-2 * d.lambdas[0]);
  EXPECT_GT(d.lambdas[3], 2.0 * d.lambdas[4]);
  // Keeping N modes captures N times the single-pair leading weight.
  const double captured = d.lambdas[0] + d.lambdas[1] + d.lambdas[2] + d.lambdas[3];
  EXPECT_NEAR(captured, one.lambdas[0], 1.5e-2);
  const JointAmplitude j = sample_jsa(four, g, g);
  // Under quadrature weights the truncation residual is exactly the dropped weight.
  const JointAmplitude diff{g, g, reconstruct(d, 4) - j.values};
  const double resid = frob(weight_matrix(diff)) / frob(weight_matrix(j));
  EXPECT_NEAR(resid * resid, 1.0 - captured, 1e-8);
}

TEST(Schmidt, EntropyExamples) {
  const std::vector<double> pure{1.0, 0.0, 0.0};
  EXPECT_EQ(entropy(std::span<const double>(pure)), 0.0);
  const std::vector<double> flat(4, 0.25);
  EXPECT_NEAR(entropy(std::span<const double>(flat)), std::log(4.0), 1e-15);
}

TEST(Schmidt, RejectsCoarseGrid) {
  const FrequencyGrid g{-250.0, 250.0, 100};
  EXPECT_THROW(decompose(MultiplexedSpectrum{base(0.5), {PairShift{}}}, g, g), UnderResolvedGrid);
}

TEST(Schmidt, DefaultModeCountCappedAt64) {
  const FrequencyGrid g{-250.0, 250.0, 300};
  const SchmidtDecomposition d = decompose(MultiplexedSpectrum{base(0.25), {PairShift{}}}, g, g);
  EXPECT_EQ(d.mode_count(), 64u);
  EXPECT_EQ(d.lambdas.size(), 300u);
}
