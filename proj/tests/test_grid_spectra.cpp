#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "specode/grid.hpp"
#include "specode/spectra.hpp"

using namespace specode;

namespace {

PhysicalParams base(double tau = 0.5) {
  PhysicalParams p;
  p.gamma3N = 5.0;
  p.tau = tau;
  return p;
}

}  // namespace

TEST(Grid, ValidatesShape) {
  EXPECT_THROW((FrequencyGrid{0.0, 1.0, 1}.validate()), InvalidArgument);
  EXPECT_THROW((FrequencyGrid{1.0, 1.0, 4}.validate()), InvalidArgument);
  EXPECT_NO_THROW((FrequencyGrid{-1.0, 1.0, 2}.validate()));
}

TEST(Grid, AlignedGridHasAnchorNode) {
  const auto g = FrequencyGrid::aligned(-3.3, 7.1, 0.25, 0.0);
  EXPECT_NEAR(g.spacing(), 0.25, 1e-12);
  EXPECT_LE(g.min, -3.3);
  EXPECT_GE(g.max, 7.1);
  EXPECT_NEAR(std::remainder(g.min, 0.25), 0.0, 1e-9);
}

TEST(Grid, TrapezoidIntegratesLinearExactly) {
  const FrequencyGrid g{-2.0, 3.0, 11};
  std::vector<double> f;
  for (double x : g.values()) f.push_back(2.0 * x + 1.0);
  EXPECT_NEAR(integrate(g, std::span<const double>(f)), 10.0, 1e-12);
}

TEST(Spectra, SinglePairAtOrigin) {
  const cplx v = jsa_single(base(), 0.0, 0.0);
  EXPECT_NEAR(v.real(), 0.4, 1e-15);
  EXPECT_EQ(v.imag(), 0.0);
}

TEST(Spectra, EnergyConservationAxisIsPureLorentzian) {
  const auto p = base();
  for (double x : {-30.0, -2.5, 0.0, 1.0, 17.0})
    EXPECT_NEAR(std::abs(jsa_single(p, x, -x)), 1.0 / std::sqrt(2.5 * 2.5 + x * x), 1e-15);
}

TEST(Spectra, SumDirectionFwhm) {
  // Half maximum of the amplitude along ws + wi at fixed wi = 0, by bisection.
  const auto p = base();
  const double peak = std::abs(jsa_single(p, 0.0, 0.0));
  double lo = 0.0, hi = 50.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (std::abs(jsa_single(p, mid, 0.0)) > 0.5 * peak ? lo : hi) = mid;
  }
  EXPECT_NEAR(2.0 * lo, std::sqrt(32.0 * std::log(2.0)) / 0.5, 1e-9);
  EXPECT_NEAR(2.0 * lo, 9.0, 0.5);  // "FWHM about 9 Gamma"
}

TEST(Spectra, GaussianFactorDependsOnlyOnSum) {
  const auto p = base();
  for (double s : {-4.0, 0.0, 3.0})
    for (double shift : {-10.0, 2.0, 25.0})
      EXPECT_EQ(gaussian_factor(p, (s + shift) + (-shift)), gaussian_factor(p, s));
}

TEST(Spectra, MultiplexedSinglePairReducesExactly) {
  MultiplexedSpectrum spec{base(), {PairShift{}}};
  for (double ws = -20; ws <= 20; ws += 3.7)
    for (double wi = -20; wi <= 20; wi += 2.9) EXPECT_EQ(jsa_multiplexed(spec, ws, wi), jsa_single(spec.params, ws, wi));
}

TEST(Spectra, MultiplexedIsLinearInPairLists) {
  const auto p = base();
  MultiplexedSpectrum a{p, {{cplx(1, 2), -50, 3}, {cplx(-0.5, 0), 50, 0}}};
  MultiplexedSpectrum b{p, {{cplx(0, 1), 150, -7}}};
  MultiplexedSpectrum ab{p, a.pairs};
  ab.pairs.insert(ab.pairs.end(), b.pairs.begin(), b.pairs.end());
  for (double ws : {-160.0, -3.0, 0.0, 44.0})
    for (double wi : {-49.0, 0.5, 151.0}) {
      const cplx sum = jsa_multiplexed(a, ws, wi) + jsa_multiplexed(b, ws, wi);
      EXPECT_LE(std::abs(jsa_multiplexed(ab, ws, wi) - sum), 1e-15 * (1.0 + std::abs(sum)));
    }
}

TEST(Spectra, PairPeaksOnItsShiftLines) {
  const auto p = base();
  const double delta = 100.0;
  MultiplexedSpectrum spec{p, {}};
  for (double k : {-1.5, -0.5, 0.5, 1.5}) spec.pairs.push_back({1.0, k * delta, 0.0});
  EXPECT_DOUBLE_EQ(spec.pairs[0].delta_p, -150.0);
  EXPECT_DOUBLE_EQ(spec.pairs[1].delta_p, -50.0);
  // Pair 3 alone: search the maximum over a fine grid.
  MultiplexedSpectrum one{p, {{1.0, 50.0, 7.0}}};
  double best = 0.0, bs = 0.0, bi = 0.0;
  for (double wi = 40.0; wi <= 60.0; wi += 0.25)
    for (double ws = -80.0; ws <= -30.0; ws += 0.25) {
      const double v = std::abs(jsa_multiplexed(one, ws, wi));
      if (v > best) best = v, bs = ws, bi = wi;
    }
  EXPECT_DOUBLE_EQ(bi, 50.0);
  EXPECT_DOUBLE_EQ(bs + bi, -7.0);
}

TEST(Spectra, SignalModeNormAndCenter) {
  const auto p = base();
  const PairShift pair{1.0, 50.0, 12.0};
  const FrequencyGrid g = FrequencyGrid::covering(-120.0, 0.0, 0.05);
  const ModeFunction m = marginal_signal_mode(pair, p, g);
  EXPECT_NEAR(l2_norm(g, m.samples), 1.0, 1e-8);
  std::size_t arg = 0;
  for (std::size_t k = 0; k < g.points; ++k)
    if (std::abs(m.samples[k]) > std::abs(m.samples[arg])) arg = k;
  EXPECT_NEAR(g.at(arg), -(50.0 + 12.0), g.spacing());
}

TEST(Spectra, SignalNormMatchesGaussianIntegral) {
  const auto p = base();
  const FrequencyGrid g = FrequencyGrid::covering(-60.0, 60.0, 0.2);
  const ModeFunction m = marginal_signal_mode(PairShift{}, p, g);
  // |profile|^2 = e^{G^2 tau^2/16} e^{-w^2 tau^2/4}; the Gaussian integral is done here by Simpson.
  const double gauss = oracle::simpson([&](double w) { return std::exp(-w * w * 0.25 / 4.0); }, -200.0, 200.0, 20000);
  const double expected = std::exp(25.0 * 0.25 / 16.0) * gauss;
  EXPECT_NEAR(m.norm * m.norm / expected, 1.0, 1e-3);
  EXPECT_NEAR(expected, std::exp(std::pow(5.0 * 0.5, 2) / 16.0) * 2.0 * std::sqrt(kPi) / 0.5, 1e-9 * expected);
  EXPECT_NEAR(signal_norm_continuum(p), std::sqrt(expected), 1e-9);
}

TEST(Spectra, SignalModeRejectsCoarseGrid) {
  const auto p = base();
  EXPECT_THROW(marginal_signal_mode(PairShift{}, p, FrequencyGrid::covering(-60.0, 60.0, 0.3)), UnderResolvedGrid);
  EXPECT_THROW(marginal_signal_mode(PairShift{}, p, FrequencyGrid::covering(-5.0, 5.0, 0.1)), UnderResolvedGrid);
}

TEST(Spectra, IdlerModeNormConvergesToContinuum) {
  const auto p = base();
  const PairShift pair{1.0, 50.0, 0.0};
  double prev_gap = 1e9;
  for (double reach : {100.0, 400.0, 1600.0}) {
    const FrequencyGrid g = FrequencyGrid::covering(50.0 - reach, 50.0 + reach, 0.25);
    const ModeFunction m = marginal_idler_mode(pair, p, g);
    EXPECT_NEAR(l2_norm(g, m.samples), 1.0, 1e-8);
    // Truncated Lorentzian integral (4/G) atan(2L/G).
    EXPECT_NEAR(m.norm * m.norm, 4.0 / 5.0 * std::atan(2.0 * reach / 5.0), 1e-4);
    const double gap = std::abs(m.norm * m.norm - 2.0 * kPi / 5.0);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 2e-3);
  EXPECT_NEAR(idler_norm_continuum(p) * idler_norm_continuum(p), 2.0 * kPi / 5.0, 1e-12);
}

TEST(Spectra, IdlerModePeaksAtShift) {
  const auto p = base();
  const PairShift pair3{1.0, 0.5 * 100.0, 0.0};
  const FrequencyGrid g = FrequencyGrid::covering(-100.0, 200.0, 0.25);
  const ModeFunction m = marginal_idler_mode(pair3, p, g);
  std::size_t arg = 0;
  for (std::size_t k = 0; k < g.points; ++k)
    if (std::abs(m.samples[k]) > std::abs(m.samples[arg])) arg = k;
  EXPECT_NEAR(g.at(arg), 50.0, 1e-9);
  EXPECT_THROW(marginal_idler_mode(pair3, p, FrequencyGrid::covering(0.0, 100.0, 0.25)), UnderResolvedGrid);
  EXPECT_THROW(marginal_idler_mode(pair3, p, FrequencyGrid::covering(-100.0, 200.0, 1.0)), UnderResolvedGrid);
}

TEST(Spectra, IntegratedSignalProfileIsHalfLineTransform) {
  // int f(ws, wi) dwi = sqrt(8 pi)/tau int_0^inf e^{-G t/2 - i a t - 2 t^2/tau^2} dt, a = ws + dp + dq.
  const auto p = base();
  const PairShift pair{1.0, 20.0, -5.0};
  MultiplexedSpectrum spec{p, {pair}};
  const double h = 0.01;
  for (double ws : {-15.0, -10.0, -15.0 - 4.0, -15.0 + 6.0}) {
    cplx direct = 0.0;
    for (double wi = -ws - pair.delta_q - 100.0; wi <= -ws - pair.delta_q + 100.0; wi += h) direct += jsa_multiplexed(spec, ws, wi) * h;
    const double a = ws + pair.delta_p + pair.delta_q;
    const cplx half = std::sqrt(8.0 * kPi) / p.tau * oracle::simpson([&](double t) {
      return std::exp(cplx(-p.gamma3N * t / 2.0 - 2.0 * t * t / (p.tau * p.tau), -a * t));
    }, 0.0, 6.0, 6000);
    EXPECT_LT(std::abs(direct - half), 1e-8 * std::abs(half)) << "ws=" << ws;
  }
}

TEST(Spectra, CoverageCheck) {
  MultiplexedSpectrum spec{base(), {{1.0, 150.0, 0.0}}};
  EXPECT_THROW(check_coverage(spec, FrequencyGrid{-100.0, 100.0, 401}), UnderResolvedGrid);
  EXPECT_NO_THROW(check_coverage(spec, FrequencyGrid{-200.0, 200.0, 401}));
  EXPECT_DOUBLE_EQ(default_half_width(spec), 150.0 + 250.0);
}

TEST(Spectra, UnitConversionAtIo) {
  EXPECT_DOUBLE_EQ(gamma_units_to_mhz(1.0), 6.0);
  EXPECT_DOUBLE_EQ(gamma_units_to_mhz(100.0), 600.0);
}

TEST(Spectra, ModeCsvColumns) {
  const auto p = base();
  const ModeFunction m = marginal_signal_mode(PairShift{}, p, FrequencyGrid::covering(-15.0, 15.0, 0.25));
  std::ostringstream os;
  write_mode_csv(os, m);
  EXPECT_EQ(os.str().substr(0, 12), "omega,re,im\n");
}

TEST(Spectra, RejectsInvalidParams) {
  auto p = base();
  p.tau = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  MultiplexedSpectrum empty{base(), {}};
  EXPECT_THROW(empty.validate(), InvalidArgument);
}
