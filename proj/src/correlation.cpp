#include "specode/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include <unsupported/Eigen/FFT>

namespace specode {

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

double trapezoid_sq(const GridFunction& f) {
  const auto w = trapezoid_weights(f.grid);
  double s = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) s += w[k] * std::norm(f.values[k]);
  return s;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t v = 1;
  for (std::size_t k = 0; k < exp; ++k) {
    if (base != 0 && v > static_cast<std::size_t>(-1) / base) throw Overflow("M^R exceeds the index range");
    v *= base;
  }
  return v;
}

// Digit of channel `ch` in a multi-index, channel 0 most significant.
std::size_t digit(std::size_t index, std::size_t ch, std::size_t r, std::size_t m) {
  for (std::size_t k = ch + 1; k < r; ++k) index /= m;
  return index % m;
}

std::size_t infer_m(std::size_t dim, std::size_t r) {
  const auto m = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(dim), 1.0 / static_cast<double>(r))));
  if (ipow(m, r) != dim) throw ChannelShapeMismatch("matrix dimension is not M^R for R = " + std::to_string(r));
  return m;
}

// Per-channel |sum_m He_m Hd_m|^2 for every codeword pair of `code`.
Eigen::MatrixXd channel_table(const CodeMatrix& code) {
  const auto m = static_cast<std::size_t>(code.cols());
  Eigen::MatrixXd q(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    const CVector e = codeword(code, a);
    for (std::size_t b = 0; b < m; ++b) {
      const CVector d = matched_decode(codeword(code, b));
      cplx s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += d[k] * e[k];
      q(a, b) = std::norm(s);
    }
  }
  return q;
}

double normalization_factor(std::size_t r, std::size_t m, LambdaNormalization n) {
  return n == LambdaNormalization::kGlobal ? static_cast<double>(r * m) : static_cast<double>(m);
}

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
};

AxisRange bins_range(std::span<const SpectralBin> bins) {
  AxisRange r{bins.front().center - bins.front().width / 2, bins.front().center + bins.front().width / 2};
  for (const auto& b : bins) {
    r.lo = std::min(r.lo, b.center - b.width / 2);
    r.hi = std::max(r.hi, b.center + b.width / 2);
  }
  return r;
}

double default_spacing(const PhysicalParams& p, const NumericOptions& o) {
  if (o.max_spacing > 0.0) return o.max_spacing;
  return std::min(1.0 / (8.0 * p.tau), p.gamma3N / 8.0);
}

// Axes for a coded computation. Masked axes only need to span their bins;
// unmasked axes span the mode supports.
std::pair<FrequencyGrid, FrequencyGrid> coded_grids(const MultiplexedSpectrum& spec, const SpectralMasks& masks,
                                                    double h, bool joint) {
  const auto& p = spec.params;
  AxisRange ri;
  if (!masks.idler.empty()) {
    ri = bins_range(masks.idler);
  } else {
    ri = {spec.pairs.front().delta_p, spec.pairs.front().delta_p};
    for (const auto& pr : spec.pairs) {
      ri.lo = std::min(ri.lo, pr.delta_p);
      ri.hi = std::max(ri.hi, pr.delta_p);
    }
    ri.lo -= 50.0 * p.gamma3N;
    ri.hi += 50.0 * p.gamma3N;
  }
  AxisRange rs;
  if (!masks.signal.empty()) {
    rs = bins_range(masks.signal);
  } else {
    const double reach = 12.0 / p.tau;
    rs = {spec.pairs.front().signal_center(), spec.pairs.front().signal_center()};
    for (const auto& pr : spec.pairs) {
      if (joint) {
        // Gaussian support of ws + wi + dq = 0 over the idler range.
        rs.lo = std::min(rs.lo, -pr.delta_q - ri.hi);
        rs.hi = std::max(rs.hi, -pr.delta_q - ri.lo);
      } else {
        rs.lo = std::min(rs.lo, pr.signal_center());
        rs.hi = std::max(rs.hi, pr.signal_center());
      }
    }
    rs.lo -= reach;
    rs.hi += reach;
  }
  return {FrequencyGrid::aligned(rs.lo, rs.hi, h), FrequencyGrid::aligned(ri.lo, ri.hi, h)};
}

CVector ones_if_empty(std::span<const SpectralBin> bins, const FrequencyGrid& g) {
  if (bins.empty()) return CVector(g.points, cplx(1.0, 0.0));
  return sample_mask(bins, g);
}

GridFunction coded_F(const MultiplexedSpectrum& spec, std::span<const cplx> pair_encode, const SpectralMasks& masks,
                     double h, SpectralModel model) {
  if (model == SpectralModel::kMarginalModes) return coded_convolution(spec, pair_encode, masks, h);
  auto [gs, gi] = coded_grids(spec, masks, h, true);
  return antidiagonal_integral(coded_amplitude(spec, pair_encode, masks, gs, gi));
}

}  // namespace

GridFunction convolution(const FrequencyGrid& grid_a, std::span<const cplx> a, const FrequencyGrid& grid_b,
                         std::span<const cplx> b) {
  grid_a.validate();
  grid_b.validate();
  if (a.size() != grid_a.points || b.size() != grid_b.points) throw BadLength("samples do not match grid");
  if (!same_spacing(grid_a, grid_b))
    throw UnderResolvedGrid("convolution needs grids with a common spacing");
  const std::size_t n_out = a.size() + b.size() - 1;
  const std::size_t n_fft = next_pow2(n_out);
  const auto w = trapezoid_weights(grid_a);

  std::vector<cplx> pa(n_fft, 0.0), pb(n_fft, 0.0), fa, fb, out;
  for (std::size_t k = 0; k < a.size(); ++k) pa[k] = w[k] * a[k];
  std::copy(b.begin(), b.end(), pb.begin());
  Eigen::FFT<double> fft;
  fft.fwd(fa, pa);
  fft.fwd(fb, pb);
  for (std::size_t k = 0; k < n_fft; ++k) fa[k] *= fb[k];
  fft.inv(out, fa);

  GridFunction g;
  g.grid = FrequencyGrid{grid_a.min + grid_b.min, grid_a.min + grid_b.min + grid_a.spacing() * static_cast<double>(n_out - 1),
                         n_out};
  g.values.assign(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n_out));
  return g;
}

GridFunction convolution(const ModeFunction& signal_mode, const ModeFunction& idler_mode) {
  return convolution(signal_mode.grid, signal_mode.samples, idler_mode.grid, idler_mode.samples);
}

double unit_g2(const PhysicalParams& params) {
  params.validate();
  const double ns = signal_norm_continuum(params);
  const double ni = idler_norm_continuum(params);
  return std::norm(params.coupling_prefactor) * 2.0 * std::sqrt(kPi) / (ns * ns * ni * ni * params.tau);
}

std::size_t ChannelMap::pair_index(std::size_t channel, std::size_t slot) const {
  if (channel >= r || slot >= m) throw InvalidArgument("channel or slot out of range");
  return enumeration == PairEnumeration::kChannelMajor ? channel * m + slot : channel + slot * r;
}

void CodingAssignment::validate(std::size_t pair_count) const {
  if (encode.size() != pair_count || decode.size() != pair_count)
    throw BadLength("encode/decode length must equal the pair count " + std::to_string(pair_count));
  if (channel_map && channel_map->r * channel_map->m != pair_count)
    throw ChannelShapeMismatch("channel map R*M does not equal the pair count");
}

double g2_ideal_single(const CodingAssignment& assign, double prefactor) {
  if (assign.encode.size() != assign.decode.size() || assign.encode.empty())
    throw BadLength("encode and decode must have the same nonzero length");
  cplx s = 0.0;
  for (std::size_t n = 0; n < assign.encode.size(); ++n) s += assign.decode[n] * assign.encode[n];
  return prefactor * std::norm(s) / static_cast<double>(assign.encode.size());
}

double g2_ideal_multi(std::size_t r, std::size_t m, std::span<const CVector> encodes,
                      std::span<const CVector> decodes, double prefactor, LambdaNormalization normalization) {
  if (r == 0 || m == 0) throw ChannelShapeMismatch("R and M must be positive");
  if (encodes.size() != r || decodes.size() != r) throw ChannelShapeMismatch("need one encode and decode per channel");
  double sum = 0.0;
  for (std::size_t ch = 0; ch < r; ++ch) {
    if (encodes[ch].size() != m || decodes[ch].size() != m)
      throw ChannelShapeMismatch("channel " + std::to_string(ch + 1) + " does not carry M entries");
    cplx s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += encodes[ch][k] * decodes[ch][k];
    sum += std::norm(s);
  }
  return prefactor * sum / normalization_factor(r, m, normalization);
}

std::size_t G2Matrix::matched_channels(std::size_t a, std::size_t b) const {
  if (r_channels <= 1) return a == b ? 1 : 0;
  std::size_t count = 0;
  for (std::size_t ch = 0; ch < r_channels; ++ch)
    if (digit(a, ch, r_channels, m_per_channel) == digit(b, ch, r_channels, m_per_channel)) ++count;
  return count;
}

G2Matrix g2_matrix_ideal(const CodeMatrix& code, double prefactor) {
  const auto n = static_cast<std::size_t>(code.cols());
  G2Matrix g;
  g.m_per_channel = n;
  g.values = channel_table(code) * (prefactor / static_cast<double>(n));
  return g;
}

G2Matrix g2_matrix_ideal_multi(const CodeMatrix& code, std::size_t r, double prefactor,
                               LambdaNormalization normalization) {
  if (r == 0) throw ChannelShapeMismatch("R must be positive");
  const auto m = static_cast<std::size_t>(code.cols());
  const std::size_t dim = ipow(m, r);
  const Eigen::MatrixXd q = channel_table(code);
  const double scale = prefactor / normalization_factor(r, m, normalization);
  G2Matrix g;
  g.r_channels = r;
  g.m_per_channel = m;
  g.values.resize(dim, dim);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      double s = 0.0;
      for (std::size_t ch = 0; ch < r; ++ch) s += q(digit(a, ch, r, m), digit(b, ch, r, m));
      g.values(a, b) = scale * s;
    }
  }
  return g;
}

std::uint64_t LevelSummary::total_cells() const {
  std::uint64_t t = 0;
  for (const auto& l : levels) t += l.multiplicity;
  return t;
}

namespace {

// Inserts (matched, value, count) into a level list, merging within tol.
void add_level(std::vector<Level>& levels, std::size_t matched, double value, std::uint64_t count, double tol) {
  for (auto& l : levels) {
    if (l.matched_channels == matched && std::abs(l.value - value) <= tol) {
      l.multiplicity += count;
      return;
    }
  }
  levels.push_back({value, matched, count});
}

void sort_levels(std::vector<Level>& levels) {
  std::sort(levels.begin(), levels.end(), [](const Level& x, const Level& y) {
    return x.matched_channels != y.matched_channels ? x.matched_channels < y.matched_channels : x.value < y.value;
  });
}

}  // namespace

LevelSummary level_summary_ideal_multi(const CodeMatrix& code, std::size_t r, double prefactor,
                                       LambdaNormalization normalization, double rel_tol) {
  if (r == 0) throw ChannelShapeMismatch("R must be positive");
  const auto m = static_cast<std::size_t>(code.cols());
  const Eigen::MatrixXd q = channel_table(code);
  const double tol = rel_tol * std::max(q.maxCoeff(), 1e-300) * static_cast<double>(r);

  std::vector<Level> channel;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) add_level(channel, a == b ? 1 : 0, q(a, b), 1, tol);

  std::vector<Level> acc{{0.0, 0, 1}};
  for (std::size_t ch = 0; ch < r; ++ch) {
    std::vector<Level> next;
    for (const auto& x : acc)
      for (const auto& y : channel) {
        if (y.multiplicity != 0 && x.multiplicity > UINT64_MAX / y.multiplicity)
          throw Overflow("level multiplicity exceeds 64 bits");
        add_level(next, x.matched_channels + y.matched_channels, x.value + y.value, x.multiplicity * y.multiplicity,
                  tol);
      }
    acc = std::move(next);
  }
  const double scale = prefactor / normalization_factor(r, m, normalization);
  for (auto& l : acc) l.value *= scale;
  sort_levels(acc);
  return {r, m, std::move(acc)};
}

LevelSummary level_summary(const G2Matrix& g, double rel_tol) {
  const double tol = rel_tol * std::max(g.values.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Level> levels;
  for (std::size_t a = 0; a < g.dimension(); ++a)
    for (std::size_t b = 0; b < g.dimension(); ++b) add_level(levels, g.matched_channels(a, b), g.values(a, b), 1, tol);
  sort_levels(levels);
  return {g.r_channels, g.m_per_channel, std::move(levels)};
}

namespace {

ContrastReport finish_report(double mx, double mn, double od, std::size_t r, double lr, double lr1) {
  if (mx == mn) throw DegenerateMatrix("all g2 entries are equal; contrasts undefined");
  ContrastReport c;
  c.g2_max = mx;
  c.g2_min = mn;
  c.g2_od = od;
  c.v = (mx - mn) / (mx + mn);
  c.c_od = (mx - od) / (mx + od);
  if (r > 1) c.c_non = (lr - lr1) / (lr + lr1);
  return c;
}

}  // namespace

ContrastReport contrasts(const G2Matrix& m, std::size_t r_channels) {
  if (m.dimension() == 0) throw InvalidArgument("empty G2 matrix");
  if (r_channels == 0) throw ChannelShapeMismatch("R must be positive");
  G2Matrix view;
  const G2Matrix* g = &m;
  if (r_channels != m.r_channels) {
    view.values = m.values;
    view.r_channels = r_channels;
    view.m_per_channel = r_channels == 1 ? m.dimension() : infer_m(m.dimension(), r_channels);
    g = &view;
  }
  const double inf = std::numeric_limits<double>::infinity();
  double mx = -inf, mn = inf, od = -inf, lr = inf, lr1 = inf;
  for (std::size_t a = 0; a < g->dimension(); ++a) {
    for (std::size_t b = 0; b < g->dimension(); ++b) {
      const double v = g->values(a, b);
      if (v < 0.0) throw InvalidArgument("g2 entries must be nonnegative");
      mx = std::max(mx, v);
      mn = std::min(mn, v);
      const std::size_t k = g->matched_channels(a, b);
      if (k + 1 <= r_channels) od = std::max(od, v);
      if (k == r_channels) lr = std::min(lr, v);
      if (k + 1 == r_channels) lr1 = std::min(lr1, v);
    }
  }
  if (od == -inf) od = mn;
  return finish_report(mx, mn, od, r_channels, lr, lr1);
}

ContrastReport contrasts(const LevelSummary& s) {
  if (s.levels.empty()) throw InvalidArgument("empty level summary");
  const double inf = std::numeric_limits<double>::infinity();
  double mx = -inf, mn = inf, od = -inf, lr = inf, lr1 = inf;
  const std::size_t r = s.r_channels;
  for (const auto& l : s.levels) {
    if (l.multiplicity == 0) continue;
    mx = std::max(mx, l.value);
    mn = std::min(mn, l.value);
    if (l.matched_channels + 1 <= r) od = std::max(od, l.value);
    if (l.matched_channels == r) lr = std::min(lr, l.value);
    if (l.matched_channels + 1 == r) lr1 = std::min(lr1, l.value);
  }
  if (od == -inf) od = mn;
  return finish_report(mx, mn, od, r, lr, lr1);
}

// ---- numeric path -------------------------------------------------------

void SpectralMasks::validate() const {
  for (const auto* axis : {&signal, &idler}) {
    std::vector<SpectralBin> bins = *axis;
    for (const auto& b : bins)
      if (!(b.width > 0.0)) throw InvalidArgument("spectral bin width must be positive");
    std::sort(bins.begin(), bins.end(), [](const auto& x, const auto& y) { return x.center < y.center; });
    for (std::size_t k = 1; k < bins.size(); ++k) {
      const double hi = bins[k - 1].center + bins[k - 1].width / 2;
      const double lo = bins[k].center - bins[k].width / 2;
      if (lo < hi - 1e-9 * std::max(bins[k].width, bins[k - 1].width)) {
        std::ostringstream os;
        os << "bins centered at " << bins[k - 1].center << " and " << bins[k].center << " overlap";
        throw BinOverlap(os.str());
      }
    }
  }
}

CVector sample_mask(std::span<const SpectralBin> bins, const FrequencyGrid& grid) {
  CVector m(grid.points, 0.0);
  const double h = grid.spacing();
  const auto clamp_index = [&](double x) {
    const double i = std::ceil((x - grid.min) / h - 1e-9);
    return static_cast<std::size_t>(std::clamp(i, 0.0, static_cast<double>(grid.points)));
  };
  for (const auto& b : bins) {
    const std::size_t lo = clamp_index(b.center - b.width / 2);
    const std::size_t hi = clamp_index(b.center + b.width / 2);
    for (std::size_t k = lo; k < hi; ++k) m[k] = b.value;
  }
  return m;
}

SpectralMasks single_channel_masks(const MultiplexedSpectrum& spec, const CodingAssignment& assign, double bin_width,
                                   EncodeMode encode) {
  assign.validate(spec.size());
  if (!(bin_width > 0.0)) throw InvalidArgument("bin width must be positive");
  SpectralMasks m;
  for (std::size_t n = 0; n < spec.size(); ++n) {
    m.idler.push_back({spec.pairs[n].delta_p, bin_width, assign.decode[n]});
    if (encode == EncodeMode::kSignalBins) m.signal.push_back({spec.pairs[n].signal_center(), bin_width, assign.encode[n]});
  }
  m.validate();
  return m;
}

GridFunction coded_convolution(const MultiplexedSpectrum& spec, std::span<const cplx> pair_encode,
                               const SpectralMasks& masks, double spacing) {
  spec.validate();
  masks.validate();
  if (pair_encode.size() != spec.size()) throw BadLength("one encode weight per pair is required");
  const auto& p = spec.params;
  if (spacing > std::min(1.0 / (8.0 * p.tau), p.gamma3N / 8.0) * (1.0 + 1e-12))
    throw UnderResolvedGrid("numeric grid spacing exceeds min((1/tau)/8, gamma3N/8)");
  auto [gs, gi] = coded_grids(spec, masks, spacing, false);
  const CVector ms = ones_if_empty(masks.signal, gs);
  const CVector mi = ones_if_empty(masks.idler, gi);
  const double ns = signal_norm_continuum(p);
  const double ni = idler_norm_continuum(p);
  const double lambda_amp = 1.0 / std::sqrt(static_cast<double>(spec.size()));
  const double t2 = p.tau * p.tau;

  GridFunction total;
  CVector psi(gs.points), phi(gi.points);
  for (std::size_t n = 0; n < spec.size(); ++n) {
    const auto& pr = spec.pairs[n];
    const cplx w = pr.weight * pair_encode[n] * lambda_amp;
    if (w == 0.0) continue;
    const cplx shift(pr.delta_p + pr.delta_q, p.gamma3N / 2.0);
    for (std::size_t k = 0; k < gs.points; ++k) {
      const cplx z = gs.at(k) + shift;
      psi[k] = ms[k] == 0.0 ? cplx(0.0) : -std::exp(-z * z * t2 / 8.0) / ns * ms[k] * w;
    }
    for (std::size_t k = 0; k < gi.points; ++k)
      phi[k] = mi[k] == 0.0 ? cplx(0.0) : lorentzian_amplitude(p, gi.at(k) - pr.delta_p) / ni * mi[k];
    GridFunction c = convolution(gs, psi, gi, phi);
    if (total.values.empty()) {
      total = std::move(c);
    } else {
      for (std::size_t k = 0; k < c.values.size(); ++k) total.values[k] += c.values[k];
    }
  }
  if (total.values.empty()) {
    GridFunction zero = convolution(gs, CVector(gs.points, 0.0), gi, CVector(gi.points, 0.0));
    return zero;
  }
  return total;
}

JointAmplitude coded_amplitude(const MultiplexedSpectrum& spec, std::span<const cplx> pair_encode,
                               const SpectralMasks& masks, const FrequencyGrid& grid_s, const FrequencyGrid& grid_i) {
  spec.validate();
  masks.validate();
  if (pair_encode.size() != spec.size()) throw BadLength("one encode weight per pair is required");
  MultiplexedSpectrum coded = spec;
  const double lambda_amp = 1.0 / std::sqrt(static_cast<double>(spec.size()));
  for (std::size_t n = 0; n < spec.size(); ++n) coded.pairs[n].weight *= pair_encode[n] * lambda_amp;
  JointAmplitude j = sample_jsa(coded, grid_s, grid_i);
  const CVector ms = ones_if_empty(masks.signal, grid_s);
  const CVector mi = ones_if_empty(masks.idler, grid_i);
  for (std::size_t a = 0; a < grid_s.points; ++a)
    for (std::size_t b = 0; b < grid_i.points; ++b) j.values(a, b) *= ms[a] * mi[b];
  return j;
}

GridFunction antidiagonal_integral(const JointAmplitude& amplitude) {
  const auto& gs = amplitude.grid_s;
  const auto& gi = amplitude.grid_i;
  if (!same_spacing(gs, gi)) throw UnderResolvedGrid("anti-diagonal integral needs a common spacing");
  const std::size_t ns = gs.points, ni = gi.points, n_out = ns + ni - 1;
  const auto w = trapezoid_weights(gs);
  GridFunction f;
  f.grid = FrequencyGrid{gs.min + gi.min, gs.min + gi.min + gs.spacing() * static_cast<double>(n_out - 1), n_out};
  f.values.assign(n_out, 0.0);
  for (std::size_t a = 0; a < ns; ++a)
    for (std::size_t b = 0; b < ni; ++b) f.values[a + b] += w[a] * amplitude.values(a, b);
  return f;
}

GridFunction schmidt_convolution_sum(const SchmidtDecomposition& d) {
  if (d.mode_count() == 0) throw InvalidArgument("decomposition carries no modes");
  GridFunction total;
  for (std::size_t n = 0; n < d.mode_count(); ++n) {
    CVector psi = d.signal_modes[n];
    const double amp = d.norm * std::sqrt(d.lambdas[n]);
    for (auto& v : psi) v *= amp;
    GridFunction c = convolution(d.grid_s, psi, d.grid_i, d.idler_modes[n]);
    if (n == 0) {
      total = std::move(c);
    } else {
      for (std::size_t k = 0; k < c.values.size(); ++k) total.values[k] += c.values[k];
    }
  }
  return total;
}

double g2_numeric_masked(const MultiplexedSpectrum& spec, std::span<const cplx> pair_encode,
                         const SpectralMasks& masks, double bin_width, const NumericOptions& options) {
  spec.validate();
  if (!(bin_width > 0.0)) throw InvalidArgument("bin width must be positive");
  const double h = default_spacing(spec.params, options);
  const GridFunction f = coded_F(spec, pair_encode, masks, h, options.model);

  MultiplexedSpectrum ref{spec.params, {PairShift{}}};
  SpectralMasks ref_masks;
  ref_masks.idler.push_back({0.0, bin_width, 1.0});
  if (!masks.signal.empty()) ref_masks.signal.push_back({0.0, bin_width, 1.0});
  const cplx one(1.0, 0.0);
  const GridFunction fr = coded_F(ref, std::span<const cplx>(&one, 1), ref_masks, h, options.model);

  const double denom = trapezoid_sq(fr);
  if (!(denom > 0.0)) throw UnderResolvedGrid("reference amplitude vanishes; bin narrower than the grid");
  return unit_g2(spec.params) * trapezoid_sq(f) / denom;
}

double g2_numeric(const MultiplexedSpectrum& spec, const CodingAssignment& assign, double bin_width,
                  const NumericOptions& options) {
  assign.validate(spec.size());
  if (assign.channel_map && assign.channel_map->r > 1)
    throw ChannelShapeMismatch("multi-channel numeric g2 needs layout-derived masks; use g2_numeric_masked");
  const SpectralMasks masks = single_channel_masks(spec, assign, bin_width, options.encode);
  CVector pair_encode = options.encode == EncodeMode::kPairWeights ? assign.encode : CVector(spec.size(), 1.0);
  return g2_numeric_masked(spec, pair_encode, masks, bin_width, options);
}

}  // namespace specode
