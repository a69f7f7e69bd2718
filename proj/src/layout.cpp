#include "specode/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace specode {

namespace {

std::string signal_label(std::size_t k) { return "s" + std::to_string(k + 1); }
std::string idler_label(std::size_t k) { return "i" + std::to_string(k + 1); }

long diagonal(const Cell& c) { return static_cast<long>(c.signal_bin) - static_cast<long>(c.idler_bin); }

// Bipartite bin graph over used bins. Signal bin k is node k, idler bin k' is
// node signal_bins + k'.
struct BinGraph {
  std::size_t signal_bins = 0;
  std::size_t total = 0;
  std::vector<bool> used;
  struct Edge {
    std::size_t s, i, channel, slot;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> adj;  // edge indices per node

  explicit BinGraph(const ChannelLayout& l)
      : signal_bins(l.signal_bins), total(l.signal_bins + l.idler_bins), used(total, false), adj(total) {
    for (std::size_t ch = 0; ch < l.placement.size(); ++ch) {
      for (std::size_t sl = 0; sl < l.placement[ch].size(); ++sl) {
        const Cell& c = l.placement[ch][sl];
        Edge e{c.signal_bin, l.signal_bins + c.idler_bin, ch, sl};
        used[e.s] = used[e.i] = true;
        adj[e.s].push_back(edges.size());
        adj[e.i].push_back(edges.size());
        edges.push_back(e);
      }
    }
  }

  std::string label(std::size_t node) const {
    return node < signal_bins ? signal_label(node) : idler_label(node - signal_bins);
  }
  std::size_t other(std::size_t edge, std::size_t node) const {
    return edges[edge].s == node ? edges[edge].i : edges[edge].s;
  }
};

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
};

// Path from `from` to `to` using only the first `edge_limit` edges (a forest).
std::vector<std::size_t> forest_path(const BinGraph& g, std::size_t edge_limit, std::size_t from, std::size_t to) {
  std::vector<long> prev(g.total, -1);
  std::vector<bool> seen(g.total, false);
  std::queue<std::size_t> q;
  q.push(from);
  seen[from] = true;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    if (u == to) break;
    for (std::size_t e : g.adj[u]) {
      if (e >= edge_limit) continue;
      const std::size_t v = g.other(e, u);
      if (!seen[v]) {
        seen[v] = true;
        prev[v] = static_cast<long>(u);
        q.push(v);
      }
    }
  }
  std::vector<std::size_t> path{to};
  while (path.back() != from) path.push_back(static_cast<std::size_t>(prev[path.back()]));
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

double ChannelLayout::signal_center(std::size_t k) const {
  return -(static_cast<double>(k) - (static_cast<double>(signal_bins) - 1.0) / 2.0) * bin_width;
}

double ChannelLayout::idler_center(std::size_t kp) const {
  return (static_cast<double>(kp) - (static_cast<double>(idler_bins) - 1.0) / 2.0) * bin_width;
}

double ChannelLayout::channel_shift(std::size_t channel) const {
  const Cell& c = placement.at(channel).at(0);
  return -(signal_center(c.signal_bin) + idler_center(c.idler_bin));
}

std::vector<double> ChannelLayout::delta_r() const {
  std::vector<double> d;
  for (std::size_t ch = 0; ch < placement.size(); ++ch) d.push_back(channel_shift(ch));
  return d;
}

ChannelLayout make_layout(std::size_t r, std::size_t m, std::vector<std::vector<Cell>> placement, double bin_width) {
  ChannelLayout l;
  l.r = r;
  l.m = m;
  l.bin_width = bin_width;
  for (const auto& ch : placement)
    for (const auto& c : ch) {
      l.signal_bins = std::max(l.signal_bins, c.signal_bin + 1);
      l.idler_bins = std::max(l.idler_bins, c.idler_bin + 1);
    }
  l.placement = std::move(placement);
  return l;
}

ChannelLayout staircase(std::size_t r, std::size_t m, double bin_width) {
  if (r == 0 || m == 0) throw InvalidArgument("R and M must be positive");
  if (m % 2 != 0) throw OddM("staircase needs an even number of pairs per channel, got M = " + std::to_string(m));
  if (!(bin_width > 0.0)) throw InvalidArgument("bin width must be positive");
  std::vector<std::vector<Cell>> p(r);
  if (r == 1) {
    for (std::size_t j = 0; j < m; ++j) p[0].push_back({j, j});
    return make_layout(r, m, std::move(p), bin_width);
  }
  const std::size_t r_even = r - r % 2;
  std::size_t k = 0, kp = 0;
  long d = 0;
  bool first = true;
  for (std::size_t j = 0; j < r_even / 2; ++j) {
    for (std::size_t rep = 0; rep < m; ++rep) {
      for (std::size_t t = 0; t < 2; ++t) {
        const long target = static_cast<long>(2 * j + t);
        if (first) {
          first = false;
        } else if (target == d + 1) {
          ++k;
        } else {
          ++kp;
        }
        d = target;
        p[static_cast<std::size_t>(target)].push_back({k, kp});
      }
    }
  }
  if (r % 2 == 1) {
    ++k;  // leaf on the shared idler bin, diagonal R-1
    p[r - 1].push_back({k, kp});
    for (std::size_t t = 1; t < m; ++t) {
      ++k;
      ++kp;
      p[r - 1].push_back({k, kp});
    }
  }
  return make_layout(r, m, std::move(p), bin_width);
}

ValidationReport inspect(const ChannelLayout& layout, double tau) {
  ValidationReport rep;
  if (layout.placement.size() != layout.r) rep.violations.push_back("placement does not list R channels");
  for (std::size_t ch = 0; ch < layout.placement.size(); ++ch) {
    const auto& cells = layout.placement[ch];
    if (cells.size() != layout.m)
      rep.violations.push_back("channel " + std::to_string(ch + 1) + " does not hold M pairs");
    for (const auto& c : cells) {
      if (c.signal_bin >= layout.signal_bins || c.idler_bin >= layout.idler_bins)
        rep.violations.push_back("cell outside the bin grid in channel " + std::to_string(ch + 1));
    }
    for (std::size_t s = 1; s < cells.size(); ++s) {
      if (diagonal(cells[s]) != diagonal(cells[0]))
        rep.violations.push_back("channel " + std::to_string(ch + 1) + " spans several joint shifts");
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& ch : layout.placement)
    for (const auto& c : ch)
      if (!seen.insert({c.signal_bin, c.idler_bin}).second)
        rep.violations.push_back("cell (" + signal_label(c.signal_bin) + ", " + idler_label(c.idler_bin) +
                                 ") is used twice");
  if (!rep.violations.empty()) return rep;

  const BinGraph g(layout);
  UnionFind uf(g.total);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto a = uf.find(g.edges[e].s), b = uf.find(g.edges[e].i);
    if (a == b) {
      if (rep.cycle.empty()) {
        for (std::size_t n : forest_path(g, e, g.edges[e].s, g.edges[e].i)) rep.cycle.push_back(g.label(n));
        rep.cycle.push_back(g.label(g.edges[e].s));
      }
      continue;
    }
    uf.parent[a] = b;
  }

  std::map<std::size_t, ComponentReport> comps;
  for (std::size_t n = 0; n < g.total; ++n)
    if (g.used[n]) comps[uf.find(n)].nodes.push_back(g.label(n));
  for (const auto& e : g.edges) ++comps[uf.find(e.s)].edges;
  for (auto& [root, c] : comps) {
    c.dof = static_cast<long>(c.nodes.size()) - static_cast<long>(c.edges);
    rep.dof += c.dof;
    rep.components.push_back(std::move(c));
  }
  if (!rep.cycle.empty()) {
    std::string s;
    for (const auto& n : rep.cycle) s += (s.empty() ? "" : " - ") + n;
    rep.violations.push_back("placement graph contains the cycle " + s);
  }

  if (tau > 0.0 && layout.r > 1) {
    auto shifts = layout.delta_r();
    std::sort(shifts.begin(), shifts.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < shifts.size(); ++k) gap = std::min(gap, shifts[k] - shifts[k - 1]);
    if (gap < 20.0 / tau) {
      std::ostringstream os;
      os << "channel spacing " << gap << " is below 20/tau = " << 20.0 / tau << "; channels may crosstalk";
      rep.warnings.push_back(os.str());
    }
  }
  rep.valid = rep.violations.empty();
  return rep;
}

ValidationReport validate(const ChannelLayout& layout, double tau) {
  ValidationReport rep = inspect(layout, tau);
  if (!rep.cycle.empty()) throw CycleDetected(rep.violations.back(), rep.cycle);
  if (!rep.valid) throw InvalidArgument(rep.violations.front());
  return rep;
}

std::uint64_t dimension(const ChannelLayout& layout) {
  std::uint64_t d = 1;
  for (std::size_t k = 0; k < layout.r; ++k) {
    if (layout.m != 0 && d > UINT64_MAX / layout.m)
      throw Overflow("code space dimension M^R exceeds 64 bits");
    d *= layout.m;
  }
  return d;
}

DecoderSettings factor_decode(const ChannelLayout& layout, const std::vector<CVector>& per_channel_decodes) {
  validate(layout);
  if (per_channel_decodes.size() != layout.r) throw ChannelShapeMismatch("need one decode codeword per channel");
  for (const auto& d : per_channel_decodes)
    if (d.size() != layout.m) throw ChannelShapeMismatch("decode codeword length must equal M");

  const BinGraph g(layout);
  CVector value(g.total, cplx(1.0, 0.0));
  std::vector<bool> done(g.total, false);
  const auto degree = [&](std::size_t n) { return g.adj[n].size(); };

  for (std::size_t start = 0; start < g.total; ++start) {
    if (!g.used[start] || done[start]) continue;
    // Collect the component, then root it at its first non-leaf node; a
    // single-edge component is rooted at its signal node.
    std::vector<std::size_t> comp{start};
    std::vector<bool> in(g.total, false);
    in[start] = true;
    for (std::size_t q = 0; q < comp.size(); ++q)
      for (std::size_t e : g.adj[comp[q]]) {
        const std::size_t v = g.other(e, comp[q]);
        if (!in[v]) {
          in[v] = true;
          comp.push_back(v);
        }
      }
    std::sort(comp.begin(), comp.end());
    std::size_t root = comp.front();
    for (std::size_t n : comp)
      if (degree(n) >= 2) {
        root = n;
        break;
      }

    value[root] = 1.0;
    done[root] = true;
    std::queue<std::size_t> q;
    q.push(root);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t e : g.adj[u]) {
        const std::size_t v = g.other(e, u);
        if (done[v]) continue;
        const cplx target = per_channel_decodes[g.edges[e].channel][g.edges[e].slot];
        if (target == 0.0 && degree(v) > 1)
          throw Infeasible("zero decode entry on the shared bin " + g.label(v) + " cannot be factorised");
        value[v] = target / value[u];
        done[v] = true;
        q.push(v);
      }
    }
  }

  DecoderSettings out;
  out.signal.assign(value.begin(), value.begin() + static_cast<std::ptrdiff_t>(layout.signal_bins));
  out.idler.assign(value.begin() + static_cast<std::ptrdiff_t>(layout.signal_bins), value.end());
  return out;
}

std::vector<CVector> effective_decode(const ChannelLayout& layout, const DecoderSettings& settings) {
  if (settings.signal.size() != layout.signal_bins || settings.idler.size() != layout.idler_bins)
    throw BadLength("decoder settings do not match the bin grid");
  std::vector<CVector> out(layout.placement.size());
  for (std::size_t ch = 0; ch < layout.placement.size(); ++ch)
    for (const auto& c : layout.placement[ch]) out[ch].push_back(settings.signal[c.signal_bin] * settings.idler[c.idler_bin]);
  return out;
}

MultiplexedSpectrum to_spectrum(const ChannelLayout& layout, const PhysicalParams& params) {
  validate(layout);
  MultiplexedSpectrum spec;
  spec.params = params;
  spec.pairs.resize(layout.r * layout.m);
  const ChannelMap map = layout.channel_map();
  for (std::size_t ch = 0; ch < layout.r; ++ch) {
    for (std::size_t sl = 0; sl < layout.m; ++sl) {
      const Cell& c = layout.placement[ch][sl];
      PairShift& p = spec.pairs[map.pair_index(ch, sl)];
      p.delta_p = layout.idler_center(c.idler_bin);
      p.delta_q = -(layout.signal_center(c.signal_bin) + p.delta_p);
    }
  }
  return spec;
}

SpectralMasks decode_masks(const ChannelLayout& layout, const DecoderSettings& settings) {
  if (settings.signal.size() != layout.signal_bins || settings.idler.size() != layout.idler_bins)
    throw BadLength("decoder settings do not match the bin grid");
  std::vector<bool> us(layout.signal_bins, false), ui(layout.idler_bins, false);
  for (const auto& ch : layout.placement)
    for (const auto& c : ch) us[c.signal_bin] = ui[c.idler_bin] = true;
  SpectralMasks m;
  for (std::size_t k = 0; k < layout.signal_bins; ++k)
    if (us[k]) m.signal.push_back({layout.signal_center(k), layout.bin_width, settings.signal[k]});
  for (std::size_t k = 0; k < layout.idler_bins; ++k)
    if (ui[k]) m.idler.push_back({layout.idler_center(k), layout.bin_width, settings.idler[k]});
  return m;
}

double g2_numeric_layout(const ChannelLayout& layout, const PhysicalParams& params,
                         const std::vector<CVector>& per_channel_encodes,
                         const std::vector<CVector>& per_channel_decodes, const NumericOptions& options) {
  const MultiplexedSpectrum spec = to_spectrum(layout, params);
  if (per_channel_encodes.size() != layout.r) throw ChannelShapeMismatch("need one encode codeword per channel");
  CVector pair_encode(spec.size());
  const ChannelMap map = layout.channel_map();
  for (std::size_t ch = 0; ch < layout.r; ++ch) {
    if (per_channel_encodes[ch].size() != layout.m) throw ChannelShapeMismatch("encode codeword length must equal M");
    for (std::size_t sl = 0; sl < layout.m; ++sl) pair_encode[map.pair_index(ch, sl)] = per_channel_encodes[ch][sl];
  }
  const DecoderSettings settings = factor_decode(layout, per_channel_decodes);
  NumericOptions opts = options;
  opts.encode = EncodeMode::kPairWeights;
  return g2_numeric_masked(spec, pair_encode, decode_masks(layout, settings), layout.bin_width, opts);
}

}  // namespace specode
