#include "specode/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "specode/codes.hpp"
#include "specode/correlation.hpp"
#include "specode/dynamics.hpp"
#include "specode/io.hpp"
#include "specode/layout.hpp"
#include "specode/schmidt.hpp"
#include "specode/spectra.hpp"

namespace specode {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr int kSchemaVersion = 1;
constexpr std::uint64_t kFullMatrixLimit = 4096;

// ---- config parsing -----------------------------------------------------

// Typed access to one JSON object that remembers which keys were read, so
// unknown keys can be rejected with their full path.
class Section {
 public:
  Section(const json* j, std::string path) : j_(j), path_(std::move(path)) {
    if (j_ && !j_->is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_ && j_->contains(key);
  }

  double number(const std::string& key, double def) {
    if (!has(key)) return def;
    const auto& v = j_->at(key);
    if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(field(key) + ": must be finite");
    return x;
  }

  double positive(const std::string& key, double def) {
    const double x = number(key, def);
    if (!(x > 0.0)) throw ConfigError(field(key) + ": must be > 0");
    return x;
  }

  std::size_t count(const std::string& key, std::size_t def) {
    if (!has(key)) return def;
    const auto& v = j_->at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(field(key) + ": expected a nonnegative integer");
    return v.get<std::size_t>();
  }

  std::string text(const std::string& key, const std::string& def, std::initializer_list<const char*> allowed = {}) {
    if (!has(key)) return def;
    const auto& v = j_->at(key);
    if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
    std::string s = v.get<std::string>();
    if (allowed.size() && std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return s == a; })) {
      std::string msg = field(key) + ": must be one of";
      for (const char* a : allowed) msg += std::string(" ") + a;
      throw ConfigError(msg);
    }
    return s;
  }

  bool flag(const std::string& key, bool def) {
    if (!has(key)) return def;
    const auto& v = j_->at(key);
    if (!v.is_boolean()) throw ConfigError(field(key) + ": expected true or false");
    return v.get<bool>();
  }

  cplx complex(const std::string& key, cplx def) {
    if (!has(key)) return def;
    const auto& v = j_->at(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
      return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError(field(key) + ": expected a number or [re, im]");
  }

  std::vector<double> numbers(const std::string& key) {
    std::vector<double> out;
    if (!has(key)) return out;
    const auto& v = j_->at(key);
    if (!v.is_array()) throw ConfigError(field(key) + ": expected an array of numbers");
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_number()) throw ConfigError(field(key) + "[" + std::to_string(k) + "]: expected a number");
      out.push_back(v[k].get<double>());
    }
    return out;
  }

  const json* raw(const std::string& key) { return has(key) ? &j_->at(key) : nullptr; }

  Section sub(const std::string& key) { return Section(raw(key), field(key)); }

  void finish() const {
    if (!j_) return;
    for (auto it = j_->begin(); it != j_->end(); ++it)
      if (!used_.count(it.key())) throw ConfigError(field(it.key()) + ": unknown key");
  }

  std::string field(const std::string& key) const { return path_ + "." + key; }

 private:
  const json* j_;
  std::string path_;
  std::set<std::string> used_;
};

std::optional<FrequencyGrid> read_grid(Section s) {
  if (!s.has("min") && !s.has("max") && !s.has("points")) {
    s.finish();
    return std::nullopt;
  }
  FrequencyGrid g{s.number("min", -1.0), s.number("max", 1.0), s.count("points", 0)};
  s.finish();
  try {
    g.validate();
  } catch (const Error& e) {
    throw ConfigError(s.field("points") + ": " + e.what());
  }
  return g;
}

struct Config {
  PhysicalParams physical;
  std::optional<FrequencyGrid> grid_s, grid_i;
  CodeVectorSpec code;
  double bin_width = 100.0;
  std::vector<double> offsets;
  std::vector<double> delta_q;
  std::string mode = "ideal";
  NumericOptions numeric;
  std::size_t layout_r = 2, layout_m = 4;
  double layout_bin = 100.0;
  PairEnumeration enumeration = PairEnumeration::kChannelMajor;
  std::optional<std::vector<std::vector<Cell>>> cells;
  LambdaNormalization normalization = LambdaNormalization::kGlobal;
  std::string sweep_variable;
  std::vector<double> sweep_values;
  std::vector<double> series_tau;
  std::vector<std::size_t> series_n;
  std::size_t n_modes = 8;
  DriveParams drive;
  ModeGrids mode_grids;
  DynamicsOptions dyn;
  fs::path out_dir = ".";
  bool csv = true, json_out = true, svg = false;
  std::string hash;
};

std::size_t line_of(const std::string& text, std::size_t byte) {
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + std::min(byte, text.size()), '\n'));
}

Config parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  Config c;
  c.hash = hex64(fnv1a64(root.dump()));
  Section top(&root, "config");
  if (!top.has("schema_version")) throw ConfigError("config.schema_version: required");
  if (top.count("schema_version", 0) != kSchemaVersion)
    throw ConfigError("config.schema_version: unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
  if (top.text("units", "") != "gamma")
    throw ConfigError("config.units: required and must be \"gamma\" (frequencies in units of Gamma)");

  {
    Section s = top.sub("physical");
    auto& p = c.physical;
    p.gamma = s.positive("gamma", 1.0);
    p.gamma3N = s.positive("gamma3N", p.gamma3N);
    p.tau = s.positive("tau", p.tau);
    p.delta1 = s.number("delta1", p.delta1);
    p.delta2 = s.number("delta2", p.delta2);
    p.omega_a_tilde = s.number("omega_a_tilde", p.omega_a_tilde);
    p.omega_b_tilde = s.number("omega_b_tilde", p.omega_b_tilde);
    p.coupling_prefactor = s.complex("coupling_prefactor", p.coupling_prefactor);
    s.finish();
  }
  {
    Section s = top.sub("grid");
    c.grid_s = read_grid(s.sub("signal"));
    c.grid_i = read_grid(s.sub("idler"));
    s.finish();
  }
  {
    Section s = top.sub("code");
    const std::string kind = s.text("kind", "linear-h", {"linear-h", "geometric"});
    c.code.n = s.count("n", 4);
    if (!is_power_of_two(c.code.n)) throw ConfigError(s.field("n") + ": must be a power of two");
    if (kind == "linear-h") {
      c.code.kind = CodeVectorSpec::Kind::kLinearH;
      c.code.h = s.positive("h", 1.0);
    } else {
      c.code.kind = CodeVectorSpec::Kind::kGeometric;
      c.code.a = s.complex("a", 1.0);
      c.code.r = s.complex("r", 1.0);
    }
    s.finish();
  }
  {
    Section s = top.sub("multiplex");
    c.bin_width = s.positive("bin_width", c.bin_width);
    c.offsets = s.numbers("offsets");
    c.delta_q = s.numbers("delta_q");
    s.finish();
  }
  c.mode = top.text("mode", "ideal", {"ideal", "numeric"});
  {
    Section s = top.sub("numeric");
    c.numeric.model = s.text("model", "marginal", {"marginal", "full-jsa"}) == "marginal" ? SpectralModel::kMarginalModes
                                                                                         : SpectralModel::kFullJsa;
    c.numeric.encode = s.text("encode", "signal-bins", {"signal-bins", "pair-weights"}) == "signal-bins"
                           ? EncodeMode::kSignalBins
                           : EncodeMode::kPairWeights;
    c.numeric.max_spacing = s.number("max_spacing", 0.0);
    s.finish();
  }
  {
    Section s = top.sub("layout");
    c.layout_r = s.count("r", c.layout_r);
    c.layout_m = s.count("m", c.layout_m);
    if (c.layout_r == 0 || c.layout_m == 0) throw ConfigError("config.layout: r and m must be positive");
    c.layout_bin = s.positive("bin_width", c.layout_bin);
    c.enumeration = s.text("enumeration", "channel-major", {"channel-major", "pair-major"}) == "channel-major"
                        ? PairEnumeration::kChannelMajor
                        : PairEnumeration::kPairMajor;
    c.normalization = s.text("normalization", "global", {"global", "per-channel"}) == "global"
                          ? LambdaNormalization::kGlobal
                          : LambdaNormalization::kPerChannel;
    if (const json* cells = s.raw("cells")) {
      const std::string f = s.field("cells");
      if (!cells->is_array()) throw ConfigError(f + ": expected an array of channels");
      std::vector<std::vector<Cell>> p;
      for (const auto& ch : *cells) {
        if (!ch.is_array()) throw ConfigError(f + ": each channel is an array of [signal_bin, idler_bin]");
        p.emplace_back();
        for (const auto& cell : ch) {
          if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number_unsigned() || !cell[1].is_number_unsigned())
            throw ConfigError(f + ": each cell is [signal_bin, idler_bin] with nonnegative integers");
          p.back().push_back({cell[0].get<std::size_t>(), cell[1].get<std::size_t>()});
        }
      }
      c.cells = std::move(p);
    }
    s.finish();
  }
  {
    Section s = top.sub("sweep");
    c.sweep_variable = s.text("variable", "", {"h", "delta"});
    c.sweep_values = s.numbers("values");
    if (s.has("start") || s.has("stop") || s.has("steps")) {
      if (!c.sweep_values.empty()) throw ConfigError("config.sweep: give either values or start/stop/steps");
      const double a = s.number("start", 0.0), b = s.number("stop", 0.0);
      const std::size_t n = s.count("steps", 0);
      for (std::size_t k = 0; k < n; ++k)
        c.sweep_values.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
    }
    c.series_tau = s.numbers("series_tau");
    for (double n : s.numbers("series_n")) {
      if (n < 1 || n != std::floor(n)) throw ConfigError("config.sweep.series_n: entries must be positive integers");
      c.series_n.push_back(static_cast<std::size_t>(n));
    }
    s.finish();
  }
  {
    Section s = top.sub("schmidt");
    c.n_modes = s.count("n_modes", c.n_modes);
    s.finish();
  }
  {
    Section s = top.sub("dynamics");
    auto& d = c.drive;
    d.omega_a_tilde = s.number("omega_a_tilde", c.physical.omega_a_tilde);
    d.omega_b_tilde = s.number("omega_b_tilde", c.physical.omega_b_tilde);
    d.tau = s.positive("tau", c.physical.tau);
    d.delta1 = s.number("delta1", c.physical.delta1);
    d.delta2 = s.number("delta2", c.physical.delta2);
    d.gamma3N = s.positive("gamma3N", c.physical.gamma3N);
    d.lamb_shift = s.number("lamb_shift", 0.0);
    d.coupling = s.number("coupling", 1.0);
    d.atom_number = s.number("atom_number", 1.0);
    if (auto g = read_grid(s.sub("signal_grid"))) c.mode_grids.signal = *g;
    if (auto g = read_grid(s.sub("idler_grid"))) c.mode_grids.idler = *g;
    c.dyn.rtol = s.positive("rtol", c.dyn.rtol);
    c.dyn.atol = s.positive("atol", c.dyn.atol);
    if (s.has("t_final")) c.dyn.t_final = s.number("t_final", 0.0);
    c.dyn.back_action = s.flag("back_action", false);
    s.finish();
    try {
      d.validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("config.dynamics: ") + e.what());
    }
  }
  {
    Section s = top.sub("output");
    c.out_dir = s.text("directory", ".");
    if (const json* f = s.raw("formats")) {
      if (!f->is_array()) throw ConfigError(s.field("formats") + ": expected an array");
      c.csv = c.json_out = c.svg = false;
      for (const auto& x : *f) {
        const std::string v = x.is_string() ? x.get<std::string>() : "";
        if (v == "csv") c.csv = true;
        else if (v == "json") c.json_out = true;
        else if (v == "svg") c.svg = true;
        else throw ConfigError(s.field("formats") + ": entries must be csv, json or svg");
      }
    }
    s.finish();
  }
  top.finish();
  try {
    c.physical.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("config.physical: ") + e.what());
  }
  return c;
}

// ---- helpers ------------------------------------------------------------

// Bounded worker pool; results land in indexed slots so output order never
// depends on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k; (k = next++) < count;) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

MultiplexedSpectrum spectrum_from(const Config& c, std::size_t n, double bin_width) {
  MultiplexedSpectrum spec;
  spec.params = c.physical;
  std::vector<double> offsets = c.offsets;
  if (offsets.empty()) {
    for (std::size_t k = 0; k < n; ++k) offsets.push_back(static_cast<double>(k) - (static_cast<double>(n) - 1.0) / 2.0);
  }
  if (offsets.size() != n)
    throw ConfigError("config.multiplex.offsets: need " + std::to_string(n) + " entries (one per pair)");
  if (!c.delta_q.empty() && c.delta_q.size() != n)
    throw ConfigError("config.multiplex.delta_q: need " + std::to_string(n) + " entries (one per pair)");
  for (std::size_t k = 0; k < n; ++k) {
    PairShift p;
    p.delta_p = offsets[k] * bin_width;
    p.delta_q = c.delta_q.empty() ? 0.0 : c.delta_q[k];
    spec.pairs.push_back(p);
  }
  return spec;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < m.cols(); ++b) row.push_back(complex_json(m(a, b)));
    rows.push_back(row);
  }
  return rows;
}

json contrast_json(const ContrastReport& r) {
  json j{{"v", r.v}, {"c_od", r.c_od}, {"g2_max", r.g2_max}, {"g2_min", r.g2_min}, {"g2_od", r.g2_od}};
  j["c_non"] = r.c_non ? json(*r.c_non) : json(nullptr);
  return j;
}

json levels_json(const LevelSummary& s) {
  json arr = json::array();
  for (const auto& l : s.levels)
    arr.push_back({{"value", l.value}, {"matched_channels", l.matched_channels}, {"multiplicity", l.multiplicity}});
  return arr;
}

class Output {
 public:
  Output(const Config& c, const fs::path& override_dir, std::string command)
      : cfg_(c), dir_(override_dir.empty() ? c.out_dir : override_dir), stamp_{c.hash, version()} {
    summary_["command"] = std::move(command);
    summary_["config_hash"] = c.hash;
    summary_["version"] = version();
    fs::create_directories(dir_);
  }

  const OutputStamp& stamp() const { return stamp_; }
  json& summary() { return summary_; }
  bool csv() const { return cfg_.csv; }
  bool svg() const { return cfg_.svg; }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const fs::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file " + p.string());
    body(out);
    files_.push_back(p);
  }

  void csv_file(const std::string& name, const std::function<void(std::ostream&)>& body) {
    if (cfg_.csv) write(name, body);
  }

  RunResult finish(const std::string& json_name) {
    RunResult r;
    r.summary = summary_.dump(2);
    if (cfg_.json_out) write(json_name, [&](std::ostream& o) { o << r.summary << '\n'; });
    r.files = files_;
    return r;
  }

 private:
  const Config& cfg_;
  fs::path dir_;
  OutputStamp stamp_;
  json summary_;
  std::vector<fs::path> files_;
};

FrequencyGrid default_jsa_grid(const MultiplexedSpectrum& spec, std::size_t points) {
  const double half = default_half_width(spec);
  return FrequencyGrid::centered(0.0, half, points);
}

void write_matrix_outputs(Output& out, const G2Matrix& g, const std::string& title) {
  out.csv_file("g2_matrix.csv", [&](std::ostream& o) { write_matrix_csv(o, out.stamp(), g.values); });
  if (out.svg()) out.write("g2_matrix.svg", [&](std::ostream& o) { o << heatmap_svg(g.values, title); });
}

G2Matrix single_channel_matrix(const Config& c, const CodeMatrix& code, double bin_width) {
  const std::size_t n = static_cast<std::size_t>(code.cols());
  if (c.mode == "ideal") return g2_matrix_ideal(code, unit_g2(c.physical));
  const MultiplexedSpectrum spec = spectrum_from(c, n, bin_width);
  G2Matrix g;
  g.m_per_channel = n;
  g.values.resize(n, n);
  parallel_for(n * n, [&](std::size_t k) {
    const std::size_t a = k / n, b = k % n;
    CodingAssignment as{codeword(code, a), matched_decode(codeword(code, b)), std::nullopt};
    g.values(a, b) = g2_numeric(spec, as, bin_width, c.numeric);
  });
  return g;
}

// ---- subcommands --------------------------------------------------------

RunResult do_jsa(const Config& c, const fs::path& dir) {
  Output out(c, dir, "jsa");
  const MultiplexedSpectrum spec = spectrum_from(c, c.offsets.empty() ? 1 : c.offsets.size(), c.bin_width);
  const FrequencyGrid gs = c.grid_s.value_or(default_jsa_grid(spec, 256));
  const FrequencyGrid gi = c.grid_i.value_or(default_jsa_grid(spec, 256));
  check_coverage(spec, gi);
  const JointAmplitude j = sample_jsa(spec, gs, gi);
  out.csv_file("jsa.csv", [&](std::ostream& o) {
    write_csv_header(o, out.stamp(), {"omega_s", "omega_i", "re", "im"});
    for (std::size_t a = 0; a < gs.points; ++a)
      for (std::size_t b = 0; b < gi.points; ++b)
        o << format_number(gs.at(a)) << ',' << format_number(gi.at(b)) << ',' << format_number(j.values(a, b).real())
          << ',' << format_number(j.values(a, b).imag()) << '\n';
  });

  const auto& p = spec.params;
  const double h = std::min(1.0 / (8.0 * p.tau), p.gamma3N / 8.0);
  json pairs = json::array();
  for (std::size_t n = 0; n < spec.size(); ++n) {
    const auto& pr = spec.pairs[n];
    const double sreach = 8.0 / p.tau;
    const FrequencyGrid ms = FrequencyGrid::covering(pr.signal_center() - sreach, pr.signal_center() + sreach, h);
    const FrequencyGrid mi = FrequencyGrid::covering(pr.delta_p - 50.0 * p.gamma3N, pr.delta_p + 50.0 * p.gamma3N, h);
    const ModeFunction sm = marginal_signal_mode(pr, p, ms);
    const ModeFunction im = marginal_idler_mode(pr, p, mi);
    const auto dump = [&](const ModeFunction& m) {
      return [&, mref = &m](std::ostream& o) {
        o << "# specode " << out.stamp().version << " config_hash=" << out.stamp().config_hash << '\n';
        write_mode_csv(o, *mref);
      };
    };
    out.csv_file("mode_signal_" + std::to_string(n + 1) + ".csv", dump(sm));
    out.csv_file("mode_idler_" + std::to_string(n + 1) + ".csv", dump(im));
    pairs.push_back({{"delta_p", pr.delta_p}, {"delta_q", pr.delta_q}, {"signal_norm", sm.norm}, {"idler_norm", im.norm}});
  }
  out.summary()["pairs"] = pairs;
  out.summary()["jsa_peak_abs"] = j.values.cwiseAbs().maxCoeff();
  out.summary()["frequency_unit_mhz_per_gamma"] = gamma_units_to_mhz(1.0);
  return out.finish("jsa.json");
}

RunResult do_schmidt(const Config& c, const fs::path& dir) {
  Output out(c, dir, "schmidt");
  const MultiplexedSpectrum spec = spectrum_from(c, c.offsets.empty() ? 1 : c.offsets.size(), c.bin_width);
  const FrequencyGrid gs = c.grid_s.value_or(default_jsa_grid(spec, 512));
  const FrequencyGrid gi = c.grid_i.value_or(default_jsa_grid(spec, 512));
  const SchmidtDecomposition d = decompose(spec, gs, gi, c.n_modes);
  double sum = 0.0;
  for (double l : d.lambdas) sum += l;
  out.summary()["lambdas"] = d.lambdas;
  out.summary()["lambda_sum"] = sum;
  out.summary()["entropy"] = entropy(d);
  out.summary()["warnings"] = d.warnings;
  const auto modes = [&](const std::vector<CVector>& m, const FrequencyGrid& g) {
    return [&, mp = &m, gp = &g](std::ostream& o) {
      write_csv_header(o, out.stamp(), {"mode", "omega", "re", "im"});
      for (std::size_t n = 0; n < mp->size(); ++n)
        for (std::size_t k = 0; k < gp->points; ++k)
          o << n + 1 << ',' << format_number(gp->at(k)) << ',' << format_number((*mp)[n][k].real()) << ','
            << format_number((*mp)[n][k].imag()) << '\n';
    };
  };
  out.csv_file("schmidt_signal_modes.csv", modes(d.signal_modes, d.grid_s));
  out.csv_file("schmidt_idler_modes.csv", modes(d.idler_modes, d.grid_i));
  return out.finish("schmidt.json");
}

RunResult do_codes(const Config& c, const fs::path& dir) {
  Output out(c, dir, "codes");
  const CVector cv = make_c(c.code);
  const CodeMatrix code = alamouti_n(cv, c.code.n);
  const Eigen::MatrixXcd gm = gram(code);
  json zeros = json::array();
  const double scale = gm.cwiseAbs().maxCoeff();
  for (Eigen::Index a = 0; a < gm.rows(); ++a)
    for (Eigen::Index b = a + 1; b < gm.cols(); ++b)
      if (std::abs(gm(a, b)) <= 1e-12 * scale) zeros.push_back({a + 1, b + 1});
  json cj = json::array();
  for (const auto& z : cv) cj.push_back(complex_json(z));
  out.summary()["c"] = cj;
  out.summary()["code"] = matrix_json(code);
  out.summary()["gram"] = matrix_json(gm);
  out.summary()["orthogonal_column_pairs"] = zeros;
  return out.finish("codes.json");
}

RunResult do_single(const Config& c, const fs::path& dir) {
  Output out(c, dir, "single-channel");
  const CodeMatrix code = alamouti_n(make_c(c.code), c.code.n);
  const G2Matrix g = single_channel_matrix(c, code, c.bin_width);
  write_matrix_outputs(out, g, "g2(0), N = " + std::to_string(c.code.n));
  out.summary()["mode"] = c.mode;
  out.summary()["dimension"] = g.dimension();
  out.summary()["contrast"] = contrast_json(contrasts(g));
  return out.finish("contrast.json");
}

RunResult do_sweep(const Config& c, const fs::path& dir) {
  Output out(c, dir, "sweep");
  if (c.sweep_variable.empty()) throw ConfigError("config.sweep.variable: required (h or delta)");
  if (c.sweep_values.empty()) throw ConfigError("config.sweep: the sweep range is empty");
  const std::vector<double> taus = c.series_tau.empty() ? std::vector<double>{c.physical.tau} : c.series_tau;
  const std::vector<std::size_t> ns = c.series_n.empty() ? std::vector<std::size_t>{c.code.n} : c.series_n;
  struct Row {
    std::size_t n;
    double tau, x;
    ContrastReport r;
  };
  std::vector<Row> rows;
  for (std::size_t n : ns) {
    if (!is_power_of_two(n)) throw ConfigError("config.sweep.series_n: entries must be powers of two");
    for (double tau : taus) {
      if (!(tau > 0.0)) throw ConfigError("config.sweep.series_tau: entries must be > 0");
      Config cc = c;
      cc.physical.tau = tau;
      cc.code.n = n;
      if (!c.offsets.empty() && c.offsets.size() != n) cc.offsets.clear();
      for (double x : c.sweep_values) {
        double bin = c.bin_width;
        if (c.sweep_variable == "h") {
          if (!(x > 0.0)) throw ConfigError("config.sweep.values: h must be > 0");
          cc.code = CodeVectorSpec::linear(n, x);
        } else {
          if (!(x > 0.0)) throw ConfigError("config.sweep.values: delta must be > 0");
          bin = x;
        }
        const CodeMatrix code = alamouti_n(make_c(cc.code), n);
        rows.push_back({n, tau, x, contrasts(single_channel_matrix(cc, code, bin))});
      }
    }
  }
  out.csv_file("sweep.csv", [&](std::ostream& o) {
    write_csv_header(o, out.stamp(), {"n", "tau", c.sweep_variable, "V", "C_od"});
    for (const auto& r : rows)
      o << r.n << ',' << format_number(r.tau) << ',' << format_number(r.x) << ',' << format_number(r.r.v) << ','
        << format_number(r.r.c_od) << '\n';
  });
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"n", r.n}, {"tau", r.tau}, {c.sweep_variable, r.x}, {"v", r.r.v}, {"c_od", r.r.c_od}});
  out.summary()["variable"] = c.sweep_variable;
  out.summary()["mode"] = c.mode;
  out.summary()["rows"] = arr;
  return out.finish("sweep.json");
}

ChannelLayout layout_from(const Config& c) {
  ChannelLayout l = c.cells ? make_layout(c.layout_r, c.layout_m, *c.cells, c.layout_bin)
                            : staircase(c.layout_r, c.layout_m, c.layout_bin);
  l.enumeration = c.enumeration;
  return l;
}

json report_json(const ValidationReport& r) {
  json comps = json::array();
  for (const auto& comp : r.components) comps.push_back({{"nodes", comp.nodes}, {"edges", comp.edges}, {"dof", comp.dof}});
  return {{"valid", r.valid}, {"dof", r.dof},           {"components", comps},
          {"cycle", r.cycle}, {"violations", r.violations}, {"warnings", r.warnings}};
}

RunResult do_multichannel(const Config& c, const fs::path& dir) {
  Output out(c, dir, "multi-channel");
  const ChannelLayout layout = layout_from(c);
  const ValidationReport rep = validate(layout, c.physical.tau);
  const std::uint64_t dim = dimension(layout);
  CodeVectorSpec spec = c.code;
  spec.n = layout.m;
  const CodeMatrix code = alamouti_n(make_c(spec), layout.m);
  const double unit = unit_g2(c.physical);

  LevelSummary levels;
  std::optional<G2Matrix> full;
  if (c.mode == "ideal") {
    levels = level_summary_ideal_multi(code, layout.r, unit, c.normalization);
    if (dim <= kFullMatrixLimit) full = g2_matrix_ideal_multi(code, layout.r, unit, c.normalization);
  } else {
    if (dim > 256) throw ConfigError("config.mode: numeric multi-channel runs are limited to M^R <= 256");
    const std::size_t d = static_cast<std::size_t>(dim);
    G2Matrix g;
    g.r_channels = layout.r;
    g.m_per_channel = layout.m;
    g.values.resize(d, d);
    const auto words = [&](std::size_t idx, bool decode) {
      std::vector<CVector> w(layout.r);
      for (std::size_t ch = layout.r; ch-- > 0;) {
        const CVector col = codeword(code, idx % layout.m);
        w[ch] = decode ? matched_decode(col) : col;
        idx /= layout.m;
      }
      return w;
    };
    parallel_for(d * d, [&](std::size_t k) {
      g.values(k / d, k % d) = g2_numeric_layout(layout, c.physical, words(k / d, false), words(k % d, true), c.numeric);
    });
    levels = level_summary(g, 1e-9);
    full = std::move(g);
  }
  const ContrastReport cr = full ? contrasts(*full, layout.r) : contrasts(levels);
  if (full) write_matrix_outputs(out, *full, "g2(0), R = " + std::to_string(layout.r) + ", M = " + std::to_string(layout.m));
  out.csv_file("levels.csv", [&](std::ostream& o) {
    write_csv_header(o, out.stamp(), {"matched_channels", "value", "multiplicity"});
    for (const auto& l : levels.levels) o << l.matched_channels << ',' << format_number(l.value) << ',' << l.multiplicity << '\n';
  });
  std::set<std::size_t> classes;
  for (const auto& l : levels.levels) classes.insert(l.matched_channels);
  out.summary()["layout"] = report_json(rep);
  out.summary()["delta_r"] = layout.delta_r();
  out.summary()["dimension"] = dim;
  out.summary()["full_matrix_written"] = full.has_value();
  out.summary()["matched_level_classes"] = classes.size();
  out.summary()["levels"] = levels_json(levels);
  out.summary()["contrast"] = contrast_json(cr);
  out.summary()["normalization"] = c.normalization == LambdaNormalization::kGlobal ? "global" : "per-channel";
  return out.finish("contrast.json");
}

RunResult do_validate_layout(const Config& c, const fs::path& dir) {
  Output out(c, dir, "validate-layout");
  const ChannelLayout layout = layout_from(c);
  const ValidationReport rep = inspect(layout, c.physical.tau);
  out.summary()["report"] = report_json(rep);
  if (rep.valid) out.summary()["dimension"] = dimension(layout);
  RunResult r = out.finish("layout.json");
  if (!rep.valid) {
    r.exit_code = kExitValidation;
    r.error = rep.violations.front();
  }
  return r;
}

RunResult do_dynamics(const Config& c, const fs::path& dir) {
  Output out(c, dir, "dynamics-check");
  const DynamicsComparison cmp = compare_dynamics(c.drive, c.mode_grids, c.dyn);
  out.summary()["shape_deviation"] = cmp.shape_deviation;
  out.summary()["peak_ratio"] = cmp.peak_ratio;
  out.summary()["max_abs_d"] = cmp.max_abs_d;
  out.summary()["tracking"] = {{"a_error", cmp.tracking.a_error},
                               {"b_error", cmp.tracking.b_error},
                               {"b_magnitude_error", cmp.tracking.b_magnitude_error}};
  out.summary()["warnings"] = cmp.warnings;
  out.summary()["notes"] = cmp.notes;
  const auto ws = cmp.grids.signal.values();
  const auto wi = cmp.grids.idler.values();
  out.csv_file("dsi.csv", [&](std::ostream& o) {
    write_csv_header(o, out.stamp(), {"omega_s", "omega_i", "numeric_shape", "analytic_shape"});
    for (std::size_t s = 0; s < ws.size(); ++s)
      for (std::size_t i = 0; i < wi.size(); ++i)
        o << format_number(ws[s]) << ',' << format_number(wi[i]) << ',' << format_number(cmp.numeric_shape(s, i)) << ','
          << format_number(cmp.analytic_shape(s, i)) << '\n';
  });
  return out.finish("dynamics.json");
}

int classify(const std::exception& e) {
  if (dynamic_cast<const UnderResolvedGrid*>(&e) || dynamic_cast<const DegenerateMatrix*>(&e) ||
      dynamic_cast<const StepFailure*>(&e) || dynamic_cast<const NotConverged*>(&e) ||
      dynamic_cast<const Overflow*>(&e))
    return kExitNumeric;
  if (dynamic_cast<const Error*>(&e)) return kExitValidation;
  return kExitNumeric;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"jsa",           "schmidt",      "codes",          "single-channel",
                                              "sweep",         "multi-channel", "validate-layout", "dynamics-check"};
  return names;
}

RunResult run_command(const std::string& subcommand, const std::string& config_text, const fs::path& out_dir) {
  try {
    const Config c = parse_config(config_text);
    if (subcommand == "jsa") return do_jsa(c, out_dir);
    if (subcommand == "schmidt") return do_schmidt(c, out_dir);
    if (subcommand == "codes") return do_codes(c, out_dir);
    if (subcommand == "single-channel") return do_single(c, out_dir);
    if (subcommand == "sweep") return do_sweep(c, out_dir);
    if (subcommand == "multi-channel") return do_multichannel(c, out_dir);
    if (subcommand == "validate-layout") return do_validate_layout(c, out_dir);
    if (subcommand == "dynamics-check") return do_dynamics(c, out_dir);
    throw ConfigError("unknown subcommand " + subcommand);
  } catch (const std::exception& e) {
    RunResult r;
    r.exit_code = classify(e);
    r.error = e.what();
    if (const auto* cyc = dynamic_cast<const CycleDetected*>(&e)) r.summary = json{{"cycle", cyc->cycle()}}.dump(2);
    return r;
  }
}

RunResult run_single_channel(const std::string& config_text, const fs::path& out_dir) {
  return run_command("single-channel", config_text, out_dir);
}
RunResult run_sweep(const std::string& config_text, const fs::path& out_dir) {
  return run_command("sweep", config_text, out_dir);
}
RunResult run_multichannel(const std::string& config_text, const fs::path& out_dir) {
  return run_command("multi-channel", config_text, out_dir);
}
RunResult run_dynamics_check(const std::string& config_text, const fs::path& out_dir) {
  return run_command("dynamics-check", config_text, out_dir);
}

}  // namespace specode
