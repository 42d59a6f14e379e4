// Experiment harness: single runs, convergence studies and equilibrium
// preservation checks for the solver library, driven by flat key-value
// configs or named presets. See docs/config-schema.md for every key.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cat/driver.hpp"
#include "cat/driver2d.hpp"
#include "cat/models.hpp"

namespace fs = std::filesystem;
using namespace cat;

// ---------------------------------------------------------------------------
// configuration

struct Config {
  std::map<std::string, std::string> kv;

  bool has(const std::string& k) const { return kv.count(k) != 0; }
  void set(const std::string& k, const std::string& v) { kv[k] = v; }

  std::string str(const std::string& k, const std::string& def = "") const {
    auto it = kv.find(k);
    return it == kv.end() ? def : it->second;
  }
  std::string require(const std::string& k) const {
    auto it = kv.find(k);
    if (it == kv.end()) throw ConfigError("missing required key '" + k + "'");
    return it->second;
  }
  double num(const std::string& k, double def) const {
    auto it = kv.find(k);
    if (it == kv.end()) return def;
    try {
      std::size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("key '" + k + "': cannot parse number from '" +
                        it->second + "'");
    }
  }
  int integer(const std::string& k, int def) const {
    const double v = num(k, def);
    if (v != (int)v)
      throw ConfigError("key '" + k + "': expected an integer");
    return (int)v;
  }
  bool flag(const std::string& k, bool def) const {
    auto it = kv.find(k);
    if (it == kv.end()) return def;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("key '" + k + "': expected true/false, got '" +
                      it->second + "'");
  }
  std::vector<int> intlist(const std::string& k) const {
    std::vector<int> out;
    std::stringstream ss(require(k));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        out.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw ConfigError("key '" + k + "': bad integer '" + tok + "'");
      }
    }
    if (out.empty()) throw ConfigError("key '" + k + "': empty list");
    return out;
  }
  std::vector<std::string> strlist(const std::string& k) const {
    std::vector<std::string> out;
    std::stringstream ss(require(k));
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
  }
};

static void load_config_file(Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw ConfigError(path + ":" + std::to_string(ln) +
                          ": expected 'key = value'");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string k = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (k.empty())
      throw ConfigError(path + ":" + std::to_string(ln) + ": empty key");
    cfg.set(k, v);
  }
}

static void apply_override(Config& cfg, const std::string& ov) {
  const auto eq = ov.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + ov + "' is not key=value");
  cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
}

// ---------------------------------------------------------------------------
// presets

struct Preset {
  std::string description;
  std::vector<std::pair<std::string, std::string>> kv;
};

static const std::map<std::string, Preset>& presets() {
  static const std::map<std::string, Preset> table = {
      {"test-7.1.1",
       {"linear balance law, smooth profile, fixed-order schemes",
        {{"model", "linear"},
         {"grid.a", "-0.2"},
         {"grid.b", "2"},
         {"grid.n", "81"},
         {"init", "smooth-transition"},
         {"bc.left", "dirichlet-exact"},
         {"bc.right", "free"},
         {"t.end", "1"},
         {"scheme.cfl", "0.9"},
         {"scheme", "cat2"},
         {"schemes", "cat2,cat4,wbcat2,wbcat4"},
         {"convergence.meshes", "11,21,41,81,161"},
         {"reference", "exact"}}}},
      {"test-7.1.1-adaptive",
       {"linear balance law, smooth profile, order-adaptive schemes",
        {{"model", "linear"},
         {"grid.a", "-0.2"},
         {"grid.b", "2"},
         {"grid.n", "81"},
         {"init", "smooth-transition"},
         {"bc.left", "dirichlet-exact"},
         {"bc.right", "free"},
         {"t.end", "1"},
         {"scheme.cfl", "0.9"},
         {"scheme", "acat2"},
         {"schemes", "acat2,acat4,wbacat2,wbacat4"},
         {"convergence.meshes", "31,61,121,241,481,961"},
         {"reference", "exact"}}}},
      {"test-7.2.1",
       {"burgers with oscillatory potential, stationary initial data",
        {{"model", "burgers"},
         {"model.amp", "0.1"},
         {"model.freq", "10"},
         {"grid.a", "-1"},
         {"grid.b", "1"},
         {"grid.n", "100"},
         {"init", "stationary"},
         {"bc.left", "dirichlet-stationary"},
         {"bc.right", "dirichlet-stationary"},
         {"t.end", "8"},
         {"scheme.cfl", "0.9"},
         {"scheme", "wbacat2"},
         {"schemes", "acat2,acat4,wbacat2,wbacat4"},
         {"convergence.meshes", "100,200,400,800,1600"},
         {"reference", "stationary"}}}},
      {"test-7.2.2",
       {"burgers, perturbed stationary state, fine-mesh reference",
        {{"model", "burgers"},
         {"model.amp", "0.1"},
         {"model.freq", "10"},
         {"grid.a", "-1"},
         {"grid.b", "1"},
         {"grid.n", "200"},
         {"init", "stationary-perturbed"},
         {"init.pert.amplitude", "0.2"},
         {"init.pert.center", "-0.7"},
         {"init.pert.width", "200"},
         {"bc.left", "dirichlet-stationary"},
         {"bc.right", "free"},
         {"t.end", "0.2"},
         {"scheme.cfl", "0.9"},
         {"scheme", "wbacat2"},
         {"schemes", "acat2,acat4,wbacat2,wbacat4"},
         {"convergence.meshes", "80,160,320,640,1280"},
         {"reference", "fine"},
         {"reference.scheme", "wbacat4"},
         {"reference.n", "5120"}}}},
      {"test-7.2.3",
       {"burgers with mesh-scale oscillatory potential, stationary data",
        {{"model", "burgers"},
         {"model.amp", "0.1"},
         {"model.freq", "100"},
         {"grid.a", "-1"},
         {"grid.b", "1"},
         {"grid.n", "100"},
         {"init", "stationary"},
         {"bc.left", "dirichlet-stationary"},
         {"bc.right", "dirichlet-stationary"},
         {"t.end", "1"},
         {"scheme.cfl", "0.9"},
         {"scheme", "wbacat2"},
         {"schemes", "acat2,acat4,wbacat2,wbacat4"},
         {"convergence.meshes", "100"},
         {"reference", "stationary"}}}},
      {"test-7.2.4",
       {"burgers with linear potential, smooth transition data",
        {{"model", "burgers"},
         {"model.amp", "0"},
         {"model.freq", "10"},
         {"grid.a", "-0.2"},
         {"grid.b", "2"},
         {"grid.n", "80"},
         {"init", "smooth-transition"},
         {"bc.left", "free"},
         {"bc.right", "free"},
         {"t.end", "0.5"},
         {"scheme.cfl", "0.9"},
         {"scheme", "wbacat2"},
         {"schemes", "acat2,acat4,wbacat2,wbacat4"},
         {"convergence.meshes", "80,160,320,640,1280"},
         {"reference", "fine"},
         {"reference.scheme", "wbacat4"},
         {"reference.n", "2560"}}}},
      {"test-7.3.1",
       {"shallow water, subcritical stationary state over a bump",
        {{"model", "shallow-water"},
         {"grid.a", "-3"},
         {"grid.b", "3"},
         {"grid.n", "200"},
         {"sw.anchor.h", "2"},
         {"sw.anchor.q", "2.5"},
         {"sw.anchor.x", "-3"},
         {"init", "stationary"},
         {"bc.left", "dirichlet-stationary"},
         {"bc.right", "dirichlet-stationary"},
         {"t.end", "4"},
         {"scheme.cfl", "0.8"},
         {"scheme", "wbacat2"},
         {"schemes", "wbacat2,wbacat4"},
         {"convergence.meshes", "50,100,200,400"},
         {"reference", "stationary"}}}},
      {"test-7.3.2",
       {"shallow water, perturbed subcritical state, fine-mesh reference",
        {{"model", "shallow-water"},
         {"grid.a", "-3"},
         {"grid.b", "3"},
         {"grid.n", "200"},
         {"sw.anchor.h", "2"},
         {"sw.anchor.q", "2.5"},
         {"sw.anchor.x", "-3"},
         {"init", "stationary-perturbed"},
         {"init.pert.amplitude", "0.006"},
         {"init.pert.center", "-1"},
         {"init.pert.width", "20"},
         {"bc.left", "dirichlet-stationary"},
         {"bc.right", "dirichlet-stationary"},
         {"t.end", "0.15"},
         {"scheme.cfl", "0.8"},
         {"scheme", "wbacat2"},
         {"schemes", "acat2,acat4,wbacat2,wbacat4"},
         {"convergence.meshes", "50,100,200,400,800"},
         {"reference", "fine"},
         {"reference.scheme", "wbacat4"},
         {"reference.n", "4000"}}}},
      {"test-7.3.3",
       {"shallow water, flat bottom, smooth transition data",
        {{"model", "shallow-water"},
         {"model.flat", "true"},
         {"grid.a", "-2"},
         {"grid.b", "4"},
         {"grid.n", "200"},
         {"init", "smooth-transition"},
         {"init.offset", "1"},
         {"bc.left", "free"},
         {"bc.right", "free"},
         {"t.end", "0.1"},
         {"scheme.cfl", "0.9"},
         {"scheme", "wbacat2"},
         {"schemes", "acat2,acat4,wbacat2,wbacat4"},
         {"convergence.meshes", "200,400,800,1600"},
         {"reference", "fine"},
         {"reference.scheme", "wbacat4"},
         {"reference.n", "3200"}}}},
      {"test-7.4",
       {"2d euler with gravity, hydrostatic stationary state",
        {{"model", "euler"},
         {"model.potential", "linear"},
         {"grid.ax", "0"},
         {"grid.bx", "1"},
         {"grid.ay", "0"},
         {"grid.by", "1"},
         {"grid.nx", "21"},
         {"grid.ny", "21"},
         {"init", "stationary"},
         {"bc.left", "dirichlet-stationary"},
         {"bc.right", "dirichlet-stationary"},
         {"bc.bottom", "dirichlet-stationary"},
         {"bc.top", "dirichlet-stationary"},
         {"t.end", "0.3"},
         {"scheme.cfl", "0.9"},
         {"scheme", "wbacat2"},
         {"schemes", "acat2,acat4,wbacat2,wbacat4"},
         {"convergence.meshes", "21,41,81,161"},
         {"reference", "stationary"}}}},
      {"test-7.5",
       {"2d euler with gravity, perturbed hydrostatic state",
        {{"model", "euler"},
         {"model.potential", "well-a"},
         {"grid.ax", "0"},
         {"grid.bx", "1"},
         {"grid.ay", "0"},
         {"grid.by", "1"},
         {"grid.nx", "41"},
         {"grid.ny", "41"},
         {"init", "stationary-perturbed"},
         {"init.pert.amplitude", "0.008"},
         {"init.pert.x", "0.5"},
         {"init.pert.y", "0.5"},
         {"init.pert.width", "200"},
         {"bc.left", "dirichlet-stationary"},
         {"bc.right", "dirichlet-stationary"},
         {"bc.bottom", "dirichlet-stationary"},
         {"bc.top", "dirichlet-stationary"},
         {"t.end", "0.2"},
         {"scheme.cfl", "0.9"},
         {"scheme", "wbacat4"},
         {"schemes", "acat2,acat4,wbacat2,wbacat4"},
         {"convergence.meshes", "21,41,81"},
         {"reference", "fine"},
         {"reference.scheme", "wbacat4"},
         {"reference.n", "161"}}}},
      {"test-7.6",
       {"2d euler, acoustic pulse near a singular potential",
        {{"model", "euler"},
         {"model.potential", "well-b"},
         {"grid.ax", "0"},
         {"grid.bx", "2"},
         {"grid.ay", "0"},
         {"grid.by", "2"},
         {"grid.nx", "101"},
         {"grid.ny", "101"},
         {"init", "stationary-perturbed"},
         {"init.pert.amplitude", "1e-6"},
         {"init.pert.x", "1"},
         {"init.pert.y", "1"},
         {"init.pert.width", "200"},
         {"bc.left", "dirichlet-stationary"},
         {"bc.right", "dirichlet-stationary"},
         {"bc.bottom", "dirichlet-stationary"},
         {"bc.top", "dirichlet-stationary"},
         {"t.end", "0.75"},
         {"scheme.cfl", "0.8"},
         {"scheme", "wbacat2"},
         {"schemes", "wbacat2,acat2"},
         {"reference", "stationary"}}}},
  };
  return table;
}

// ---------------------------------------------------------------------------
// scheme tokens

struct SchemeSpec {
  std::string name;
  SchemeKind kind = SchemeKind::cat;
  int P = 1;
};

static SchemeSpec parse_scheme_token(const std::string& tok) {
  SchemeSpec s;
  s.name = tok;
  if (tok == "lf") {
    s.kind = SchemeKind::lf;
    return s;
  }
  if (tok == "wblf") {
    s.kind = SchemeKind::wblf;
    return s;
  }
  std::string base = tok;
  int order = 0;
  const auto d = tok.find_first_of("0123456789");
  if (d != std::string::npos) {
    base = tok.substr(0, d);
    order = std::stoi(tok.substr(d));
  }
  if (base == "cat")
    s.kind = SchemeKind::cat;
  else if (base == "wbcat")
    s.kind = SchemeKind::wbcat;
  else if (base == "acat")
    s.kind = SchemeKind::acat;
  else if (base == "wbacat")
    s.kind = SchemeKind::wbacat;
  else
    throw ConfigError("unknown scheme '" + tok + "'");
  if (order <= 0 || order % 2 != 0 || order / 2 > kMaxP)
    throw ConfigError("scheme '" + tok + "': order must be 2, 4 or 6");
  s.P = order / 2;
  return s;
}

static SchemeConfig make_scheme_config(const Config& cfg,
                                       const SchemeSpec& spec, int jobs) {
  SchemeConfig sc;
  sc.kind = spec.kind;
  sc.P = spec.P;
  sc.cfl = cfg.num("scheme.cfl", 0.9);
  sc.threshold = cfg.num("scheme.threshold", 0.9);
  sc.eps = cfg.num("scheme.eps", -1.0);
  sc.pin_indicators = cfg.flag("scheme.pinned", false);
  sc.jobs = jobs;
  const std::string lim = cfg.str("scheme.limiter", "minmod");
  if (lim == "minmod")
    sc.limiter.kind = LimiterKind::minmod;
  else if (lim == "superbee")
    sc.limiter.kind = LimiterKind::superbee;
  else if (lim == "vanleer")
    sc.limiter.kind = LimiterKind::vanleer;
  else
    throw ConfigError("scheme.limiter: unknown limiter '" + lim + "'");
  return sc;
}

// ---------------------------------------------------------------------------
// output helpers

struct Output {
  fs::path dir;
  std::string prefix;
  bool dry = false;

  fs::path path(const std::string& suffix) const {
    return dir / (prefix + "-" + suffix);
  }
  // atomic write: temp file in the same directory, then rename
  void write(const std::string& suffix, const std::string& body) const {
    if (dry) return;
    fs::create_directories(dir);
    const fs::path target = path(suffix);
    const fs::path tmp = target.string() + ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      out << body;
    }
    fs::rename(tmp, target);
    std::printf("wrote %s\n", target.string().c_str());
  }
};

static std::string format_config(const Config& cfg) {
  std::ostringstream os;
  for (const auto& [k, v] : cfg.kv) os << k << " = " << v << "\n";
  return os.str();
}

// every output embeds the fully resolved configuration as comment lines
static std::string config_header(const Config& cfg) {
  std::ostringstream os;
  for (const auto& [k, v] : cfg.kv) os << "# " << k << " = " << v << "\n";
  return os.str();
}

static void check_doubling(const std::vector<int>& meshes) {
  for (std::size_t i = 1; i < meshes.size(); ++i) {
    const int a = meshes[i - 1], b = meshes[i];
    // either cell-doubling (n -> 2n) or node-doubling on a shared closed
    // interval (n -> 2n-1) is accepted
    if (b != 2 * a && b != 2 * a - 1)
      throw ConfigError(
          "convergence.meshes: mesh " + std::to_string(b) +
          " does not double its predecessor " + std::to_string(a));
  }
}

// ---------------------------------------------------------------------------
// 1D problems

template <typename M>
struct Problem1D {
  using State = typename M::State;
  M model;
  double a = 0.0, b = 1.0;
  std::function<State(double)> init;
  std::function<State(double, double)> exact;  // (x, t); null if unavailable
  std::function<State(double)> baseline;       // stationary profile, or null
  std::vector<std::string> vars;
  std::vector<std::pair<std::string, std::function<double(const State&, double)>>>
      derived;
};

template <typename M>
Boundary1D<typename M::State> make_boundary1d(const Config& cfg,
                                              const Problem1D<M>& pb) {
  using State = typename M::State;
  Boundary1D<State> bc;
  auto side = [&](const std::string& key, BcKind& kind,
                  std::function<State(double, double)>& value) {
    const std::string v = cfg.str(key, "free");
    if (v == "free")
      kind = BcKind::free;
    else if (v == "periodic")
      kind = BcKind::periodic;
    else if (v == "dirichlet-exact") {
      if (!pb.exact)
        throw ConfigError(key + ": no exact solution for this setup");
      kind = BcKind::dirichlet;
      value = pb.exact;
    } else if (v == "dirichlet-stationary") {
      if (!pb.baseline)
        throw ConfigError(key + ": no stationary profile for this setup");
      kind = BcKind::dirichlet;
      value = [f = pb.baseline](double x, double) { return f(x); };
    } else
      throw ConfigError(key + ": unknown boundary kind '" + v + "'");
  };
  side("bc.left", bc.left, bc.left_value);
  side("bc.right", bc.right, bc.right_value);
  return bc;
}

template <typename M>
RunResult<typename M::State> run1d(const Config& cfg, const Problem1D<M>& pb,
                                   const SchemeSpec& spec, int N, int jobs) {
  using State = typename M::State;
  const SchemeConfig sc = make_scheme_config(cfg, spec, jobs);
  Grid1D g{pb.a, pb.b, N};
  Field1D<State> u0(N, ghost_width(sc));
  for (int i = 0; i < N; ++i) u0(i) = pb.init(g.x(i));
  const Boundary1D<State> bc = make_boundary1d(cfg, pb);
  return advance(pb.model, g, std::move(u0), bc, sc, cfg.num("t.end", 1.0));
}

// reference field on a coarse mesh: exact, stationary, or a fine run
template <typename M>
struct Reference1D {
  std::string kind;
  std::optional<Field1D<typename M::State>> fine;
  Grid1D fine_grid{0.0, 1.0, 2};

  static Reference1D build(const Config& cfg, const Problem1D<M>& pb,
                           int jobs) {
    Reference1D r;
    r.kind = cfg.str("reference", "none");
    if (r.kind == "exact") {
      if (!pb.exact) throw ConfigError("reference=exact: not available");
    } else if (r.kind == "stationary") {
      if (!pb.baseline) throw ConfigError("reference=stationary: no profile");
    } else if (r.kind == "fine") {
      const SchemeSpec spec =
          parse_scheme_token(cfg.str("reference.scheme", "wbacat4"));
      const int n = cfg.integer("reference.n", 0);
      if (n < 8) throw ConfigError("reference.n: need a fine mesh size");
      auto res = run1d(cfg, pb, spec, n, jobs);
      r.fine = std::move(res.state);
      r.fine_grid = Grid1D{pb.a, pb.b, n};
    } else if (r.kind != "none") {
      throw ConfigError("reference: unknown kind '" + r.kind + "'");
    }
    return r;
  }

  std::optional<ErrorNorms<M::n>> errors(const Problem1D<M>& pb,
                                         const Field1D<typename M::State>& u,
                                         const Grid1D& g, double t) const {
    if (kind == "exact")
      return error_norms_exact(
          u, [&](double x) { return pb.exact(x, t); }, g);
    if (kind == "stationary")
      return error_norms_exact(
          u, [&](double x) { return pb.baseline(x); }, g);
    if (kind == "fine") {
      if ((fine_grid.N - 1) % (g.N - 1) == 0)
        return error_norms(u, restrict_field(*fine, fine_grid, g), g);
      return error_norms(u, sample_field(*fine, fine_grid, g), g);
    }
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// 2D problems (euler only for now)

template <typename M>
struct Problem2D {
  using State = typename M::State;
  M model;
  double ax = 0.0, bx = 1.0, ay = 0.0, by = 1.0;
  std::function<State(double, double)> init;
  std::function<State(double, double)> baseline;
  std::vector<std::string> vars;
};

template <typename M>
Boundary2D<typename M::State> make_boundary2d(const Config& cfg,
                                              const Problem2D<M>& pb) {
  using State = typename M::State;
  Boundary2D<State> bc;
  auto side = [&](const std::string& key, BcKind& kind,
                  std::function<State(double, double, double)>& value) {
    const std::string v = cfg.str(key, "free");
    if (v == "free")
      kind = BcKind::free;
    else if (v == "periodic")
      kind = BcKind::periodic;
    else if (v == "dirichlet-stationary") {
      if (!pb.baseline)
        throw ConfigError(key + ": no stationary profile for this setup");
      kind = BcKind::dirichlet;
      value = [f = pb.baseline](double x, double y, double) { return f(x, y); };
    } else
      throw ConfigError(key + ": unknown boundary kind '" + v + "'");
  };
  side("bc.left", bc.left, bc.left_value);
  side("bc.right", bc.right, bc.right_value);
  side("bc.bottom", bc.bottom, bc.bottom_value);
  side("bc.top", bc.top, bc.top_value);
  return bc;
}

template <typename M>
RunResult2D<typename M::State> run2d(const Config& cfg, const Problem2D<M>& pb,
                                     const SchemeSpec& spec, int N, int jobs) {
  using State = typename M::State;
  const SchemeConfig sc = make_scheme_config(cfg, spec, jobs);
  Grid2D g{pb.ax, pb.bx, pb.ay, pb.by, N, N};
  Field2D<State> u0(N, N, ghost_width(sc));
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) u0(i, j) = pb.init(g.x(i), g.y(j));
  const Boundary2D<State> bc = make_boundary2d(cfg, pb);
  return advance2d(pb.model, g, std::move(u0), bc, sc, cfg.num("t.end", 1.0));
}

template <typename M>
struct Reference2D {
  std::string kind;
  std::optional<Field2D<typename M::State>> fine;
  Grid2D fine_grid{0, 1, 0, 1, 2, 2};

  static Reference2D build(const Config& cfg, const Problem2D<M>& pb,
                           int jobs) {
    Reference2D r;
    r.kind = cfg.str("reference", "none");
    if (r.kind == "stationary") {
      if (!pb.baseline) throw ConfigError("reference=stationary: no profile");
    } else if (r.kind == "fine") {
      const SchemeSpec spec =
          parse_scheme_token(cfg.str("reference.scheme", "wbacat4"));
      const int n = cfg.integer("reference.n", 0);
      if (n < 8) throw ConfigError("reference.n: need a fine mesh size");
      auto res = run2d(cfg, pb, spec, n, jobs);
      r.fine = std::move(res.state);
      r.fine_grid = Grid2D{pb.ax, pb.bx, pb.ay, pb.by, n, n};
    } else if (r.kind != "none" && r.kind != "exact") {
      throw ConfigError("reference: unknown kind '" + r.kind + "'");
    }
    return r;
  }

  std::optional<ErrorNorms<M::n>> errors(const Problem2D<M>& pb,
                                         const Field2D<typename M::State>& u,
                                         const Grid2D& g) const {
    if (kind == "stationary")
      return error_norms2d_exact(
          u, [&](double x, double y) { return pb.baseline(x, y); }, g);
    if (kind == "fine")
      return error_norms2d(u, restrict_field2d(*fine, fine_grid, g), g);
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// model setups

static Problem1D<LinearModel> build_linear(const Config& cfg) {
  Problem1D<LinearModel> pb;
  pb.a = cfg.num("grid.a", -0.2);
  pb.b = cfg.num("grid.b", 2.0);
  pb.vars = {"u"};
  const std::string init = cfg.str("init", "smooth-transition");
  if (init != "smooth-transition")
    throw ConfigError("init: linear model supports smooth-transition only");
  pb.init = [](double x) {
    return LinearModel::State{smooth_transition_profile(x)};
  };
  pb.exact = [](double x, double t) {
    return LinearModel::State{smooth_transition_profile(x - t) * std::exp(t)};
  };
  pb.baseline = [m = pb.model](double x) { return (*m.stationary(
      LinearModel::State{1.0}, 0.0))(x); };
  return pb;
}

static Problem1D<BurgersModel> build_burgers(const Config& cfg) {
  Problem1D<BurgersModel> pb;
  pb.model.amp = cfg.num("model.amp", 0.1);
  pb.model.freq = cfg.num("model.freq", 10.0);
  pb.a = cfg.num("grid.a", -1.0);
  pb.b = cfg.num("grid.b", 1.0);
  pb.vars = {"u"};
  const BurgersModel m = pb.model;
  pb.baseline = [m](double x) { return BurgersModel::State{std::exp(m.H(x))}; };
  const std::string init = cfg.str("init", "stationary");
  if (init == "stationary") {
    pb.init = pb.baseline;
    pb.exact = [f = pb.baseline](double x, double) { return f(x); };
  } else if (init == "stationary-perturbed") {
    const double A = cfg.num("init.pert.amplitude", 0.0);
    const double c = cfg.num("init.pert.center", 0.0);
    const double w = cfg.num("init.pert.width", 200.0);
    pb.init = [f = pb.baseline, A, c, w](double x) {
      auto s = f(x);
      s[0] += A * std::exp(-w * (x - c) * (x - c));
      return s;
    };
  } else if (init == "smooth-transition") {
    pb.init = [](double x) {
      return BurgersModel::State{smooth_transition_profile(x)};
    };
  } else {
    throw ConfigError("init: unknown kind '" + init + "'");
  }
  return pb;
}

static Problem1D<ShallowWaterModel> build_shallow_water(const Config& cfg) {
  Problem1D<ShallowWaterModel> pb;
  pb.model.g = cfg.num("model.g", 9.81);
  pb.model.flat = cfg.flag("model.flat", false);
  pb.a = cfg.num("grid.a", -3.0);
  pb.b = cfg.num("grid.b", 3.0);
  pb.vars = {"h", "q"};
  const ShallowWaterModel m = pb.model;
  pb.derived.push_back({"surface", [m](const ShallowWaterModel::State& s,
                                       double x) { return s[0] - m.H(x); }});
  const std::string init = cfg.str("init", "stationary");
  if (init == "smooth-transition") {
    // offset keeps the depth positive; the raw 0-to-1 ramp has a dry bed
    const double off = cfg.num("init.offset", 0.0);
    pb.init = [off](double x) {
      const double v = off + smooth_transition_profile(x);
      return ShallowWaterModel::State{v, v};
    };
    return pb;
  }
  const double h0 = cfg.num("sw.anchor.h", 2.0);
  const double q0 = cfg.num("sw.anchor.q", 2.5);
  const double x0 = cfg.num("sw.anchor.x", pb.a);
  auto prof = pb.model.stationary(ShallowWaterModel::State{h0, q0}, x0);
  if (!prof) throw ConfigError("sw.anchor: no stationary profile from anchor");
  pb.baseline = [p = *prof](double x) { return p(x); };
  if (init == "stationary") {
    pb.init = pb.baseline;
    pb.exact = [f = pb.baseline](double x, double) { return f(x); };
  } else if (init == "stationary-perturbed") {
    const double A = cfg.num("init.pert.amplitude", 0.0);
    const double c = cfg.num("init.pert.center", 0.0);
    const double w = cfg.num("init.pert.width", 20.0);
    pb.init = [f = pb.baseline, A, c, w](double x) {
      auto s = f(x);
      s[0] += A * std::exp(-w * (x - c) * (x - c));
      return s;
    };
  } else {
    throw ConfigError("init: unknown kind '" + init + "'");
  }
  return pb;
}

static Problem2D<EulerModel2D> build_euler(const Config& cfg) {
  Problem2D<EulerModel2D> pb;
  pb.model.gamma = cfg.num("model.gamma", 1.4);
  const std::string pot = cfg.str("model.potential", "linear");
  if (pot == "linear")
    pb.model.pot = EulerModel2D::Potential::linear;
  else if (pot == "well-a")
    pb.model.pot = EulerModel2D::Potential::well_a;
  else if (pot == "well-b")
    pb.model.pot = EulerModel2D::Potential::well_b;
  else
    throw ConfigError("model.potential: unknown potential '" + pot + "'");
  pb.ax = cfg.num("grid.ax", 0.0);
  pb.bx = cfg.num("grid.bx", 1.0);
  pb.ay = cfg.num("grid.ay", 0.0);
  pb.by = cfg.num("grid.by", 1.0);
  pb.vars = {"rho", "mx", "my", "E"};
  const EulerModel2D m = pb.model;
  pb.baseline = [m](double x, double y) {
    const double r = std::exp(-m.H(x, y));
    return m.from_primitive(r, 0.0, 0.0, r);
  };
  const std::string init = cfg.str("init", "stationary");
  if (init == "stationary") {
    pb.init = pb.baseline;
  } else if (init == "stationary-perturbed") {
    const double A = cfg.num("init.pert.amplitude", 0.0);
    const double cx = cfg.num("init.pert.x", 0.5);
    const double cy = cfg.num("init.pert.y", 0.5);
    const double w = cfg.num("init.pert.width", 200.0);
    pb.init = [m, A, cx, cy, w](double x, double y) {
      const double base = std::exp(-m.H(x, y));
      const double pert =
          A * std::exp(-w * (x - cx) * (x - cx) - w * (y - cy) * (y - cy));
      return m.from_primitive(base + pert, 0.0, 0.0, base + pert);
    };
  } else {
    throw ConfigError("init: unknown kind '" + init + "'");
  }
  return pb;
}

// ---------------------------------------------------------------------------
// operations, 1D

template <typename M>
void op_run_1d(const Config& cfg, const Problem1D<M>& pb, const Output& out,
               int jobs) {
  const SchemeSpec spec = parse_scheme_token(cfg.require("scheme"));
  const int N = cfg.integer("grid.n", 0);
  if (N < 4) throw ConfigError("grid.n: need at least 4 nodes");
  const Reference1D<M> ref = Reference1D<M>::build(cfg, pb, jobs);
  auto res = run1d(cfg, pb, spec, N, jobs);
  Grid1D g{pb.a, pb.b, N};

  std::ostringstream csv;
  csv << config_header(cfg) << "x";
  for (const auto& v : pb.vars) csv << "," << v;
  for (const auto& [name, fn] : pb.derived) csv << "," << name;
  if (pb.baseline)
    for (const auto& v : pb.vars) csv << ",delta_" << v;
  csv << "\n";
  for (int i = 0; i < N; ++i) {
    csv << std::setprecision(17) << g.x(i);
    const auto& s = res.state(i);
    for (std::size_t c = 0; c < pb.vars.size(); ++c) csv << "," << s[c];
    for (const auto& [name, fn] : pb.derived) csv << "," << fn(s, g.x(i));
    if (pb.baseline) {
      const auto b = pb.baseline(g.x(i));
      for (std::size_t c = 0; c < pb.vars.size(); ++c)
        csv << "," << s[c] - b[c];
    }
    csv << "\n";
  }
  out.write(spec.name + "-snapshot.csv", csv.str());

  std::ostringstream meta;
  meta << format_config(cfg);
  meta << "run.steps = " << res.dt_history.size() << "\n";
  meta << "run.final_time = " << std::setprecision(17) << res.t << "\n";
  meta << "run.seconds = " << res.seconds << "\n";
  if (auto e = ref.errors(pb, res.state, g, res.t)) {
    for (std::size_t c = 0; c < pb.vars.size(); ++c)
      meta << "error.l1." << pb.vars[c] << " = " << e->l1[c] << "\n";
    for (std::size_t c = 0; c < pb.vars.size(); ++c)
      meta << "error.linf." << pb.vars[c] << " = " << e->linf[c] << "\n";
  }
  out.write(spec.name + "-meta.txt", meta.str());
}

template <typename M>
void op_convergence_1d(const Config& cfg, const Problem1D<M>& pb,
                       const Output& out, int jobs) {
  const auto meshes = cfg.intlist("convergence.meshes");
  check_doubling(meshes);
  const Reference1D<M> ref = Reference1D<M>::build(cfg, pb, jobs);
  if (ref.kind == "none")
    throw ConfigError("convergence requires a reference (exact/stationary/fine)");
  std::vector<SchemeSpec> specs;
  for (const auto& tok : cfg.strlist("schemes"))
    specs.push_back(parse_scheme_token(tok));

  std::ostringstream csv;
  csv << config_header(cfg) << "points";
  for (const auto& sp : specs)
    for (const auto& v : pb.vars)
      csv << "," << sp.name << "_err_" << v << "," << sp.name << "_order_" << v;
  csv << "\n";

  std::vector<std::vector<ErrorNorms<M::n>>> errs(specs.size());
  for (std::size_t s = 0; s < specs.size(); ++s)
    for (int N : meshes) {
      auto res = run1d(cfg, pb, specs[s], N, jobs);
      Grid1D g{pb.a, pb.b, N};
      errs[s].push_back(*ref.errors(pb, res.state, g, res.t));
    }
  for (std::size_t k = 0; k < meshes.size(); ++k) {
    csv << meshes[k];
    for (std::size_t s = 0; s < specs.size(); ++s)
      for (std::size_t c = 0; c < pb.vars.size(); ++c) {
        csv << "," << std::setprecision(6) << errs[s][k].l1[c] << ",";
        if (k > 0)
          csv << std::setprecision(4)
              << convergence_order(errs[s][k - 1].l1[c], errs[s][k].l1[c]);
      }
    csv << "\n";
  }
  out.write("convergence.csv", csv.str());
}

template <typename M>
void op_wbcheck_1d(const Config& cfg, const Problem1D<M>& pb,
                   const Output& out, int jobs) {
  if (!pb.baseline)
    throw ConfigError("wb-check: setup has no stationary profile");
  Problem1D<M> p = pb;
  p.init = p.baseline;  // drift is measured from nodal stationary samples
  std::vector<int> meshes;
  if (cfg.has("convergence.meshes"))
    meshes = cfg.intlist("convergence.meshes");
  else
    meshes = {cfg.integer("grid.n", 0)};
  std::vector<SchemeSpec> specs;
  for (const auto& tok : cfg.strlist("schemes"))
    specs.push_back(parse_scheme_token(tok));

  std::ostringstream csv;
  csv << config_header(cfg) << "scheme,points";
  for (const auto& v : pb.vars) csv << ",drift_l1_" << v;
  for (const auto& v : pb.vars) csv << ",drift_linf_" << v;
  csv << "\n";
  for (const auto& sp : specs)
    for (int N : meshes) {
      auto res = run1d(cfg, p, sp, N, jobs);
      Grid1D g{p.a, p.b, N};
      const auto e = error_norms_exact(
          res.state, [&](double x) { return p.baseline(x); }, g);
      csv << sp.name << "," << N << std::setprecision(6);
      for (std::size_t c = 0; c < pb.vars.size(); ++c) csv << "," << e.l1[c];
      for (std::size_t c = 0; c < pb.vars.size(); ++c) csv << "," << e.linf[c];
      csv << "\n";
    }
  out.write("wbcheck.csv", csv.str());
}

// ---------------------------------------------------------------------------
// operations, 2D

template <typename M>
void op_run_2d(const Config& cfg, const Problem2D<M>& pb, const Output& out,
               int jobs) {
  const SchemeSpec spec = parse_scheme_token(cfg.require("scheme"));
  const int N = cfg.integer("grid.nx", 0);
  if (N != cfg.integer("grid.ny", N))
    throw ConfigError("grid.ny: only square meshes are supported");
  if (N < 4) throw ConfigError("grid.nx: need at least 4 nodes");
  const Reference2D<M> ref = Reference2D<M>::build(cfg, pb, jobs);
  auto res = run2d(cfg, pb, spec, N, jobs);
  Grid2D g{pb.ax, pb.bx, pb.ay, pb.by, N, N};

  std::ostringstream csv;
  csv << config_header(cfg) << "x,y";
  for (const auto& v : pb.vars) csv << "," << v;
  if (pb.baseline)
    for (const auto& v : pb.vars) csv << ",delta_" << v;
  csv << "\n";
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      csv << std::setprecision(17) << g.x(i) << "," << g.y(j);
      const auto& s = res.state(i, j);
      for (std::size_t c = 0; c < pb.vars.size(); ++c) csv << "," << s[c];
      if (pb.baseline) {
        const auto b = pb.baseline(g.x(i), g.y(j));
        for (std::size_t c = 0; c < pb.vars.size(); ++c)
          csv << "," << s[c] - b[c];
      }
      csv << "\n";
    }
  out.write(spec.name + "-snapshot.csv", csv.str());

  std::ostringstream meta;
  meta << format_config(cfg);
  meta << "run.steps = " << res.dt_history.size() << "\n";
  meta << "run.final_time = " << std::setprecision(17) << res.t << "\n";
  meta << "run.seconds = " << res.seconds << "\n";
  if (auto e = ref.errors(pb, res.state, g)) {
    for (std::size_t c = 0; c < pb.vars.size(); ++c)
      meta << "error.l1." << pb.vars[c] << " = " << e->l1[c] << "\n";
    for (std::size_t c = 0; c < pb.vars.size(); ++c)
      meta << "error.linf." << pb.vars[c] << " = " << e->linf[c] << "\n";
  }
  out.write(spec.name + "-meta.txt", meta.str());
}

template <typename M>
void op_convergence_2d(const Config& cfg, const Problem2D<M>& pb,
                       const Output& out, int jobs) {
  const auto meshes = cfg.intlist("convergence.meshes");
  check_doubling(meshes);
  const Reference2D<M> ref = Reference2D<M>::build(cfg, pb, jobs);
  if (ref.kind == "none")
    throw ConfigError("convergence requires a reference (stationary/fine)");
  std::vector<SchemeSpec> specs;
  for (const auto& tok : cfg.strlist("schemes"))
    specs.push_back(parse_scheme_token(tok));

  std::ostringstream csv;
  csv << config_header(cfg) << "points";
  for (const auto& sp : specs)
    for (const auto& v : pb.vars)
      csv << "," << sp.name << "_err_" << v << "," << sp.name << "_order_" << v;
  csv << "\n";

  std::vector<std::vector<ErrorNorms<M::n>>> errs(specs.size());
  for (std::size_t s = 0; s < specs.size(); ++s)
    for (int N : meshes) {
      auto res = run2d(cfg, pb, specs[s], N, jobs);
      Grid2D g{pb.ax, pb.bx, pb.ay, pb.by, N, N};
      errs[s].push_back(*ref.errors(pb, res.state, g));
    }
  for (std::size_t k = 0; k < meshes.size(); ++k) {
    csv << meshes[k];
    for (std::size_t s = 0; s < specs.size(); ++s)
      for (std::size_t c = 0; c < pb.vars.size(); ++c) {
        csv << "," << std::setprecision(6) << errs[s][k].l1[c] << ",";
        if (k > 0)
          csv << std::setprecision(4)
              << convergence_order(errs[s][k - 1].l1[c], errs[s][k].l1[c]);
      }
    csv << "\n";
  }
  out.write("convergence.csv", csv.str());
}

template <typename M>
void op_wbcheck_2d(const Config& cfg, const Problem2D<M>& pb,
                   const Output& out, int jobs) {
  if (!pb.baseline)
    throw ConfigError("wb-check: setup has no stationary profile");
  Problem2D<M> p = pb;
  p.init = p.baseline;
  std::vector<int> meshes;
  if (cfg.has("convergence.meshes"))
    meshes = cfg.intlist("convergence.meshes");
  else
    meshes = {cfg.integer("grid.nx", 0)};
  std::vector<SchemeSpec> specs;
  for (const auto& tok : cfg.strlist("schemes"))
    specs.push_back(parse_scheme_token(tok));

  std::ostringstream csv;
  csv << config_header(cfg) << "scheme,points";
  for (const auto& v : pb.vars) csv << ",drift_l1_" << v;
  for (const auto& v : pb.vars) csv << ",drift_linf_" << v;
  csv << "\n";
  for (const auto& sp : specs)
    for (int N : meshes) {
      auto res = run2d(cfg, p, sp, N, jobs);
      Grid2D g{p.ax, p.bx, p.ay, p.by, N, N};
      const auto e = error_norms2d_exact(
          res.state, [&](double x, double y) { return p.baseline(x, y); }, g);
      csv << sp.name << "," << N << std::setprecision(6);
      for (std::size_t c = 0; c < pb.vars.size(); ++c) csv << "," << e.l1[c];
      for (std::size_t c = 0; c < pb.vars.size(); ++c) csv << "," << e.linf[c];
      csv << "\n";
    }
  out.write("wbcheck.csv", csv.str());
}

// ---------------------------------------------------------------------------

template <typename Op1, typename Op2>
static void dispatch(const Config& cfg, Op1&& op1d, Op2&& op2d) {
  const std::string model = cfg.require("model");
  if (model == "linear")
    op1d(build_linear(cfg));
  else if (model == "burgers")
    op1d(build_burgers(cfg));
  else if (model == "shallow-water")
    op1d(build_shallow_water(cfg));
  else if (model == "euler")
    op2d(build_euler(cfg));
  else
    throw ConfigError("model: unknown model '" + model + "'");
}

int main(int argc, char** argv) {
  CLI::App app{"finite-difference balance-law experiment harness"};
  app.require_subcommand(1);

  std::string config_path, preset_name, out_dir = "out";
  std::vector<std::string> overrides;
  int jobs = 1;
  bool dry = false;
  for (auto* sub : {app.add_subcommand("run", "single simulation + snapshot"),
                    app.add_subcommand("convergence", "mesh refinement study"),
                    app.add_subcommand("wb-check",
                                       "stationary-state drift check")}) {
    sub->add_option("--config", config_path, "key-value config file");
    sub->add_option("--preset", preset_name, "named built-in preset");
    sub->add_option("--override", overrides, "key=value override (repeatable)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "worker threads per step");
    sub->add_flag("--dry-run", dry, "print resolved config, write nothing");
  }
  app.add_subcommand("list-presets", "list built-in presets");

  CLI11_PARSE(app, argc, argv);
  const std::string verb = app.get_subcommands().front()->get_name();

  try {
    if (verb == "list-presets") {
      for (const auto& [name, p] : presets())
        std::printf("%-22s %s\n", name.c_str(), p.description.c_str());
      return 0;
    }

    Config cfg;
    if (!preset_name.empty()) {
      auto it = presets().find(preset_name);
      if (it == presets().end())
        throw ConfigError("unknown preset '" + preset_name + "'");
      for (const auto& [k, v] : it->second.kv) cfg.set(k, v);
    }
    if (!config_path.empty()) load_config_file(cfg, config_path);
    for (const auto& ov : overrides) apply_override(cfg, ov);
    if (cfg.kv.empty())
      throw ConfigError("no configuration: pass --preset and/or --config");

    Output out;
    out.dir = out_dir;
    out.prefix = preset_name.empty() ? "run" : preset_name;
    out.dry = dry;
    if (dry) {
      std::fputs(format_config(cfg).c_str(), stdout);
      return 0;
    }

    if (verb == "run")
      dispatch(
          cfg, [&](const auto& pb) { op_run_1d(cfg, pb, out, jobs); },
          [&](const auto& pb) { op_run_2d(cfg, pb, out, jobs); });
    else if (verb == "convergence")
      dispatch(
          cfg, [&](const auto& pb) { op_convergence_1d(cfg, pb, out, jobs); },
          [&](const auto& pb) { op_convergence_2d(cfg, pb, out, jobs); });
    else if (verb == "wb-check")
      dispatch(
          cfg, [&](const auto& pb) { op_wbcheck_1d(cfg, pb, out, jobs); },
          [&](const auto& pb) { op_wbcheck_2d(cfg, pb, out, jobs); });
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}
