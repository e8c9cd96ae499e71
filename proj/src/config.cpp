#include "nls/config.hpp"
#include "nls/trajectory_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "nls/scaling.hpp"

namespace nls {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"model", {"lambda", "eta", "dims", "q"}},
      {"grid", {"L", "n"}},
      {"initial", {"family", "A", "sigma", "chirp", "x0", "v", "a", "k", "path"}},
      {"stepper",
       {"method", "dt", "t_final", "picard_iters", "picard_tol", "quadrature_nodes", "blowup_threshold", "tail_tol",
        "tail_shell", "snapshot_every"}},
      {"diagnostics",
       {"conserved", "local_residuals", "morawetz_11", "morawetz_22", "pseudo_conformal", "stability", "decay_fit",
        "scaling_checks", "decay_t_min"}},
      {"scaling", {"theta"}},
      {"output", {"snapshots"}},
  };
  return s;
}

std::string where(const std::string& sec, const std::string& key) { return sec + "." + key; }

Real as_real(const toml::node& n, const std::string& name) {
  if (auto v = n.value<double>()) return *v;
  if (auto s = n.value<std::string>()) {
    if (*s == "inf") return kInf;
  }
  fail(name + " must be a number");
}

int as_int(const toml::node& n, const std::string& name) {
  if (auto v = n.value_exact<int64_t>()) return static_cast<int>(*v);
  if (auto d = n.value_exact<double>()) {
    if (std::floor(*d) == *d) return static_cast<int>(*d);
  }
  fail(name + " must be an integer");
}

bool as_bool(const toml::node& n, const std::string& name) {
  if (auto v = n.value_exact<bool>()) return *v;
  fail(name + " must be true or false");
}

std::string as_string(const toml::node& n, const std::string& name) {
  if (auto v = n.value_exact<std::string>()) return *v;
  fail(name + " must be a string");
}

std::vector<Real> as_reals(const toml::node& n, const std::string& name) {
  std::vector<Real> out;
  if (auto arr = n.as_array()) {
    for (const auto& e : *arr) out.push_back(as_real(e, name));
  } else {
    out.push_back(as_real(n, name));
  }
  return out;
}

std::vector<int> as_ints(const toml::node& n, const std::string& name) {
  std::vector<int> out;
  if (auto arr = n.as_array()) {
    for (const auto& e : *arr) out.push_back(as_int(e, name));
  } else {
    out.push_back(as_int(n, name));
  }
  return out;
}

template <typename T>
std::vector<T> broadcast(std::vector<T> v, int dims, const std::string& name, T fill) {
  if (v.empty()) return std::vector<T>(dims, fill);
  if (v.size() == 1) return std::vector<T>(dims, v[0]);
  if (static_cast<int>(v.size()) != dims) fail(name + " must have 1 or N entries");
  return v;
}

RunConfig from_table(const toml::table& root, const std::string& base_dir) {
  for (const auto& [k, v] : root) {
    const std::string sec(k.str());
    auto it = schema().find(sec);
    if (it == schema().end()) fail("unknown section [" + sec + "]");
    const toml::table* t = v.as_table();
    if (!t) fail("[" + sec + "] must be a table");
    for (const auto& [kk, vv] : *t) {
      if (!it->second.count(std::string(kk.str()))) fail("unknown key " + where(sec, std::string(kk.str())));
    }
  }

  RunConfig c;
  c.base_dir = base_dir;
  auto get = [&](const char* sec, const char* key) -> const toml::node* {
    const toml::table* t = root[sec].as_table();
    return t ? t->get(key) : nullptr;
  };

  if (auto n = get("model", "lambda")) c.params.lambda = as_real(*n, "model.lambda");
  if (auto n = get("model", "eta")) c.params.eta = as_int(*n, "model.eta");
  if (auto n = get("model", "dims")) c.params.dims = as_int(*n, "model.dims");
  if (auto n = get("model", "q")) c.params.q = as_int(*n, "model.q");
  const int N = c.params.dims;
  if (N < 1 || N > 3) fail("model.dims must be 1, 2 or 3");

  std::vector<Real> L;
  std::vector<int> pts;
  if (auto n = get("grid", "L")) L = as_reals(*n, "grid.L");
  if (auto n = get("grid", "n")) pts = as_ints(*n, "grid.n");
  c.extents = broadcast(L, N, "grid.L", 2 * kPi);
  c.points = broadcast(pts, N, "grid.n", 64);
  for (int n : c.points)
    if (n < 8 || n % 2) fail("grid.n must be even and at least 8");
  for (Real l : c.extents)
    if (!(l > 0)) fail("grid.L must be positive");

  InitialSpec& ic = c.initial;
  if (auto n = get("initial", "family")) ic.family = as_string(*n, "initial.family");
  if (auto n = get("initial", "A")) ic.A = as_real(*n, "initial.A");
  if (auto n = get("initial", "sigma")) ic.sigma = as_real(*n, "initial.sigma");
  if (auto n = get("initial", "chirp")) ic.chirp = as_real(*n, "initial.chirp");
  if (auto n = get("initial", "a")) ic.a = as_real(*n, "initial.a");
  if (auto n = get("initial", "path")) ic.path = as_string(*n, "initial.path");
  std::vector<Real> x0, v, k;
  if (auto n = get("initial", "x0")) x0 = as_reals(*n, "initial.x0");
  if (auto n = get("initial", "v")) v = as_reals(*n, "initial.v");
  if (auto n = get("initial", "k")) k = as_reals(*n, "initial.k");
  ic.x0 = broadcast(x0, N, "initial.x0", 0.0);
  ic.v = broadcast(v, N, "initial.v", 0.0);
  ic.k = broadcast(k, N, "initial.k", 0.0);
  static const std::set<std::string> families = {"gaussian", "soliton", "plane_wave", "file"};
  if (!families.count(ic.family)) fail("initial.family must be gaussian, soliton, plane_wave or file");
  if ((ic.family == "gaussian") && !(ic.sigma > 0)) fail("initial.sigma must be positive");
  if (ic.family == "soliton" && !(ic.A > 0)) fail("initial.A must be positive for the soliton family");
  if (ic.family == "file") {
    if (ic.path.empty()) fail("initial.path is required for the file family");
    fs::path p(ic.path);
    if (p.is_relative()) p = fs::path(base_dir) / p;
    if (!fs::exists(p)) fail("initial.path does not exist: " + p.string());
  }

  StepperConfig& s = c.stepper;
  if (auto n = get("stepper", "method")) {
    try {
      s.method = method_from_string(as_string(*n, "stepper.method"));
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  if (auto n = get("stepper", "dt")) s.dt = as_real(*n, "stepper.dt");
  if (auto n = get("stepper", "t_final")) s.t_final = as_real(*n, "stepper.t_final");
  if (auto n = get("stepper", "picard_iters")) s.picard_iters = as_int(*n, "stepper.picard_iters");
  if (auto n = get("stepper", "picard_tol")) s.picard_tol = as_real(*n, "stepper.picard_tol");
  if (auto n = get("stepper", "quadrature_nodes")) s.quadrature_nodes = as_int(*n, "stepper.quadrature_nodes");
  if (auto n = get("stepper", "blowup_threshold")) s.blowup_threshold = as_real(*n, "stepper.blowup_threshold");
  if (auto n = get("stepper", "tail_tol")) s.tail_tol = as_real(*n, "stepper.tail_tol");
  if (auto n = get("stepper", "tail_shell")) s.tail_shell = as_real(*n, "stepper.tail_shell");
  if (auto n = get("stepper", "snapshot_every")) s.snapshot_every = as_int(*n, "stepper.snapshot_every");

  DiagnosticsToggles& d = c.diagnostics;
  if (auto n = get("diagnostics", "conserved")) d.conserved = as_bool(*n, "diagnostics.conserved");
  if (auto n = get("diagnostics", "local_residuals")) d.local_residuals = as_bool(*n, "diagnostics.local_residuals");
  if (auto n = get("diagnostics", "morawetz_11")) d.morawetz_11 = as_bool(*n, "diagnostics.morawetz_11");
  if (auto n = get("diagnostics", "morawetz_22")) d.morawetz_22 = as_bool(*n, "diagnostics.morawetz_22");
  if (auto n = get("diagnostics", "pseudo_conformal")) d.pseudo_conformal = as_bool(*n, "diagnostics.pseudo_conformal");
  if (auto n = get("diagnostics", "stability")) d.stability = as_bool(*n, "diagnostics.stability");
  if (auto n = get("diagnostics", "decay_fit")) d.decay_fit = as_bool(*n, "diagnostics.decay_fit");
  if (auto n = get("diagnostics", "scaling_checks")) d.scaling_checks = as_bool(*n, "diagnostics.scaling_checks");
  if (auto n = get("diagnostics", "decay_t_min")) d.decay_t_min = as_real(*n, "diagnostics.decay_t_min");

  if (auto n = get("scaling", "theta")) c.theta = as_real(*n, "scaling.theta");
  if (!(c.theta > 0)) fail("scaling.theta must be positive");
  if (auto n = get("output", "snapshots")) c.write_snapshots = as_bool(*n, "output.snapshots");

  try {
    c.params.validate();
    s.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  return c;
}

toml::table parse_table(const std::string& text) {
  try {
    return toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "syntax error at line " << e.source().begin.line << ": " << e.description();
    fail(os.str());
  }
}

}  // namespace

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  return from_table(parse_table(text), base_dir);
}

RunConfig load_config(const std::string& path) {
  const std::string text = read_text(path);
  std::string dir = fs::path(path).parent_path().string();
  if (dir.empty()) dir = ".";
  return parse_config(text, dir);
}

std::string resolve_axis(const std::string& key) {
  if (key.find('.') != std::string::npos) return key;
  static const std::map<std::string, std::string> alias = {
      {"lambda", "model.lambda"}, {"eta", "model.eta"},           {"q", "model.q"},
      {"dims", "model.dims"},     {"L", "grid.L"},                {"n", "grid.n"},
      {"dt", "stepper.dt"},       {"t_final", "stepper.t_final"}, {"theta", "scaling.theta"},
      {"A", "initial.A"},         {"sigma", "initial.sigma"},     {"a", "initial.a"},
      {"method", "stepper.method"}, {"quadrature_nodes", "stepper.quadrature_nodes"},
  };
  auto it = alias.find(key);
  if (it == alias.end()) fail("unknown sweep axis '" + key + "'");
  return it->second;
}

std::string override_config(const std::string& text, const std::string& key, const std::string& value) {
  const std::string full = resolve_axis(key);
  const auto dot = full.find('.');
  const std::string sec = full.substr(0, dot);
  const std::string name = full.substr(dot + 1);
  auto sit = schema().find(sec);
  if (sit == schema().end() || !sit->second.count(name)) fail("unknown config key " + full);

  toml::table root = parse_table(text);
  toml::table snippet = parse_table("v = " + value);
  if (!root.contains(sec)) root.insert(sec, toml::table{});
  toml::table* t = root[sec].as_table();
  if (!t) fail("[" + sec + "] must be a table");
  t->insert_or_assign(name, *snippet.get("v"));
  std::ostringstream os;
  os << root;
  return os.str();
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["model"] = {{"lambda", c.params.lambda}, {"eta", c.params.eta}, {"dims", c.params.dims}, {"q", c.params.q}};
  j["grid"] = {{"L", c.extents}, {"n", c.points}};
  const InitialSpec& i = c.initial;
  j["initial"] = {{"family", i.family}, {"A", i.A}, {"sigma", i.sigma}, {"chirp", i.chirp}, {"x0", i.x0},
                  {"v", i.v},           {"a", i.a}, {"k", i.k},         {"path", i.path}};
  j["stepper"] = to_json(c.stepper);
  const DiagnosticsToggles& d = c.diagnostics;
  j["diagnostics"] = {{"conserved", d.conserved},
                      {"local_residuals", d.local_residuals},
                      {"morawetz_11", d.morawetz_11},
                      {"morawetz_22", d.morawetz_22},
                      {"pseudo_conformal", d.pseudo_conformal},
                      {"stability", d.stability},
                      {"decay_fit", d.decay_fit},
                      {"scaling_checks", d.scaling_checks},
                      {"decay_t_min", d.decay_t_min}};
  j["scaling"] = {{"theta", c.theta}};
  j["output"] = {{"snapshots", c.write_snapshots}};
  return j;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json(c).dump())));
  return buf;
}

GridPtr make_grid(const RunConfig& c) {
  try {
    return Grid::make(c.extents, c.points);
  } catch (const Error& e) {
    fail(e.what());
  }
}

Field make_initial(const InitialSpec& spec, const GridPtr& grid, const std::string& base_dir) {
  const Grid& g = *grid;
  const int N = g.dims();
  auto comp = [&](const std::vector<Real>& v, int d) { return d < static_cast<int>(v.size()) ? v[d] : 0.0; };
  RArray r2 = RArray::Zero(g.size());
  RArray phase = RArray::Zero(g.size());
  for (int d = 0; d < N; ++d) r2 += (g.coord(d) - comp(spec.x0, d)).square();

  CArray values(g.size());
  if (spec.family == "gaussian") {
    for (int d = 0; d < N; ++d) phase += 0.5 * comp(spec.v, d) * g.coord(d);
    phase += spec.chirp * r2;
    const RArray amp = spec.A * (-r2 / (2 * spec.sigma * spec.sigma)).exp();
    for (Index p = 0; p < g.size(); ++p) values[p] = std::polar(amp[p], phase[p]);
  } else if (spec.family == "soliton") {
    for (int d = 0; d < N; ++d) phase += 0.5 * comp(spec.v, d) * g.coord(d);
    const RArray r = r2.sqrt();
    for (Index p = 0; p < g.size(); ++p) values[p] = std::polar(spec.A / std::cosh(spec.A * r[p]), phase[p]);
  } else if (spec.family == "plane_wave") {
    for (int d = 0; d < N; ++d) phase += comp(spec.k, d) * g.coord(d);
    for (Index p = 0; p < g.size(); ++p) values[p] = std::polar(spec.a, phase[p]);
  } else if (spec.family == "file") {
    fs::path p(spec.path);
    if (p.is_relative()) p = fs::path(base_dir) / p;
    Field f = read_field(p.string(), grid);
    if (!f.grid().same_shape(g)) fail("initial field file grid does not match [grid]");
    return f.with_time(0);
  } else {
    fail("unknown initial family '" + spec.family + "'");
  }
  return Field(grid, std::move(values), 0);
}

Field make_initial(const RunConfig& c, const GridPtr& grid) {
  Field f = make_initial(c.initial, grid, c.base_dir);
  if (c.theta != 1) f = rescale(f, c.theta, c.params.eta).with_time(0);
  return f;
}

}  // namespace nls
