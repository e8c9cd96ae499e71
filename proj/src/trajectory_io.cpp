#include "nls/trajectory_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace nls {

namespace fs = std::filesystem;

nlohmann::json to_json(const Params& p) {
  return {{"lambda", p.lambda}, {"eta", p.eta}, {"q", p.q}, {"dims", p.dims}};
}

namespace {

nlohmann::json real_or_string(Real v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

Real real_from(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw Error(ErrorCode::Io, "bad number '" + s + "' in manifest");
  }
  return j.get<Real>();
}

std::string indexed(const char* stem, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%05zu.nlsf", stem, i);
  return buf;
}

}  // namespace

nlohmann::json to_json(const StepperConfig& c) {
  return {{"method", to_string(c.method)},
          {"dt", c.dt},
          {"t_final", c.t_final},
          {"picard_iters", c.picard_iters},
          {"picard_tol", c.picard_tol},
          {"quadrature_nodes", c.quadrature_nodes},
          {"blowup_threshold", real_or_string(c.blowup_threshold)},
          {"tail_tol", real_or_string(c.tail_tol)},
          {"tail_shell", c.tail_shell},
          {"snapshot_every", c.snapshot_every}};
}

Params params_from_json(const nlohmann::json& j) {
  Params p;
  p.lambda = j.at("lambda").get<Real>();
  p.eta = j.at("eta").get<int>();
  p.q = j.at("q").get<int>();
  p.dims = j.at("dims").get<int>();
  return p;
}

StepperConfig stepper_from_json(const nlohmann::json& j) {
  StepperConfig c;
  c.method = method_from_string(j.at("method").get<std::string>());
  c.dt = j.at("dt").get<Real>();
  c.t_final = j.at("t_final").get<Real>();
  c.picard_iters = j.at("picard_iters").get<int>();
  c.picard_tol = j.at("picard_tol").get<Real>();
  c.quadrature_nodes = j.at("quadrature_nodes").get<int>();
  c.blowup_threshold = real_from(j.at("blowup_threshold"));
  c.tail_tol = real_from(j.at("tail_tol"));
  c.tail_shell = j.at("tail_shell").get<Real>();
  c.snapshot_every = j.at("snapshot_every").get<int>();
  return c;
}

void save_trajectory(const std::string& dir, const Trajectory& traj, const nlohmann::json& extra) {
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "snapshots", ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir + ": " + ec.message());

  nlohmann::json index = nlohmann::json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const std::string snap = "snapshots/" + indexed("snap", i);
    const std::string hist = "snapshots/" + indexed("h", i);
    write_field((fs::path(dir) / snap).string(), traj.snapshots[i]);
    write_field((fs::path(dir) / hist).string(),
                Field(traj.snapshots[i].grid_ptr(), traj.h[i].cast<Complex>(), traj.snapshots[i].time()));
    index.push_back({{"index", i}, {"t", traj.snapshots[i].time()}, {"file", snap}, {"h_file", hist}});
  }
  nlohmann::json hq = nlohmann::json::array();
  for (const auto& [t, v] : traj.hq_history) hq.push_back({t, real_or_string(v)});

  nlohmann::json m = extra.is_object() ? extra : nlohmann::json::object();
  m["format"] = "nls-lab-trajectory";
  m["version"] = 1;
  m["params"] = to_json(traj.params);
  m["stepper"] = to_json(traj.cfg);
  m["status"] = to_string(traj.status);
  m["status_time"] = traj.status_time;
  m["hq_history"] = hq;
  m["snapshots"] = index;

  std::ofstream out(fs::path(dir) / "manifest.json");
  if (!out) throw Error(ErrorCode::Io, "cannot write manifest in " + dir);
  out << m.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::Io, "manifest write failed in " + dir);
}

nlohmann::json load_manifest(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) throw Error(ErrorCode::Io, "no manifest.json in " + dir);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("malformed manifest: ") + e.what());
  }
}

Trajectory load_trajectory(const std::string& dir) {
  const nlohmann::json m = load_manifest(dir);
  Trajectory traj;
  try {
    traj.params = params_from_json(m.at("params"));
    traj.cfg = stepper_from_json(m.at("stepper"));
    traj.status = status_from_string(m.at("status").get<std::string>());
    traj.status_time = m.at("status_time").get<Real>();
    for (const auto& e : m.at("hq_history")) traj.hq_history.emplace_back(e.at(0).get<Real>(), real_from(e.at(1)));
    GridPtr grid;
    for (const auto& e : m.at("snapshots")) {
      Field f = read_field((fs::path(dir) / e.at("file").get<std::string>()).string(), grid);
      grid = f.grid_ptr();
      Field h = read_field((fs::path(dir) / e.at("h_file").get<std::string>()).string(), grid);
      traj.h.push_back(h.values().real());
      traj.snapshots.push_back(std::move(f));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("malformed manifest: ") + e.what());
  }
  if (traj.snapshots.empty()) throw Error(ErrorCode::Io, "trajectory in " + dir + " has no snapshots");
  return traj;
}

}  // namespace nls
