#include "nls/app.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nls/analytics.hpp"
#include "nls/morawetz.hpp"
#include "nls/parallel.hpp"
#include "nls/scaling.hpp"
#include "nls/trajectory_io.hpp"

namespace nls {

namespace fs = std::filesystem;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Config: return exit_code::kConfig;
    case ErrorCode::Io: return exit_code::kIo;
    default: return exit_code::kRun;
  }
}

RunResult execute_run(const RunConfig& cfg, const std::optional<Trajectory>& resume) {
  RunResult r;
  r.hash = config_hash(cfg);
  if (resume) {
    if (resume->params.dims != cfg.params.dims) throw Error(ErrorCode::Config, "resume dimension does not match config");
    Trajectory prev = *resume;
    prev.params = cfg.params;
    r.traj = evolve_from(prev, cfg.stepper);
  } else {
    const GridPtr grid = make_grid(cfg);
    r.traj = evolve(make_initial(cfg, grid), cfg.stepper, cfg.params);
  }
  r.rows = diagnostics(r.traj, cfg.diagnostics.local_residuals);
  r.analytics = analytics_report(r.traj, cfg.diagnostics, r.rows);
  r.analytics["config_hash"] = r.hash;
  return r;
}

namespace {

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + p.string());
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_run_outputs(const std::string& out, const RunConfig& cfg, const RunResult& result) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + out + ": " + ec.message());

  nlohmann::json extra = {{"config", to_json(cfg)}, {"config_hash", result.hash}, {"tool", "nls-lab"}};
  if (cfg.write_snapshots) {
    save_trajectory(out, result.traj, extra);
  } else {
    Trajectory ends = result.traj;
    if (ends.size() > 2) {
      ends.snapshots = {result.traj.snapshots.front(), result.traj.snapshots.back()};
      ends.h = {result.traj.h.front(), result.traj.h.back()};
    }
    save_trajectory(out, ends, extra);
  }

  std::ostringstream csv;
  write_diagnostics_csv(csv, result.rows, result.traj.params.dims, cfg.diagnostics.local_residuals);
  write_file(fs::path(out) / "diagnostics.csv", csv.str());
  write_file(fs::path(out) / "analytics.json", result.analytics.dump(2) + "\n");
}

int cmd_run(const std::string& cfg_path, const std::string& out, const std::string& resume_dir, std::ostream& log) {
  RunConfig cfg;
  try {
    cfg = load_config(cfg_path);
  } catch (const Error& e) {
    log << "config error: " << e.what() << "\n";
    return e.code() == ErrorCode::Io ? exit_code::kConfig : exit_code_for(e);
  }
  try {
    std::optional<Trajectory> resume;
    if (!resume_dir.empty()) resume = load_trajectory(resume_dir);
    const RunResult r = execute_run(cfg, resume);
    write_run_outputs(out, cfg, r);
    const DriftSummary d = drifts(r.rows);
    log << "status " << to_string(r.traj.status) << " at t = " << r.traj.status_time << "\n";
    log << "snapshots " << r.traj.size() << ", mass drift " << d.mass_rel << ", energy drift " << d.energy_rel
        << ", momentum drift " << d.momentum_abs << "\n";
    log << "outputs in " << out << " (config hash " << r.hash << ")\n";
    return exit_code::kOk;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_code::kRun;
  }
}

std::vector<double> parse_csv_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error(ErrorCode::Config, "empty entry in value list");
    item = item.substr(b, e - b + 1);
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(item, &pos);
    } catch (...) {
      pos = 0;
    }
    if (pos != item.size()) throw Error(ErrorCode::Config, "cannot parse value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::Config, "empty value list");
  return out;
}

int cmd_sweep(const std::string& cfg_path, const std::string& axis, const std::string& values, const std::string& out,
              std::ostream& log) {
  std::string text;
  std::vector<std::string> texts;
  std::vector<double> vals;
  std::string key;
  try {
    text = read_text(cfg_path);
    key = resolve_axis(axis);
    vals = parse_csv_values(values);
    for (double v : vals) {
      std::string literal = g17(v);
      if (literal.find_first_of(".eEn") == std::string::npos) {
        const bool integral_key = key == "model.eta" || key == "model.q" || key == "model.dims" || key == "grid.n" ||
                                  key == "stepper.quadrature_nodes" || key == "stepper.picard_iters" ||
                                  key == "stepper.snapshot_every";
        if (!integral_key) literal += ".0";
      }
      texts.push_back(override_config(text, key, literal));
    }
  } catch (const Error& e) {
    log << "config error: " << e.what() << "\n";
    return exit_code::kConfig;
  }

  std::string dir = fs::path(cfg_path).parent_path().string();
  if (dir.empty()) dir = ".";
  struct Row {
    std::string status = "error";
    std::string error;
    DriftSummary drift;
    double sup_p = std::numeric_limits<double>::quiet_NaN();
    double decay = std::numeric_limits<double>::quiet_NaN();
    double hcrit = std::numeric_limits<double>::quiet_NaN();
    bool ok = false;
  };
  std::vector<Row> rows(vals.size());
  parallel_for(vals.size(), [&](std::size_t i) {
    Row& row = rows[i];
    try {
      const RunConfig cfg = parse_config(texts[i], dir);
      const RunResult r = execute_run(cfg);
      char name[64];
      std::snprintf(name, sizeof name, "run_%03zu", i);
      write_run_outputs((fs::path(out) / name).string(), cfg, r);
      row.status = to_string(r.traj.status);
      row.drift = drifts(r.rows);
      if (r.analytics.contains("pseudo_conformal") && r.analytics["pseudo_conformal"].contains("sup"))
        row.sup_p = r.analytics["pseudo_conformal"]["sup"].get<double>();
      if (r.analytics.contains("decay_fit") && r.analytics["decay_fit"].contains("exponent"))
        row.decay = r.analytics["decay_fit"]["exponent"].get<double>();
      try {
        row.hcrit = homogeneous_sobolev_norm(r.traj.snapshots.front(), critical_exponent(cfg.params.dims, cfg.params.eta));
      } catch (const Error&) {
      }
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });

  std::ostringstream csv;
  csv << "index,axis,value,status,mass_drift,energy_drift,momentum_drift,sup_p,decay_exponent,hcrit_norm,error\n";
  std::size_t completed = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    completed += r.ok ? 1 : 0;
    std::string err = r.error;
    for (char& c : err)
      if (c == ',' || c == '\n') c = ';';
    csv << i << ',' << key << ',' << g17(vals[i]) << ',' << r.status << ',' << g17(r.drift.mass_rel) << ','
        << g17(r.drift.energy_rel) << ',' << g17(r.drift.momentum_abs) << ',' << g17(r.sup_p) << ',' << g17(r.decay)
        << ',' << g17(r.hcrit) << ',' << err << "\n";
    log << key << " = " << g17(vals[i]) << ": " << (r.ok ? r.status : "error: " + r.error) << "\n";
  }
  try {
    std::error_code ec;
    fs::create_directories(out, ec);
    write_file(fs::path(out) / "sweep.csv", csv.str());
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return exit_code::kIo;
  }
  log << completed << "/" << rows.size() << " runs completed; summary in " << (fs::path(out) / "sweep.csv").string()
      << "\n";
  return completed > 0 ? exit_code::kOk : exit_code::kRun;
}

int cmd_diagnose(const std::string& dir, const std::string& out, std::ostream& log) {
  try {
    const Trajectory traj = load_trajectory(dir);
    const nlohmann::json m = load_manifest(dir);
    RunConfig cfg;
    if (m.contains("config")) {
      const auto& d = m["config"]["diagnostics"];
      DiagnosticsToggles& t = cfg.diagnostics;
      t.conserved = d.value("conserved", t.conserved);
      t.local_residuals = d.value("local_residuals", t.local_residuals);
      t.morawetz_11 = d.value("morawetz_11", t.morawetz_11);
      t.morawetz_22 = d.value("morawetz_22", t.morawetz_22);
      t.pseudo_conformal = d.value("pseudo_conformal", t.pseudo_conformal);
      t.stability = d.value("stability", t.stability);
      t.decay_fit = d.value("decay_fit", t.decay_fit);
      t.scaling_checks = d.value("scaling_checks", t.scaling_checks);
      t.decay_t_min = d.value("decay_t_min", t.decay_t_min);
    }
    const auto rows = diagnostics(traj, cfg.diagnostics.local_residuals);
    nlohmann::json a = analytics_report(traj, cfg.diagnostics, rows);
    if (m.contains("config_hash")) a["config_hash"] = m["config_hash"];
    const std::string target = out.empty() ? dir : out;
    std::error_code ec;
    fs::create_directories(target, ec);
    std::ostringstream csv;
    write_diagnostics_csv(csv, rows, traj.params.dims, cfg.diagnostics.local_residuals);
    write_file(fs::path(target) / "diagnostics.csv", csv.str());
    write_file(fs::path(target) / "analytics.json", a.dump(2) + "\n");
    const DriftSummary d = drifts(rows);
    log << "diagnosed " << traj.size() << " snapshots (status " << to_string(traj.status) << "), mass drift "
        << d.mass_rel << ", energy drift " << d.energy_rel << "\n";
    return exit_code::kOk;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::Io ? exit_code::kIo : exit_code::kRun;
  }
}

int cmd_verify(const std::string& suite, const std::string& out, std::ostream& log) {
  std::vector<CheckResult> results;
  try {
    results = run_verify(suite);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::Config ? exit_code::kConfig : exit_code::kVerifyFailed;
  }
  nlohmann::json report = nlohmann::json::array();
  std::size_t failed = 0;
  for (const auto& r : results) {
    failed += r.passed ? 0 : 1;
    log << (r.passed ? "PASS " : "FAIL ") << r.suite << "." << r.name << " value=" << g17(r.value)
        << " limit=" << g17(r.limit);
    if (!r.detail.empty()) log << " " << r.detail;
    log << "\n";
    report.push_back({{"suite", r.suite},
                      {"name", r.name},
                      {"passed", r.passed},
                      {"value", r.value},
                      {"limit", r.limit},
                      {"detail", r.detail}});
  }
  log << (results.size() - failed) << "/" << results.size() << " checks passed\n";
  if (!out.empty()) {
    try {
      std::error_code ec;
      fs::create_directories(out, ec);
      write_file(fs::path(out) / "verify.json", report.dump(2) + "\n");
    } catch (const Error& e) {
      log << "error: " << e.what() << "\n";
      return exit_code::kIo;
    }
  }
  return failed == 0 ? exit_code::kOk : exit_code::kVerifyFailed;
}

}  // namespace nls
