#include "nls/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "nls/morawetz.hpp"
#include "nls/scaling.hpp"

namespace nls {

namespace {

nlohmann::json guarded(const std::function<nlohmann::json()>& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return {{"skipped", e.what()}};
  }
}

Real rel_drift(const std::vector<Real>& v) {
  if (v.empty()) return 0;
  Real worst = 0;
  const Real scale = v.front() != 0 ? std::abs(v.front()) : 1.0;
  for (Real x : v) worst = std::max(worst, std::abs(x - v.front()) / scale);
  return worst;
}

}  // namespace

nlohmann::json analytics_report(const Trajectory& traj, const DiagnosticsToggles& toggles,
                                const std::vector<DiagnosticsRecord>& rows) {
  nlohmann::json j;
  const Params& p = traj.params;
  j["status"] = to_string(traj.status);
  j["status_time"] = traj.status_time;
  j["times"] = traj.times();
  nlohmann::json hq = nlohmann::json::array();
  for (const auto& [t, v] : traj.hq_history) hq.push_back({t, v});
  j["hq_history"] = hq;

  if (toggles.conserved) {
    nlohmann::json c;
    std::vector<Real> m, e;
    std::vector<std::vector<Real>> mom;
    for (const auto& r : rows) {
      m.push_back(r.mass);
      e.push_back(r.energy);
      mom.emplace_back(r.momentum.data(), r.momentum.data() + r.momentum.size());
    }
    const DriftSummary d = drifts(rows);
    c["mass"] = m;
    c["energy"] = e;
    c["momentum"] = mom;
    c["mass_drift_rel"] = d.mass_rel;
    c["energy_drift_rel"] = d.energy_rel;
    c["momentum_drift_abs"] = d.momentum_abs;
    j["conserved"] = c;
  }

  if (toggles.morawetz_11) {
    j["morawetz_11"] = guarded([&] {
      std::vector<Real> v;
      for (const auto& f : traj.snapshots) v.push_back(morawetz_11(f, WeightFn::quadratic()));
      nlohmann::json out = {{"weight", "quadratic"}, {"values", v}};
      if (traj.size() >= 3) {
        const VirialReport vr = virial_consistency(traj);
        out["virial_max_abs_mismatch"] = vr.max_abs_mismatch;
        out["virial_max_rel_mismatch"] = vr.max_rel_mismatch;
      }
      return out;
    });
  }

  if (toggles.morawetz_22) {
    j["morawetz_22"] = guarded([&] {
      std::vector<Real> v;
      for (const auto& f : traj.snapshots) v.push_back(morawetz_22(f));
      return nlohmann::json{{"values", v}};
    });
  }

  if (toggles.pseudo_conformal) {
    j["pseudo_conformal"] = guarded([&] {
      std::vector<Real> total, printed, hist;
      for (std::size_t i = 0; i < traj.size(); ++i) {
        const PseudoConformal P = pseudo_conformal(traj, i);
        total.push_back(P.total);
        printed.push_back(P.total_printed_sign);
        hist.push_back(std::abs(P.history));
      }
      nlohmann::json out = {{"total", total},
                            {"total_printed_sign", printed},
                            {"history_term_abs", hist},
                            {"drift_rel", rel_drift(total)},
                            {"sup", *std::max_element(total.begin(), total.end())},
                            {"conserved_case", p.eta * p.dims == 2}};
      return out;
    });
    if (p.dims == 1 && p.eta >= 1 && p.eta < 2) {
      j["morawetz_estimate"] = guarded([&] {
        const MorawetzEstimate m = morawetz_estimate_check(traj);
        return nlohmann::json{{"lhs", m.lhs},
                              {"rhs", m.rhs},
                              {"ratio", m.ratio},
                              {"coeff_4m4eta", m.coeff_4m4eta},
                              {"coeff_4m2eta", m.coeff_4m2eta},
                              {"bound_4m4eta", m.bound_4m4eta},
                              {"bound_4m2eta", m.bound_4m2eta},
                              {"identity_residual", m.identity_residual}};
      });
    }
  }

  if (toggles.decay_fit) {
    j["decay_fit"] = guarded([&] {
      const DecayFit f = decay_fit(traj, toggles.decay_t_min);
      return nlohmann::json{{"exponent", f.exponent},
                            {"prefactor", f.prefactor},
                            {"target", f.target},
                            {"samples", f.samples},
                            {"decaying", f.decaying}};
    });
  }

  if (toggles.stability) {
    j["stability"] = guarded([&] {
      const StabilityReport s = stability_check(traj);
      return nlohmann::json{{"lhs_frac", s.lhs_frac},
                            {"lhs_frac_riesz", s.lhs_frac_riesz},
                            {"lhs_interaction", s.lhs_interaction},
                            {"rhs", s.rhs},
                            {"sup_inner", s.sup_inner},
                            {"cs_bound", s.cs_bound},
                            {"satisfied", s.satisfied},
                            {"satisfied_riesz", s.satisfied_riesz},
                            {"trivial", s.trivial},
                            {"cs_satisfied", s.cs_satisfied}};
    });
    j["sharpened"] = guarded([&] {
      const SharpenedReport s = sharpened_bound_check(traj);
      return nlohmann::json{{"lhs", s.lhs},
                            {"mass0", s.mass0},
                            {"energy0", s.energy0},
                            {"ratio", s.ratio},
                            {"ratio_balanced", s.ratio_balanced}};
    });
  }

  if (toggles.scaling_checks) {
    j["scaling"] = guarded([&] {
      const CriticalityReport c = classify(p.dims, p.eta, p.q);
      nlohmann::json out = {{"q_crit", c.q_crit},
                            {"mass", to_string(c.mass)},
                            {"energy", to_string(c.energy)},
                            {"hq", to_string(c.hq)}};
      out["hcrit_norm_initial"] = guarded([&] {
        return nlohmann::json(homogeneous_sobolev_norm(traj.snapshots.front(), c.q_crit));
      });
      return out;
    });
  }
  return j;
}

}  // namespace nls
