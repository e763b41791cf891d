#include "ns1d/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ns1d/errors.hpp"

namespace ns1d {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::string time_label(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", t);
  return buf;
}

template <class Get>
double sup_over(const Trajectory& tr, Get get) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& f : tr.frames) m = std::max(m, get(f.diag));
  return m;
}

std::string join(const std::vector<std::size_t>& ns) {
  std::string s;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (i) s += '/';
    s += std::to_string(ns[i]);
  }
  return s;
}

Scenario quiet_copy(const Scenario& s) {
  Scenario c = s;
  validate_scenario(c);
  return c;
}

}  // namespace

ScenarioResult simulate(const Scenario& s, bool keep_fields) {
  ScenarioResult r{s, build_initial_data(s), {}, {}};
  RunOptions o = s.run_options();
  o.keep_fields = keep_fields;
  for (Form f : s.forms()) {
    r.runs.push_back(run(r.init.state, f, r.init.mesh, s.params, r.init.profile, o));
  }
  if (r.runs.size() == 2) {
    const Trajectory& a = r.runs[0];
    const Trajectory& b = r.runs[1];
    const std::size_t n = std::min(a.frames.size(), b.frames.size());
    for (std::size_t k = 0; k < n; ++k) {
      const Frame& fa = a.frames[k];
      const Frame& fb = b.frames[k];
      if (fa.state.rho.empty() || fb.state.rho.empty()) continue;
      const FlowState ua = to_form(fa.state, Form::U, r.init.mesh, s.params);
      const FlowState ub = to_form(fb.state, Form::U, r.init.mesh, s.params);
      r.formdiff.push_back({fa.state.t, max_abs_diff(ua.rho, ub.rho), max_abs_diff(ua.vel, ub.vel)});
    }
  }
  return r;
}

CsvTable timeseries_table(const Trajectory& tr) {
  std::vector<std::string> header{"t",        "mass",        "energy",  "bd_entropy",  "diss_u",   "diss_bd",
                                  "diss_bd_raw", "min_rho",  "max_rho", "inv_rho_max", "v_inf",    "wvel_inf",
                                  "wvel_l2t", "rho_h1",      "resid_recip", "resid_pident"};
  if (!tr.frames.empty()) {
    for (const auto& m : tr.frames.front().diag.moments) {
      header.push_back("v_moment_p" + std::to_string(m.order));
      header.push_back("gronwall_bound_p" + std::to_string(m.order));
    }
  }
  CsvTable t(std::move(header));
  for (const auto& f : tr.frames) {
    const DiagnosticsRecord& d = f.diag;
    std::vector<std::string> row{csv_number(d.t),          csv_number(d.mass),        csv_number(d.energy),
                                 csv_number(d.bd_entropy), csv_number(d.diss_u),      csv_number(d.diss_bd),
                                 csv_number(d.diss_bd_raw), csv_number(d.min_rho),    csv_number(d.max_rho),
                                 csv_number(d.inv_rho_max), csv_number(d.v_inf),      csv_number(d.wvel_inf),
                                 csv_number(d.wvel_l2t),   csv_number(d.rho_h1),      csv_number(d.resid_recip),
                                 csv_number(d.resid_pident)};
    for (const auto& m : d.moments) {
      row.push_back(csv_number(m.value));
      row.push_back(csv_number(m.bound));
    }
    t.add_row(std::move(row));
  }
  return t;
}

CsvTable fields_table(const Frame& frame, const Mesh& mesh, const Params& p) {
  const FlowState u = to_form(frame.state, Form::U, mesh, p);
  const FlowState v = to_form(frame.state, Form::V, mesh, p);
  CsvTable t({"x", "rho", "u", "v"});
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    t.add_row({csv_number(mesh.x(i)), csv_number(u.rho[i]), csv_number(u.vel[i]), csv_number(v.vel[i])});
  }
  return t;
}

CsvTable summary_table(const ScenarioResult& r) {
  CsvTable t({"scenario",      "form",          "alpha",       "gamma",          "eps",          "inside_theorem",
              "status",        "vacuum",        "breach_time", "breach_x",       "steps",        "t_reached",
              "min_rho",       "max_rho",       "sup_inv_rho", "sup_energy",     "sup_bd_entropy", "sup_v_inf",
              "sup_wvel_inf",  "wvel_l2t",      "sup_rho_h1",  "sup_resid_recip", "sup_resid_pident", "diss_u",
              "diss_bd",       "gronwall"});
  const Scenario& s = r.scenario;
  for (const Trajectory& tr : r.runs) {
    const DiagnosticsRecord& last = tr.last().diag;
    const bool vac = tr.status == RunStatus::VacuumBreach;
    t.add_row({s.name,
               to_string(tr.form),
               csv_number(s.params.alpha),
               csv_number(s.params.gamma),
               csv_number(s.params.eps),
               s.validation.inside_theorem ? "yes" : "no",
               to_string(tr.status),
               vac ? "yes" : "no",
               vac ? csv_number(tr.breach->t) : "none",
               vac ? csv_number(tr.breach->x) : "none",
               std::to_string(tr.steps),
               csv_number(last.t),
               csv_number(tr.min_rho),
               csv_number(tr.max_rho),
               csv_number(sup_over(tr, [](const DiagnosticsRecord& d) { return d.inv_rho_max; })),
               csv_number(sup_over(tr, [](const DiagnosticsRecord& d) { return d.energy; })),
               csv_number(sup_over(tr, [](const DiagnosticsRecord& d) { return d.bd_entropy; })),
               csv_number(sup_over(tr, [](const DiagnosticsRecord& d) { return d.v_inf; })),
               csv_number(sup_over(tr, [](const DiagnosticsRecord& d) { return d.wvel_inf; })),
               csv_number(last.wvel_l2t),
               csv_number(sup_over(tr, [](const DiagnosticsRecord& d) { return d.rho_h1; })),
               csv_number(sup_over(tr, [](const DiagnosticsRecord& d) { return d.resid_recip; })),
               csv_number(sup_over(tr, [](const DiagnosticsRecord& d) { return d.resid_pident; })),
               csv_number(last.diss_u),
               csv_number(last.diss_bd),
               to_string(tr.gronwall)});
  }
  return t;
}

CsvTable formdiff_table(const std::vector<FormDiffRow>& rows) {
  CsvTable t({"t", "rho_diff_inf", "u_diff_inf"});
  for (const auto& r : rows) t.add_row({csv_number(r.t), csv_number(r.rho_diff_inf), csv_number(r.u_diff_inf)});
  return t;
}

void write_scenario(const ScenarioResult& r, const std::filesystem::path& out_dir) {
  ensure_directory(out_dir);
  const bool split = r.runs.size() > 1;
  for (const Trajectory& tr : r.runs) {
    const std::filesystem::path dir = split ? out_dir / to_string(tr.form) : out_dir;
    ensure_directory(dir);
    timeseries_table(tr).write(dir / "timeseries.csv");
    for (const Frame& f : tr.frames) {
      if (f.state.rho.empty()) continue;
      fields_table(f, r.init.mesh, r.scenario.params).write(dir / ("fields_" + time_label(f.state.t) + ".csv"));
    }
  }
  summary_table(r).write(out_dir / "summary.csv");
  if (split) formdiff_table(r.formdiff).write(out_dir / "formdiff.csv");
}

ScenarioResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir) {
  ScenarioResult r = simulate(s);
  write_scenario(r, out_dir);
  return r;
}

// ---------------------------------------------------------------------------------------------

std::vector<SweepRow> sweep(const Scenario& base, const std::vector<double>& alpha_grid,
                            const std::vector<double>& gamma_grid, unsigned threads) {
  if (alpha_grid.empty() || gamma_grid.empty()) {
    throw ConfigError("sweep grids must be non-empty");
  }
  const std::size_t count = alpha_grid.size() * gamma_grid.size();
  return parallel_map<SweepRow>(count, threads, [&](std::size_t idx) {
    SweepRow row;
    row.alpha = alpha_grid[idx / gamma_grid.size()];
    row.gamma = gamma_grid[idx % gamma_grid.size()];
    Scenario s = base;
    s.params.alpha = row.alpha;
    s.params.gamma = row.gamma;
    if (s.form == SolverForm::Both) s.form = SolverForm::U;
    try {
      validate_scenario(s);
    } catch (const ConfigError& e) {
      row.status = "invalid";
      row.min_rho = kNaN;
      row.sup_v_inf = kNaN;
      row.gronwall = "undefined";
      row.note = e.what();
      return row;
    }
    row.inside_theorem = s.validation.inside_theorem;
    const ScenarioResult r = simulate(s, false);
    const Trajectory& tr = r.runs.front();
    row.status = to_string(tr.status);
    row.min_rho = tr.min_rho;
    if (tr.breach) {
      row.breach_time = tr.breach->t;
      row.breach_x = tr.breach->x;
    }
    row.sup_v_inf = sup_over(tr, [](const DiagnosticsRecord& d) { return d.v_inf; });
    row.gronwall = to_string(tr.gronwall);
    row.note = tr.failure;
    return row;
  });
}

CsvTable sweep_table(const std::vector<SweepRow>& rows) {
  CsvTable t({"alpha", "gamma", "inside_theorem", "status", "min_rho", "breach_time", "breach_x", "sup_v_inf",
              "gronwall", "note"});
  for (const auto& r : rows) {
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    std::replace(note.begin(), note.end(), '\n', ' ');
    t.add_row({csv_number(r.alpha), csv_number(r.gamma), r.inside_theorem ? "yes" : "no", r.status,
               csv_number(r.min_rho), csv_number(r.breach_time, "none"), csv_number(r.breach_x, "none"),
               csv_number(r.sup_v_inf), r.gronwall, note});
  }
  return t;
}

// ---------------------------------------------------------------------------------------------

const OrderRow* RefinementResult::find(const std::string& quantity, std::size_t n_coarse) const {
  for (const auto& r : rows) {
    if (r.quantity == quantity && !r.resolutions.empty() && r.resolutions.front() == n_coarse) return &r;
  }
  return nullptr;
}

OrderRow observed_order(std::string quantity, std::vector<std::size_t> resolutions, double e_coarse, double e_fine,
                        double roundoff_scale) {
  OrderRow row{std::move(quantity), std::move(resolutions), e_coarse, e_fine, std::nullopt, "ok"};
  const double floor = 1e-12 * std::max(roundoff_scale, 1.0);
  const double ratio = static_cast<double>(row.resolutions[row.resolutions.size() - 1]) /
                       static_cast<double>(row.resolutions[row.resolutions.size() - 2]);
  if (!std::isfinite(e_coarse) || !std::isfinite(e_fine)) {
    row.flag = "non-finite";
  } else if (e_fine <= floor || e_coarse <= floor) {
    row.flag = "round-off";
  } else if (e_fine >= e_coarse) {
    row.flag = "non-monotone";
  } else {
    row.order = std::log(e_coarse / e_fine) / std::log(ratio);
  }
  return row;
}

Field transfer(const Field& f, const Mesh& from, const Mesh& to) {
  Field out(to.size());
  const double h = from.dx();
  const double x0 = from.x(0);
  const std::size_t n = from.size();
  for (std::size_t i = 0; i < to.size(); ++i) {
    const double s = (to.x(i) - x0) / h;
    if (s <= 0.0) {
      out[i] = f.front();
    } else if (s >= static_cast<double>(n - 1)) {
      out[i] = f.back();
    } else {
      const std::size_t j = static_cast<std::size_t>(s);
      const double w = s - static_cast<double>(j);
      out[i] = (1.0 - w) * f[j] + w * f[j + 1];
    }
  }
  return out;
}

RefinementResult refinement_study(const Scenario& s, const std::vector<std::size_t>& N_list, unsigned threads) {
  if (N_list.size() < 3) {
    throw ConfigError("refinement needs at least three resolutions");
  }
  for (std::size_t i = 1; i < N_list.size(); ++i) {
    if (N_list[i] <= N_list[i - 1]) throw ConfigError("refinement resolutions must be strictly increasing");
  }

  RefinementResult res;
  res.N = N_list;
  res.runs = parallel_map<ScenarioResult>(N_list.size(), threads, [&](std::size_t k) {
    Scenario c = s;
    c.N = N_list[k];
    return simulate(quiet_copy(c), false);
  });

  const std::vector<Form> forms = s.forms();
  auto completed = [&](std::size_t k, std::size_t f) {
    const Trajectory& tr = res.runs[k].runs[f];
    return tr.status == RunStatus::Completed;
  };

  for (std::size_t f = 0; f < forms.size(); ++f) {
    const std::string tag = std::string("_") + to_string(forms[f]);
    const std::string vel_name = forms[f] == Form::U ? "u" : "v";

    // Self-convergence from consecutive triples.
    for (std::size_t k = 0; k + 2 < N_list.size(); ++k) {
      const std::vector<std::size_t> ns{N_list[k], N_list[k + 1], N_list[k + 2]};
      if (!completed(k, f) || !completed(k + 1, f) || !completed(k + 2, f)) {
        for (const std::string& q : {std::string("rho"), vel_name}) {
          res.rows.push_back({q + tag, ns, kNaN, kNaN, std::nullopt, "failed-run"});
        }
        continue;
      }
      const Mesh& m0 = res.runs[k].init.mesh;
      const Mesh& m1 = res.runs[k + 1].init.mesh;
      const Mesh& m2 = res.runs[k + 2].init.mesh;
      const FlowState& s0 = res.runs[k].runs[f].last().state;
      const FlowState& s1 = res.runs[k + 1].runs[f].last().state;
      const FlowState& s2 = res.runs[k + 2].runs[f].last().state;
      const double rho_scale = *std::max_element(s0.rho.begin(), s0.rho.end());
      res.rows.push_back(observed_order("rho" + tag, ns, max_abs_diff(s0.rho, transfer(s1.rho, m1, m0)),
                                        max_abs_diff(s1.rho, transfer(s2.rho, m2, m1)), rho_scale));
      double vel_scale = 0.0;
      for (double v : s0.vel) vel_scale = std::max(vel_scale, std::abs(v));
      res.rows.push_back(observed_order(vel_name + tag, ns, max_abs_diff(s0.vel, transfer(s1.vel, m1, m0)),
                                        max_abs_diff(s1.vel, transfer(s2.vel, m2, m1)), vel_scale));
    }

    // Residuals from consecutive pairs.
    for (std::size_t k = 0; k + 1 < N_list.size(); ++k) {
      const std::vector<std::size_t> ns{N_list[k], N_list[k + 1]};
      const DiagnosticsRecord& d0 = res.runs[k].runs[f].last().diag;
      const DiagnosticsRecord& d1 = res.runs[k + 1].runs[f].last().diag;
      const bool ok = completed(k, f) && completed(k + 1, f);
      for (const auto& [name, a, b] : {std::tuple{std::string("resid_recip"), d0.resid_recip, d1.resid_recip},
                                       std::tuple{std::string("resid_pident"), d0.resid_pident, d1.resid_pident}}) {
        if (!ok) {
          res.rows.push_back({name + tag, ns, a, b, std::nullopt, "failed-run"});
        } else {
          // Residuals of an exact identity are measured against the size of its terms.
          res.rows.push_back(observed_order(name + tag, ns, a, b, 0.0));
        }
      }
    }
  }

  if (forms.size() == 2) {
    for (std::size_t k = 0; k + 1 < N_list.size(); ++k) {
      const std::vector<std::size_t> ns{N_list[k], N_list[k + 1]};
      auto diff_at = [&](std::size_t j) {
        const ScenarioResult& r = res.runs[j];
        if (!completed(j, 0) || !completed(j, 1)) return kNaN;
        const FlowState a = to_form(r.runs[0].last().state, Form::U, r.init.mesh, r.scenario.params);
        const FlowState b = to_form(r.runs[1].last().state, Form::U, r.init.mesh, r.scenario.params);
        return max_abs_diff(a.rho, b.rho);
      };
      const double a = diff_at(k);
      const double b = diff_at(k + 1);
      OrderRow row = observed_order("formdiff_rho", ns, a, b, 0.0);
      if (!std::isfinite(a) || !std::isfinite(b)) row.flag = "failed-run";
      res.rows.push_back(std::move(row));
    }
  }
  return res;
}

CsvTable orders_table(const RefinementResult& r) {
  CsvTable t({"quantity", "resolutions", "value_coarse", "value_fine", "order", "flag"});
  for (const auto& row : r.rows) {
    t.add_row({row.quantity, join(row.resolutions), csv_number(row.value_coarse), csv_number(row.value_fine),
               csv_number(row.order, "undefined"), row.flag});
  }
  return t;
}

// ---------------------------------------------------------------------------------------------

RegularizationResult regularization_study(const Scenario& s, const std::vector<int>& n_list, unsigned threads) {
  if (n_list.empty()) throw ConfigError("regularization needs at least one n");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw ConfigError("regularization indices must be positive");
    if (i && n_list[i] <= n_list[i - 1]) throw ConfigError("regularization indices must be strictly increasing");
  }
  Scenario base = s;
  if (base.form == SolverForm::Both) base.form = SolverForm::U;
  base.params.reg_n.reset();
  base.mollify_n.reset();

  // Slot 0 is the baseline, slot i + 1 is n_list[i].
  std::vector<ScenarioResult> runs = parallel_map<ScenarioResult>(n_list.size() + 1, threads, [&](std::size_t k) {
    Scenario c = base;
    if (k > 0) {
      c.params.reg_n = n_list[k - 1];
      c.mollify_n = n_list[k - 1];
    }
    return simulate(quiet_copy(c), false);
  });

  RegularizationResult res;
  res.baseline = runs[0].runs.front();
  const Mesh& mesh = runs[0].init.mesh;
  const Trajectory& top = runs.back().runs.front();
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const Trajectory& tr = runs[i + 1].runs.front();
    RegularizationRow row;
    row.n = n_list[i];
    row.status = to_string(tr.status);
    row.min_mu = tr.min_mu;
    row.floor = 1.0 / n_list[i];
    row.floor_active = tr.min_mu < row.floor;
    row.kernel_identity = mollifier_is_identity(mesh, n_list[i]);
    row.kernel_halfwidth = 1.0 / n_list[i];
    const bool ok = tr.status == RunStatus::Completed;
    row.diff_to_nmax = ok && top.status == RunStatus::Completed
                           ? max_abs_diff(tr.last().state.rho, top.last().state.rho)
                           : kNaN;
    row.diff_to_baseline = ok && res.baseline.status == RunStatus::Completed
                               ? max_abs_diff(tr.last().state.rho, res.baseline.last().state.rho)
                               : kNaN;
    res.rows.push_back(row);
  }
  return res;
}

CsvTable regularization_table(const RegularizationResult& r) {
  CsvTable t({"n", "status", "floor_active", "min_mu", "floor", "kernel_identity", "kernel_halfwidth",
              "diff_to_nmax", "diff_to_baseline"});
  for (const auto& row : r.rows) {
    t.add_row({std::to_string(row.n), row.status, row.floor_active ? "yes" : "no", csv_number(row.min_mu),
               csv_number(row.floor), row.kernel_identity ? "yes" : "no", csv_number(row.kernel_halfwidth),
               csv_number(row.diff_to_nmax), csv_number(row.diff_to_baseline)});
  }
  return t;
}

}  // namespace ns1d
