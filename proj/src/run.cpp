#include "monopole/run.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "io_util.hpp"
#include "monopole/admissible.hpp"
#include "monopole/analysis.hpp"
#include "monopole/data.hpp"
#include "monopole/error.hpp"
#include "monopole/snapshot.hpp"

namespace monopole {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kResidualKeys[] = {"monopole_t",   "monopole_x",   "monopole_y",         "higgs_evolution",
                                         "coordinate_x", "coordinate_y", "potential_identity", "elliptic",
                                         "coulomb"};

std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

json interval_json(const Interval& w) {
  if (w.empty()) return {{"empty", true}};
  return {{"empty", false},
          {"lower", w.lower},
          {"upper", w.upper},
          {"lower_closed", w.lower_closed},
          {"upper_closed", w.upper_closed}};
}

json report_json(const ConsistencyReport& r) {
  json j = json::object();
  for (const auto& [k, v] : r) j[k] = v;
  return j;
}

double report_max(const ConsistencyReport& r) {
  double m = 0.0;
  for (const auto& [k, v] : r) m = std::max(m, v);
  return m;
}

EvolveOptions evolve_options(const RunConfig& c) {
  EvolveOptions o;
  o.elliptic = {c.elliptic_smallness, c.elliptic_tolerance, c.elliptic_max_iterations};
  o.cfl = c.cfl;
  o.snapshot_stride = c.snapshot_stride;
  o.b2_path = c.b2_path == "waves" ? B2Path::waves : B2Path::fields;
  return o;
}

AuxState initial_state(const RunConfig& c) {
  if (!c.input.empty()) return to_aux(load_snapshot(c.input));
  const TorusGrid g(c.N, c.L);
  if (c.data == "zero") return AuxState::zero(g, c.rank);
  LieField a1(g, c.rank), a2(g, c.rank), phi0(g, c.rank);
  if (c.data == "gaussian") {
    CoulombData d = gaussian_data(g, c.rank, c.amplitude, c.width, c.seed);
    a1 = std::move(d.a1);
    a2 = std::move(d.a2);
    phi0 = std::move(d.phi0);
  } else {
    const LieField f = random_lie_field(g, c.rank, c.amplitude, c.bandwidth, 2 * c.seed);
    a1 = -partial_derivative(f, 2);
    a2 = partial_derivative(f, 1);
    phi0 = random_lie_field(g, c.rank, c.amplitude, c.bandwidth, 2 * c.seed + 1);
  }
  return build_initial_data(a1, a2, phi0, c.tol_c).aux;
}

std::string snapshot_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "state_%06d.bin", step);
  return buf;
}

struct StepRow {
  int step = 0;
  double t = 0.0, constraint = 0.0, energy = 0.0, contraction = 0.0, discarded = 0.0;
  int elliptic_iterations = 0;
  std::optional<ConsistencyReport> residuals;
};

std::string rows_csv(const std::vector<StepRow>& rows) {
  std::string out = "step,t,constraint,energy,elliptic_iterations,contraction,discarded";
  for (const char* k : kResidualKeys) out += std::string(",") + k;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.step) + ',' + num(r.t) + ',' + num(r.constraint) + ',' + num(r.energy) + ',' +
           std::to_string(r.elliptic_iterations) + ',' + num(r.contraction) + ',' + num(r.discarded);
    for (const char* k : kResidualKeys) {
      out += ',';
      if (r.residuals) out += num(r.residuals->at(k));
    }
    out += '\n';
  }
  return out;
}

double relative_constraint(const PhysState& p) {
  const Connection a = p.connection();
  const double scale = l2_norm(a.a1) + l2_norm(a.a2);
  const double div = l2_norm(divergence(a.a1, a.a2));
  return scale > 0 ? div / scale : div;
}

struct Outcome {
  json summary;
  bool passed = true;
};

// Evolution with per-step diagnostics; the scaled monitor, if given, sees
// the rescaled copy of every state.
Outcome simulate(const RunConfig& c, const fs::path& out, bool with_scaling) {
  const AuxState s0 = initial_state(c);
  const EvolveOptions opt = evolve_options(c);
  fs::create_directories(out / "snapshots");
  ResidualMonitor monitor(c.dt, c.monitor_stride);
  ResidualMonitor scaled(c.dt / c.scale, c.monitor_stride);
  std::vector<StepRow> rows;
  double worst_constraint = 0.0;
  const Trajectory traj = evolve(s0, c.T, c.dt, opt, [&](const StepRecord& r) {
    PhysState p = r.phys;
    StepRow row{r.step, r.aux.t, relative_constraint(p), wave_energy({r.aux.u, r.aux.ut}) + wave_energy({r.aux.v, r.aux.vt}),
                r.elliptic.contraction, p.discarded, r.elliptic.iterations, std::nullopt};
    worst_constraint = std::max(worst_constraint, row.constraint);
    if (with_scaling) scaled.push(rescale(p, c.scale));
    if (auto rep = monitor.push(std::move(p))) rows.back().residuals = std::move(rep);
    rows.push_back(std::move(row));
  });
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const int step = static_cast<int>(std::lround(traj.snapshots[i].t / c.dt));
    save_snapshot(to_snapshot(traj.snapshots[i]), out / "snapshots" / snapshot_name(step));
  }
  atomic_write(out / "diagnostics.csv", rows_csv(rows));

  Outcome o;
  const double worst_residual = report_max(monitor.worst());
  const bool constraint_ok = worst_constraint <= c.constraint_gate;
  const bool residual_ok = worst_residual <= c.residual_gate;
  o.passed = constraint_ok && residual_ok;
  o.summary["steps"] = traj.steps;
  o.summary["residual_reports"] = monitor.reports();
  o.summary["worst_residuals"] = report_json(monitor.worst());
  o.summary["worst_constraint"] = worst_constraint;
  o.summary["final_energy"] = rows.back().energy;
  o.summary["snapshots"] = traj.snapshots.size();
  o.summary["gates"] = {{"constraint", {{"value", worst_constraint}, {"gate", c.constraint_gate}, {"passed", constraint_ok}}},
                        {"residual", {{"value", worst_residual}, {"gate", c.residual_gate}, {"passed", residual_ok}}}};
  if (with_scaling) {
    const double scaled_worst = report_max(scaled.worst());
    o.summary["scale"] = c.scale;
    o.summary["scaled_worst_residuals"] = report_json(scaled.worst());
    o.summary["scaled_to_unscaled"] = worst_residual > 0 ? scaled_worst / worst_residual : 0.0;
  }
  return o;
}

Outcome picard(const RunConfig& c, const fs::path& out) {
  const AuxState s0 = initial_state(c);
  const EvolveOptions opt = evolve_options(c);
  const PicardResult pr = picard_solve(s0, c.T, c.dt, c.picard_iterations, opt);
  EvolveOptions every = opt;
  every.snapshot_stride = 1;
  const Trajectory traj = evolve(s0, c.T, c.dt, every);
  double gap = 0.0;
  const Multiplier h1 = Multiplier::bessel(1.0);
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const AuxState& a = pr.final_iterate[k];
    const AuxState& b = traj.snapshots[k];
    gap = std::max(gap, l2_norm(apply_multiplier(a.u - b.u, h1)) + l2_norm(a.ut - b.ut) +
                            l2_norm(apply_multiplier(a.v - b.v, h1)) + l2_norm(a.vt - b.vt));
  }
  std::string csv = "iteration,difference,ratio\n";
  json ratios = json::array();
  for (std::size_t j = 0; j < pr.differences.size(); ++j) {
    const double r = j > 0 && pr.differences[j - 1] > 0 ? pr.differences[j] / pr.differences[j - 1] : 0.0;
    if (j > 0) ratios.push_back(r);
    csv += std::to_string(j + 1) + ',' + num(pr.differences[j]) + ',' + (j > 0 ? num(r) : std::string()) + '\n';
  }
  atomic_write(out / "diagnostics.csv", csv);
  fs::create_directories(out / "snapshots");
  save_snapshot(to_snapshot(pr.final_iterate.back()), out / "snapshots" / "picard_final.bin");
  Outcome o;
  o.summary["differences"] = pr.differences;
  o.summary["ratios"] = ratios;
  o.summary["final_iterate_vs_evolve"] = gap;
  return o;
}

Outcome gaugefix(const RunConfig& c, const fs::path& out) {
  const TorusGrid g(c.N, c.L);
  LieField a1 = random_lie_field(g, c.rank, 1.0, c.bandwidth, 2 * c.seed);
  LieField a2 = random_lie_field(g, c.rank, 1.0, c.bandwidth, 2 * c.seed + 1);
  const Multiplier hs = Multiplier::bessel(c.coulomb_sobolev_s);
  const double norm = l2_norm(apply_multiplier(a1, hs)) + l2_norm(apply_multiplier(a2, hs));
  a1 *= c.amplitude / norm;
  a2 *= c.amplitude / norm;
  const CoulombOptions opt{c.coulomb_smallness, c.coulomb_sobolev_s, c.tol_c, c.coulomb_max_iterations};
  CoulombResult r = coulomb_project(a1, a2, opt);
  std::string csv = "iteration,divergence\n";
  for (std::size_t i = 0; i < r.divergence_history.size(); ++i) {
    csv += std::to_string(i) + ',' + num(r.divergence_history[i]) + '\n';
  }
  atomic_write(out / "diagnostics.csv", csv);
  fs::create_directories(out / "snapshots");
  r.a1.set_label("a1");
  r.a2.set_label("a2");
  r.g.set_label("g");
  save_snapshot({0.0, {r.a1, r.a2, r.g}}, out / "snapshots" / "coulomb.bin");
  Outcome o;
  const double final_div = r.divergence_history.back();
  o.passed = final_div <= c.tol_c;
  o.summary["iterations"] = r.iterations;
  o.summary["divergence_history"] = r.divergence_history;
  o.summary["gates"] = {{"divergence", {{"value", final_div}, {"gate", c.tol_c}, {"passed", o.passed}}}};
  return o;
}

Outcome estimates(const RunConfig& c, const fs::path& out) {
  EnsembleSpec spec;
  spec.grid = TorusGrid(c.N, c.L);
  spec.amplitude = c.amplitude;
  spec.bandwidth = c.bandwidth;
  std::string csv = "kind,max,mean,count\n";
  json kinds = json::object();
  for (EstimateKind k : {EstimateKind::A, EstimateKind::C, EstimateKind::D, EstimateKind::E, EstimateKind::M1,
                         EstimateKind::M2, EstimateKind::M3, EstimateKind::M4, EstimateKind::ell, EstimateKind::bound}) {
    EstimateParams p = default_params(k);
    p.s = c.s;
    p.theta = c.theta;
    p.epsilon = c.epsilon;
    p.elliptic = {c.elliptic_smallness, c.elliptic_tolerance, c.elliptic_max_iterations};
    const RatioStats st = sample_estimate(k, spec, p, c.samples, c.seed);
    const std::string name(estimate_kind_name(k));
    csv += name + ',' + num(st.max) + ',' + num(st.mean) + ',' + std::to_string(st.ratios.size()) + '\n';
    kinds[name] = {{"max", st.max}, {"mean", st.mean}, {"ratios", st.ratios}};
  }
  EstimateParams p;
  p.s = c.s;
  p.theta = c.theta;
  p.epsilon = c.epsilon;
  json gain = json::array();
  csv += "\nlambda,null_ratio,generic_ratio,gap\n";
  for (double lambda : {8.0, 16.0, 32.0}) {
    if (std::lround(lambda / std::sqrt(2.0)) + 1 >= c.N / 3) continue;
    const NullGainRow r = null_form_gain(lambda, c.N, p, c.samples, c.seed);
    csv += num(r.lambda) + ',' + num(r.null_ratio) + ',' + num(r.generic_ratio) + ',' + num(r.gap) + '\n';
    gain.push_back({{"lambda", r.lambda}, {"null_ratio", r.null_ratio}, {"generic_ratio", r.generic_ratio}, {"gap", r.gap}});
  }
  atomic_write(out / "ratios.csv", csv);
  Outcome o;
  o.summary["estimates"] = kinds;
  o.summary["null_form_gain"] = gain;
  o.summary["note"] =
      "space-time norms are of a Hann-windowed extension; ratios are indicative, not bounds on the restriction norm";
  return o;
}

Outcome admissible(const RunConfig& c) {
  const ParamWindow w = admissible_params(c.s, c.a >= 0.0 ? std::optional<double>(c.a) : std::nullopt);
  json j = {{"s", w.s},
            {"epsilon", interval_json(w.epsilon)},
            {"theta_at_epsilon_lower", interval_json(w.theta)},
            {"inv_p_tilde", interval_json(w.inv_p_tilde)},
            {"inv_q", interval_json(w.inv_q)},
            {"inv_p_from_inv_q", "2/p = 1 - 1/q"}};
  if (w.elliptic) {
    const EllipticWindows& e = *w.elliptic;
    j["elliptic"] = {{"a", e.a},
                     {"cq1", interval_json(e.cq1)},
                     {"cp1_at_mid", interval_json(e.cp1_mid)},
                     {"cq2_applies", e.cq2_applies},
                     {"cq2", interval_json(e.cq2)},
                     {"cp2_at_mid", interval_json(e.cp2_mid)},
                     {"cq3_applies", e.cq3_applies},
                     {"cq3", interval_json(e.cq3)},
                     {"cp3_at_mid", interval_json(e.cp3_mid)}};
  }
  Outcome o;
  o.summary["window"] = j;
  return o;
}

json base_summary(const RunConfig& c) {
  json config = json::object();
  std::istringstream in(serialize(c));
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find(" = ");
    config[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return {{"schema_version", kSummarySchemaVersion},
          {"convention_version", kConventionVersion},
          {"mode", mode_name(c.mode)},
          {"config", config}};
}

}  // namespace

void write_error(const fs::path& dir, std::string_view kind, std::string_view message) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const json j = {{"schema_version", kSummarySchemaVersion},
                  {"convention_version", kConventionVersion},
                  {"status", "error"},
                  {"error", kind},
                  {"message", message}};
  try {
    atomic_write(dir / "error.json", j.dump(2) + "\n");
  } catch (const Error&) {
  }
}

int run(const RunConfig& c) {
  const fs::path out(c.output);
  try {
    validate(c);
    fs::create_directories(out);
    fs::remove(out / "error.json");
    fs::remove(out / "summary.json");
    Outcome o;
    switch (c.mode) {
      case Mode::simulate: o = simulate(c, out, false); break;
      case Mode::residuals: o = simulate(c, out, true); break;
      case Mode::picard: o = picard(c, out); break;
      case Mode::gaugefix: o = gaugefix(c, out); break;
      case Mode::estimates: o = estimates(c, out); break;
      case Mode::admissible: o = admissible(c); break;
    }
    json summary = base_summary(c);
    summary["status"] = o.passed ? "passed" : "gate_failed";
    summary["result"] = std::move(o.summary);
    atomic_write(out / "summary.json", summary.dump(2) + "\n");
    return o.passed ? 0 : 1;
  } catch (const Error& e) {
    write_error(out, error_kind_name(e.kind()), e.what());
    return 2;
  } catch (const std::exception& e) {
    write_error(out, "internal", e.what());
    return 2;
  }
}

}  // namespace monopole
