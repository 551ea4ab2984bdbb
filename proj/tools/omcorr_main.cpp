// Command-line front end: single points, stability maps, parameter sweeps,
// and onset bisection for the softened optomechanical system.
//
// Exit codes: 0 success, 1 usage/config error, 2 requested point has no
// stationary state, 3 numerical or physics-domain failure.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "omcorr/config.hpp"
#include "omcorr/csv.hpp"
#include "omcorr/dynamics.hpp"
#include "omcorr/lyapunov.hpp"
#include "omcorr/measures.hpp"
#include "omcorr/params.hpp"
#include "omcorr/steady_state.hpp"
#include "omcorr/sweep.hpp"

namespace {

using namespace omcorr;

// Thrown when a point computation finds no stationary state; mapped to exit 2.
struct NoStationaryState {
  StabilityVerdictd verdict;
};

// Raw CLI values are kept as strings and merged into the config document, so
// the config layer owns all numeric parsing and validation.
struct KvOptions {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add(CLI::App* cmd, const std::string& flag, const std::string& key,
           const std::string& help) {
    options[key] = cmd->add_option(flag, values[key], help);
  }

  ConfigDoc resolve(const char* mode) const {
    ConfigDoc doc = config_path.empty() ? ConfigDoc{}
                                        : load_config_file(config_path);
    doc.set("mode", mode);  // the subcommand decides the action
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) doc.set(key, values.at(key));
    return doc;
  }
};

void add_fixed_param_flags(CLI::App* cmd, KvOptions& kv) {
  cmd->add_option("--config", kv.config_path,
                  "key = value config file; flags override its entries");
  kv.add(cmd, "--delta", "delta", "effective detuning (mechanical units)");
  kv.add(cmd, "--kappa", "kappa", "total cavity decay (mechanical units)");
  kv.add(cmd, "--kappa-ex-frac", "kappa_ex_frac",
         "input-mirror fraction of the cavity decay");
  kv.add(cmd, "--gamma-m", "gamma_m", "mechanical damping (mechanical units)");
  kv.add(cmd, "--g,--g-eff", "g_eff",
         "field-enhanced coupling (mechanical units)");
  kv.add(cmd, "--eta", "eta", "qubit-induced softening strength");
  kv.add(cmd, "--n-th", "n_th", "mean thermal phonon number");
  kv.add(cmd, "--temperature", "temperature",
         "bath temperature in K (needs --omega-m)");
  kv.add(cmd, "--omega-m", "omega_m",
         "mechanical frequency in rad/s (for --temperature)");
}

void add_output_flag(CLI::App* cmd, KvOptions& kv) {
  kv.add(cmd, "-o,--output", "output_path", "CSV output path");
}

void add_axis_flags(CLI::App* cmd, KvOptions& kv) {
  kv.add(cmd, "--axis-min", "axis_min", "first axis value");
  kv.add(cmd, "--axis-max", "axis_max", "last axis value");
  kv.add(cmd, "--axis-steps", "axis_steps", "number of axis samples");
  kv.add(cmd, "--eta-list", "eta_list",
         "comma-separated softening values, one sweep curve each");
}

std::string fmt(double v) { return format_sig9(v); }

void print_point_report(const ReducedParamsd& p, const StabilityVerdictd& verdict,
                        const SweepRow& row, bool bits) {
  const double unit = bits ? std::log(2.0) : 1.0;
  const char* suffix = bits ? " bits" : " nats";
  std::printf("parameters: delta=%s kappa=%s kappa_ex_frac=%s gamma_m=%s "
              "g_eff=%s eta=%s n_th=%s\n",
              fmt(p.delta).c_str(), fmt(p.kappa).c_str(),
              fmt(p.kappa_ex_frac).c_str(), fmt(p.gamma_m).c_str(),
              fmt(p.g_eff).c_str(), fmt(p.eta).c_str(), fmt(p.n_th).c_str());
  std::printf("stability: %s (max Re eig = %s, closed-form margins %s / %s)\n",
              verdict.stable ? "stable"
                             : (verdict.marginal ? "marginal" : "unstable"),
              fmt(verdict.max_real_eigenvalue).c_str(),
              fmt(verdict.rh_condition_1).c_str(),
              fmt(verdict.rh_condition_2).c_str());
  if (!verdict.stable) return;
  std::printf("E_N            = %s%s\n", fmt(row.e_n / unit).c_str(), suffix);
  std::printf("I_M            = %s%s\n", fmt(row.i_m / unit).c_str(), suffix);
  std::printf("D_G            = %s%s\n", fmt(row.d_g / unit).c_str(), suffix);
  std::printf("nu_tilde_minus = %s\n", fmt(row.nu_tilde_minus).c_str());
  std::printf("cond_flag      = %d\n", row.cond_flag ? 1 : 0);
}

void run_resolved_point(const ReducedParamsd& p, bool bits,
                        const std::string& output_path) {
  const auto verdict = assess_stability(p);
  SweepRow row = run_point(p);
  row.axis_value = p.delta;
  print_point_report(p, verdict, row, bits);
  if (!output_path.empty()) {
    emit_csv({row}, output_path);
    std::printf("wrote %s\n", output_path.c_str());
  }
  if (!verdict.stable) throw NoStationaryState{verdict};
}

struct PhysicalOpts {
  double omega_m{};
  double quality_factor{};
  double kappa_ex{};
  double kappa_0{};
  double g_single{};
  double delta_0{};
  double drive{};
  double temperature{0.0};
  double eta_si{0.0};
  double delta_q{0.0};
  double mu_q{0.0};
  int branch{-1};
};

void run_physical_point(const PhysicalOpts& o, bool have_qubit, bool bits,
                        const std::string& output_path) {
  SystemSpecd spec;
  spec.omega_m = o.omega_m;
  spec.quality_factor = o.quality_factor;
  spec.kappa_ex = o.kappa_ex;
  spec.kappa_0 = o.kappa_0;
  spec.g = o.g_single;
  spec.temperature = o.temperature;
  spec.delta_0 = o.delta_0;
  spec.drive_amplitude = o.drive;
  if (have_qubit) {
    bool warn = false;
    spec.eta = qubit_induced_coupling(QubitSpecd{o.delta_q, o.mu_q}, &warn);
    if (warn)
      std::fprintf(stderr,
                   "warning: mu_q/delta_q > 0.1, the dispersive elimination "
                   "behind eta is only perturbatively valid\n");
  } else {
    spec.eta = o.eta_si;
  }
  spec.validate();

  // Bare-detuning reduced set; the cubic then yields the working points.
  ReducedParamsd base = reduce(spec, spec.delta_0, 0.0);
  const double g_red = spec.g / spec.omega_m;
  const double alpha_red = spec.drive_amplitude / std::sqrt(spec.omega_m);
  const auto points = solve_fixed_points(base, g_red, alpha_red);

  std::printf("fixed points: %zu%s\n", points.size(),
              points.size() > 1 ? " (bistable region)" : "");
  for (const auto& fp : points) {
    const double nbar = fp.field_re * fp.field_re + fp.field_im * fp.field_im;
    std::printf("  branch %d: delta_eff=%s q=%s |a|^2=%s g_eff=%s%s\n",
                fp.branch_index, fmt(fp.delta_eff).c_str(),
                fmt(fp.position).c_str(), fmt(nbar).c_str(),
                fmt(fp.g_eff).c_str(), fp.degenerate ? "  [degenerate]" : "");
  }

  std::size_t chosen;
  if (o.branch >= 0) {
    if (static_cast<std::size_t>(o.branch) >= points.size())
      throw std::invalid_argument("point: branch index out of range");
    chosen = static_cast<std::size_t>(o.branch);
  } else {
    chosen = default_branch(points);
  }
  std::printf("selected branch %zu\n", chosen);

  ReducedParamsd p = base;
  p.delta = points[chosen].delta_eff;
  p.g_eff = points[chosen].g_eff;
  run_resolved_point(p, bits, output_path);
}

void print_sweep_summary(const SweepConfig& cfg,
                         const std::vector<SweepRow>& rows) {
  const std::size_t n_axis = static_cast<std::size_t>(cfg.axis_steps);
  for (std::size_t ei = 0; ei < cfg.eta_list.size(); ++ei) {
    std::vector<double> xs(n_axis), e_n(n_axis), i_m(n_axis), d_g(n_axis);
    std::size_t stable_count = 0;
    for (std::size_t ai = 0; ai < n_axis; ++ai) {
      const auto& r = rows[ei * n_axis + ai];
      xs[ai] = r.axis_value;
      e_n[ai] = r.e_n;
      i_m[ai] = r.i_m;
      d_g[ai] = r.d_g;
      if (r.stable) ++stable_count;
    }
    std::printf("eta=%s: %zu/%zu stable", fmt(cfg.eta_list[ei]).c_str(),
                stable_count, n_axis);
    if (stable_count > 0) {
      const auto pe = interpolated_maximum(xs, e_n);
      const auto pi = interpolated_maximum(xs, i_m);
      const auto pd = interpolated_maximum(xs, d_g);
      std::printf("; max E_N=%s at %s=%s; max I_M=%s at %s; max D_G=%s at %s",
                  fmt(pe.value).c_str(), axis_name(cfg.axis),
                  fmt(pe.axis_value).c_str(), fmt(pi.value).c_str(),
                  fmt(pi.axis_value).c_str(), fmt(pd.value).c_str(),
                  fmt(pd.axis_value).c_str());
    }
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Steady-state quantum correlations (entanglement, mutual information, "
      "Gaussian discord) of a linearized optomechanical cavity whose mirror "
      "is softened by a dispersively coupled qubit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "omcorr 1.0.0");

  // ---- point ----
  auto* point = app.add_subcommand(
      "point", "one parameter set: stability, covariance, all measures");
  KvOptions point_kv;
  add_fixed_param_flags(point, point_kv);
  add_output_flag(point, point_kv);
  bool point_bits = false;
  point->add_flag("--bits", point_bits,
                  "display measures in bits instead of nats (CSV stays nats)");

  PhysicalOpts phys;
  auto* phys_flag = point->add_flag(
      "--physical",
      "derive the working point from lab parameters via the classical fixed "
      "points (all rates in rad/s)");
  point->add_option("--omega-m-si", phys.omega_m, "mechanical frequency");
  point->add_option("--quality-factor", phys.quality_factor, "mechanical Q");
  point->add_option("--kappa-ex", phys.kappa_ex, "input-mirror cavity decay");
  point->add_option("--kappa-0", phys.kappa_0, "intrinsic cavity loss");
  point->add_option("--g-single", phys.g_single,
                    "single-photon optomechanical coupling");
  point->add_option("--delta-0", phys.delta_0, "bare cavity-drive detuning");
  point->add_option("--drive", phys.drive,
                    "input amplitude alpha_in, sqrt(photon flux)");
  point->add_option("--temperature-si", phys.temperature,
                    "bath temperature in K (physical mode)");
  point->add_option("--eta-si", phys.eta_si, "softening strength in rad/s");
  auto* opt_delta_q =
      point->add_option("--delta-q", phys.delta_q, "qubit splitting in rad/s");
  point->add_option("--mu-q", phys.mu_q,
                    "mirror-qubit interaction strength in rad/s");
  point->add_option("--branch", phys.branch,
                    "fixed-point branch index (default: smallest |q|)");

  // ---- stability-map ----
  auto* smap = app.add_subcommand(
      "stability-map", "stability verdict over a (delta, g_eff) grid");
  KvOptions smap_kv;
  add_fixed_param_flags(smap, smap_kv);
  add_output_flag(smap, smap_kv);
  smap_kv.add(smap, "--delta-min", "delta_min", "first detuning value");
  smap_kv.add(smap, "--delta-max", "delta_max", "last detuning value");
  smap_kv.add(smap, "--delta-steps", "delta_steps", "detuning samples");
  smap_kv.add(smap, "--g-min", "g_min", "first drive value");
  smap_kv.add(smap, "--g-max", "g_max", "last drive value");
  smap_kv.add(smap, "--g-steps", "g_steps", "drive samples");

  // ---- sweeps ----
  auto* sw_det = app.add_subcommand(
      "sweep-detuning", "measures vs effective detuning, one curve per eta");
  auto* sw_cpl = app.add_subcommand(
      "sweep-coupling", "measures vs drive strength, one curve per eta");
  auto* sw_th = app.add_subcommand(
      "sweep-thermal", "measures vs thermal occupation, one curve per eta");
  KvOptions det_kv, cpl_kv, th_kv;
  for (auto [cmd, kv] : {std::pair{sw_det, &det_kv}, {sw_cpl, &cpl_kv},
                         {sw_th, &th_kv}}) {
    add_fixed_param_flags(cmd, *kv);
    add_axis_flags(cmd, *kv);
    add_output_flag(cmd, *kv);
  }

  // ---- onset ----
  auto* onset = app.add_subcommand(
      "onset", "bisect the axis value where a predicate switches");
  KvOptions onset_kv;
  add_fixed_param_flags(onset, onset_kv);
  std::string onset_axis = "g_eff", onset_pred = "entangled",
              onset_dir = "rising";
  double onset_lo = 0.0, onset_hi = 0.0, onset_tol = 0.0;
  onset->add_option("--axis", onset_axis, "delta, g_eff, or n_th")
      ->capture_default_str();
  onset->add_option("--predicate", onset_pred, "entangled or stable")
      ->capture_default_str();
  onset->add_option("--direction", onset_dir,
                    "rising (false->true) or falling (true->false)")
      ->capture_default_str();
  onset->add_option("--lo", onset_lo, "bracket start")->required();
  onset->add_option("--hi", onset_hi, "bracket end")->required();
  onset->add_option("--tol", onset_tol,
                    "bisection tolerance (default 1e-4; 1.0 on n_th)");

  // ---- callbacks ----
  point->callback([&] {
    const bool physical = phys_flag->count() > 0;
    std::string out;
    if (point_kv.options.at("output_path")->count() > 0)
      out = point_kv.values.at("output_path");
    if (physical) {
      run_physical_point(phys, opt_delta_q->count() > 0, point_bits, out);
      return;
    }
    const SweepConfig cfg = sweep_config_from(point_kv.resolve("point"));
    run_resolved_point(cfg.fixed, point_bits, cfg.output_path);
  });

  smap->callback([&] {
    const SweepConfig cfg = sweep_config_from(smap_kv.resolve("stability-map"));
    const auto map = stability_map(cfg.fixed, cfg.grid);
    emit_stability_csv(map, cfg.output_path);
    std::size_t stable_count = 0;
    for (const auto s : map.stable) stable_count += s;
    std::printf("grid %zux%zu, %zu/%zu stable, closed-form disagreements: %ld\n",
                map.delta_values.size(), map.g_values.size(), stable_count,
                map.stable.size(), map.rh_disagreements);
    if (const auto ceiling = max_fully_stable_drive(map))
      std::printf("largest fully stable drive row: g=%s\n",
                  fmt(*ceiling).c_str());
    std::printf("wrote %s\n", cfg.output_path.c_str());
  });

  const auto sweep_callback = [&](KvOptions* kv, const char* mode) {
    return [kv, mode] {
      const SweepConfig cfg = sweep_config_from(kv->resolve(mode));
      const auto rows = run_sweep(cfg);
      emit_csv(rows, cfg.output_path);
      print_sweep_summary(cfg, rows);
      std::printf("wrote %s (%zu rows)\n", cfg.output_path.c_str(),
                  rows.size());
    };
  };
  sw_det->callback(sweep_callback(&det_kv, "sweep-detuning"));
  sw_cpl->callback(sweep_callback(&cpl_kv, "sweep-coupling"));
  sw_th->callback(sweep_callback(&th_kv, "sweep-thermal"));

  onset->callback([&] {
    const SweepConfig cfg = sweep_config_from(onset_kv.resolve("point"));
    OnsetQuery q;
    q.axis = axis_from_name(onset_axis);
    if (onset_pred == "entangled") q.predicate = OnsetPredicate::entangled;
    else if (onset_pred == "stable") q.predicate = OnsetPredicate::stable;
    else throw std::invalid_argument("onset: unknown predicate '" + onset_pred + "'");
    if (onset_dir == "rising") q.direction = OnsetDirection::rising;
    else if (onset_dir == "falling") q.direction = OnsetDirection::falling;
    else throw std::invalid_argument("onset: unknown direction '" + onset_dir + "'");
    q.lo = onset_lo;
    q.hi = onset_hi;
    q.tol = onset_tol;
    const double x = find_onset(q, cfg.fixed);
    std::printf("onset: %s = %s (%s, %s, bracket [%s, %s])\n",
                axis_name(q.axis), fmt(x).c_str(), onset_pred.c_str(),
                onset_dir.c_str(), fmt(q.lo).c_str(), fmt(q.hi).c_str());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const NoStationaryState&) {
    std::fprintf(stderr, "no stationary state at the requested point\n");
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
