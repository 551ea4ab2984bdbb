#include "omcorr/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "omcorr/lyapunov.hpp"
#include "omcorr/measures.hpp"
#include "omcorr/parallel.hpp"

namespace omcorr {

const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::detuning: return "delta";
    case SweepAxis::coupling: return "g_eff";
    case SweepAxis::thermal: return "n_th";
  }
  throw std::invalid_argument("axis_name: unknown axis");
}

SweepAxis axis_from_name(const std::string& name) {
  if (name == "delta") return SweepAxis::detuning;
  if (name == "g_eff" || name == "g") return SweepAxis::coupling;
  if (name == "n_th") return SweepAxis::thermal;
  throw std::invalid_argument("unknown axis '" + name +
                              "' (expected delta, g_eff, or n_th)");
}

void set_axis_value(ReducedParamsd& p, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::detuning: p.delta = value; return;
    case SweepAxis::coupling: p.g_eff = value; return;
    case SweepAxis::thermal: p.n_th = value; return;
  }
  throw std::invalid_argument("set_axis_value: unknown axis");
}

const char* mode_name(SweepMode mode) {
  switch (mode) {
    case SweepMode::point: return "point";
    case SweepMode::stability_map: return "stability-map";
    case SweepMode::sweep_detuning: return "sweep-detuning";
    case SweepMode::sweep_coupling: return "sweep-coupling";
    case SweepMode::sweep_thermal: return "sweep-thermal";
  }
  throw std::invalid_argument("mode_name: unknown mode");
}

SweepMode mode_from_name(const std::string& name) {
  if (name == "point") return SweepMode::point;
  if (name == "stability-map") return SweepMode::stability_map;
  if (name == "sweep-detuning") return SweepMode::sweep_detuning;
  if (name == "sweep-coupling") return SweepMode::sweep_coupling;
  if (name == "sweep-thermal") return SweepMode::sweep_thermal;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

namespace {

SweepAxis axis_for_mode(SweepMode mode) {
  switch (mode) {
    case SweepMode::sweep_detuning: return SweepAxis::detuning;
    case SweepMode::sweep_coupling: return SweepAxis::coupling;
    case SweepMode::sweep_thermal: return SweepAxis::thermal;
    default:
      throw std::invalid_argument("mode has no sweep axis");
  }
}

}  // namespace

void SweepConfig::validate() const {
  if (eta_list.empty())
    throw std::invalid_argument("SweepConfig: eta_list must not be empty");
  for (const double e : eta_list)
    if (!(e >= 0.0))
      throw std::invalid_argument("SweepConfig: eta values must be >= 0");
  if (mode == SweepMode::point) return;
  if (output_path.empty())
    throw std::invalid_argument("SweepConfig: output_path is required");
  if (mode == SweepMode::stability_map) {
    grid.validate();
    if (eta_list.size() != 1)
      throw std::invalid_argument(
          "SweepConfig: stability map takes a single eta");
    return;
  }
  if (axis != axis_for_mode(mode))
    throw std::invalid_argument(
        std::string("SweepConfig: mode ") + mode_name(mode) +
        " sweeps axis " + axis_name(axis_for_mode(mode)));
  if (axis_steps < 2)
    throw std::invalid_argument("SweepConfig: axis_steps must be >= 2");
  if (!(axis_min < axis_max))
    throw std::invalid_argument("SweepConfig: axis_min must be < axis_max");
  if (axis != SweepAxis::detuning && !(axis_min >= 0.0))
    throw std::invalid_argument("SweepConfig: axis_min must be >= 0");
}

SweepRow run_point(const ReducedParamsd& p) {
  p.validate();
  SweepRow row;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.axis_value = nan;
  row.eta = p.eta;
  row.e_n = row.i_m = row.d_g = row.nu_tilde_minus = nan;

  const auto verdict = assess_stability(p);
  row.stable = verdict.stable;
  if (!row.stable) return row;

  const auto sol = solve_lyapunov(build_drift(p), build_diffusion(p));
  row.cond_flag = sol.ill_conditioned;
  const auto rep = report(sol.v);
  row.e_n = rep.e_n;
  row.i_m = rep.i_m;
  row.d_g = rep.d_g;
  row.nu_tilde_minus = rep.nu_tilde_minus;
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int workers) {
  cfg.validate();
  if (cfg.mode != SweepMode::sweep_detuning &&
      cfg.mode != SweepMode::sweep_coupling &&
      cfg.mode != SweepMode::sweep_thermal)
    throw std::invalid_argument("run_sweep: not a sweep mode");

  const auto axis_values = linspace(cfg.axis_min, cfg.axis_max, cfg.axis_steps);
  const std::size_t n_axis = axis_values.size();
  const std::size_t total = cfg.eta_list.size() * n_axis;
  std::vector<SweepRow> rows(total);

  parallel_for(
      total,
      [&](std::size_t idx) {
        const std::size_t ei = idx / n_axis;
        const std::size_t ai = idx % n_axis;
        ReducedParamsd p = cfg.fixed;
        p.eta = cfg.eta_list[ei];
        set_axis_value(p, cfg.axis, axis_values[ai]);
        rows[idx] = run_point(p);
        rows[idx].axis_value = axis_values[ai];
      },
      workers);
  return rows;
}

double find_onset(const OnsetQuery& q, const ReducedParamsd& base) {
  if (!(q.lo < q.hi))
    throw std::invalid_argument("find_onset: need lo < hi");
  double tol = q.tol;
  if (!(tol > 0.0)) tol = (q.axis == SweepAxis::thermal) ? 1.0 : 1e-4;

  const auto holds = [&](double x) {
    ReducedParamsd p = base;
    set_axis_value(p, q.axis, x);
    const auto verdict = assess_stability(p);
    if (q.predicate == OnsetPredicate::stable) return verdict.stable;
    if (!verdict.stable) return false;
    const auto sol = solve_lyapunov(build_drift(p), build_diffusion(p));
    return log_negativity(invariants(sol.v)).nu_tilde_minus < 0.5;
  };

  double lo = q.lo, hi = q.hi;
  const bool at_lo = holds(lo);
  const bool at_hi = holds(hi);
  if (at_lo == at_hi)
    throw std::runtime_error(
        "find_onset: predicate does not change across the bracket");
  const bool expect_rising = (q.direction == OnsetDirection::rising);
  if (at_lo == expect_rising)
    throw std::runtime_error(
        "find_onset: bracket orientation contradicts the requested direction");

  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (holds(mid) == at_lo)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

PeakEstimate interpolated_maximum(const std::vector<double>& axis,
                                  const std::vector<double>& values) {
  if (axis.size() != values.size() || axis.empty())
    throw std::invalid_argument(
        "interpolated_maximum: need equally sized, nonempty inputs");

  std::size_t best = axis.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) continue;
    if (best == axis.size() || values[i] > values[best]) best = i;
  }
  if (best == axis.size())
    throw std::runtime_error("interpolated_maximum: no finite samples");

  PeakEstimate peak{axis[best], values[best], false};
  if (best == 0 || best + 1 == axis.size()) return peak;
  const double x0 = axis[best - 1], x1 = axis[best], x2 = axis[best + 1];
  const double y0 = values[best - 1], y1 = values[best], y2 = values[best + 1];
  if (!std::isfinite(y0) || !std::isfinite(y2)) return peak;

  // Vertex of the parabola through the three bracketing samples.
  const double d1 = (y1 - y0) / (x1 - x0);
  const double d2 = (y2 - y1) / (x2 - x1);
  const double curv = (d2 - d1) / (x2 - x0);  // half the second derivative
  if (!(curv < 0.0)) return peak;
  const double x_star = 0.5 * (x0 + x1) - d1 / (2.0 * curv);
  // Evaluate the same parabola at its vertex.
  const double y_star = y0 + d1 * (x_star - x0) + curv * (x_star - x0) * (x_star - x1);
  if (!(x_star >= x0 && x_star <= x2)) return peak;
  peak.axis_value = x_star;
  peak.value = y_star;
  peak.interpolated = true;
  return peak;
}

}  // namespace omcorr
