#pragma once

#include <string>
#include <vector>

#include "omcorr/dynamics.hpp"
#include "omcorr/params.hpp"

namespace omcorr {

enum class SweepMode {
  point,
  stability_map,
  sweep_detuning,
  sweep_coupling,
  sweep_thermal,
};

enum class SweepAxis { detuning, coupling, thermal };

// Axis names as they appear in config files and CSV ("delta", "g_eff", "n_th").
const char* axis_name(SweepAxis axis);
SweepAxis axis_from_name(const std::string& name);
void set_axis_value(ReducedParamsd& p, SweepAxis axis, double value);

const char* mode_name(SweepMode mode);
SweepMode mode_from_name(const std::string& name);

// One resolved job description: what to compute and where to write it.
// `fixed` supplies every parameter; the swept axis and eta are overwritten
// point by point (eta taken from eta_list for the sweep modes).
struct SweepConfig {
  SweepMode mode{SweepMode::point};
  ReducedParamsd fixed{};
  SweepAxis axis{SweepAxis::detuning};
  double axis_min{0.0};
  double axis_max{0.0};
  int axis_steps{0};
  std::vector<double> eta_list{0.0};
  StabilityGrid grid{};  // stability-map mode only
  std::string output_path{};

  void validate() const;
};

// One computed point.  Measures are NaN (emitted as NA) when no stationary
// state exists.
struct SweepRow {
  double axis_value{};
  double eta{};
  bool stable{false};
  double e_n{};
  double i_m{};
  double d_g{};
  double nu_tilde_minus{};
  bool cond_flag{false};
};

// Stability check, stationary covariance, and all correlation measures for a
// single parameter set.  Unstable or marginal points come back with
// stable = false and NaN measures instead of an error.
SweepRow run_point(const ReducedParamsd& p);

// Grid evaluation for the three sweep modes, eta-outer / axis-inner ordering.
// workers <= 0 uses the OMCORR_THREADS / hardware default; row order and
// content are independent of the worker count.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int workers = 0);

enum class OnsetPredicate { entangled, stable };
enum class OnsetDirection { rising, falling };

// Bisection query for the axis value where a predicate switches.  The bracket
// must actually straddle a transition in the stated direction (rising: false
// at lo, true at hi); anything else is an error, never a silent answer.
// tol <= 0 selects 1e-4 for the detuning/coupling axes and 1.0 for the
// thermal axis.
struct OnsetQuery {
  SweepAxis axis{SweepAxis::coupling};
  OnsetPredicate predicate{OnsetPredicate::entangled};
  OnsetDirection direction{OnsetDirection::rising};
  double lo{0.0};
  double hi{0.0};
  double tol{0.0};
};

double find_onset(const OnsetQuery& q, const ReducedParamsd& base);

// Peak location refined by the quadratic through the three samples around the
// discrete maximum; falls back to the raw grid point at the edges or when the
// fit is not concave.  NaN samples are ignored.
struct PeakEstimate {
  double axis_value{};
  double value{};
  bool interpolated{false};
};

PeakEstimate interpolated_maximum(const std::vector<double>& axis,
                                  const std::vector<double>& values);

}  // namespace omcorr
