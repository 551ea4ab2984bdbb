#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "omcorr/parallel.hpp"
#include "omcorr/params.hpp"

namespace omcorr {

template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
using Matrix4d = Matrix4<double>;

// Eigenvalue real parts within this band of zero count as marginal: neither
// verdict is trusted there and no stationary solve is attempted.
inline constexpr double stability_margin_tol = 1e-9;

// Drift matrix of the linearized fluctuation dynamics in the quadrature basis
// (dq, dp, dX, dY), mechanical-frequency units.  The softening term eta
// weakens the mirror restoring force; g_eff couples mirror position to the
// amplitude quadrature.
template <typename Scalar>
Matrix4<Scalar> build_drift(const ReducedParams<Scalar>& p) {
  Matrix4<Scalar> a;
  a << Scalar(0), Scalar(1), Scalar(0), Scalar(0),
      -(Scalar(1) - p.eta), -p.gamma_m, p.g_eff, Scalar(0),
      Scalar(0), Scalar(0), -p.kappa, p.delta,
      p.g_eff, Scalar(0), -p.delta, -p.kappa;
  return a;
}

// Diffusion matrix of the same dynamics: mechanical momentum heated by the
// thermal bath, optical quadratures by vacuum noise (variance 1/2 convention).
template <typename Scalar>
Matrix4<Scalar> build_diffusion(const ReducedParams<Scalar>& p) {
  Matrix4<Scalar> d = Matrix4<Scalar>::Zero();
  d(1, 1) = p.gamma_m * (Scalar(2) * p.n_th + Scalar(1));
  d(2, 2) = p.kappa;
  d(3, 3) = p.kappa;
  return d;
}

// Drive strength at which the stationary state ceases to exist on the
// red-detuned side: g_thres = sqrt((delta^2 + kappa^2)(1 - eta) / delta).
// Softening lowers the threshold.  Only delta > 0 gives a finite threshold.
template <typename Scalar>
Scalar threshold_coupling(Scalar delta, Scalar kappa, Scalar eta) {
  if (!(kappa > Scalar(0)))
    throw std::invalid_argument("threshold_coupling: kappa must be > 0");
  if (!(eta < Scalar(1)))
    throw std::domain_error(
        "threshold_coupling: eta >= 1 unbinds the mirror; threshold undefined");
  if (!(delta > Scalar(0)))
    throw std::domain_error(
        "threshold_coupling: no finite threshold for delta <= 0");
  return std::sqrt((delta * delta + kappa * kappa) * (Scalar(1) - eta) / delta);
}

// Closed-form stability margins of the quartic characteristic polynomial.
// Both must be positive for stability.  The first is the Hurwitz-determinant
// condition, the second the zero-frequency (static bistability) condition
//   (delta^2 + kappa^2)(1 - eta) - g_eff^2 delta > 0,
// which is what actually binds in the red-detuned regime.  The eigenvalue
// check in assess_stability is authoritative; these margins are diagnostics.
template <typename Scalar>
std::pair<Scalar, Scalar> rh_margins(const ReducedParams<Scalar>& p) {
  const Scalar d = p.delta, k = p.kappa, gm = p.gamma_m, ge = p.g_eff,
               eta = p.eta;
  const Scalar d2 = d * d, k2 = k * k, gm2 = gm * gm;
  const Scalar first =
      Scalar(2) * gm *
          (d2 * d2 +
           d2 * (gm2 + Scalar(2) * gm * k + Scalar(2) * k2 - Scalar(2)) +
           (gm * k + k2 + Scalar(1)) * (gm * k + k2 + Scalar(1))) +
      ge * ge * d * (gm + Scalar(2) * k) * (gm + Scalar(2) * k) +
      Scalar(4) * eta * gm * k * (d2 - gm * k - k2 - Scalar(1)) +
      Scalar(2) * eta * eta * gm * k;
  const Scalar second = (d2 + k2) * (Scalar(1) - eta) - ge * ge * d;
  return {first, second};
}

template <typename Scalar>
bool is_stable_rh(const ReducedParams<Scalar>& p) {
  const auto [first, second] = rh_margins(p);
  return first > Scalar(0) && second > Scalar(0);
}

template <typename Scalar>
Scalar max_real_eigenvalue(const Matrix4<Scalar>& a) {
  Eigen::EigenSolver<Matrix4<Scalar>> es(a, /*computeEigenvectors=*/false);
  return es.eigenvalues().real().maxCoeff();
}

// Combined verdict.  stable is decided by the drift spectrum (all real parts
// strictly negative, outside the marginal band); the closed-form margins ride
// along, with method_agreement false when the two methods disagree away from
// the margin band.
template <typename Scalar = double>
struct StabilityVerdict {
  bool stable{false};
  bool marginal{false};
  Scalar max_real_eigenvalue{};
  Scalar rh_condition_1{};
  Scalar rh_condition_2{};
  bool method_agreement{true};
};

using StabilityVerdictd = StabilityVerdict<double>;

template <typename Scalar>
StabilityVerdict<Scalar> assess_stability(const ReducedParams<Scalar>& p) {
  p.validate();
  StabilityVerdict<Scalar> v;
  v.max_real_eigenvalue = max_real_eigenvalue(build_drift(p));
  const Scalar tol = Scalar(stability_margin_tol);
  v.marginal = std::abs(v.max_real_eigenvalue) <= tol;
  v.stable = v.max_real_eigenvalue < -tol;
  const auto [first, second] = rh_margins(p);
  v.rh_condition_1 = first;
  v.rh_condition_2 = second;
  const bool rh_stable = first > Scalar(0) && second > Scalar(0);
  const bool near_margin =
      v.marginal || std::min(std::abs(first), std::abs(second)) <= tol;
  v.method_agreement = (rh_stable == v.stable) || near_margin;
  return v;
}

// Rectangular (delta, g_eff) stability scan.
struct StabilityGrid {
  double delta_min{0.0}, delta_max{1.2};
  int delta_steps{241};
  double g_min{0.0}, g_max{1.2};
  int g_steps{241};

  void validate() const {
    if (delta_steps < 2 || g_steps < 2)
      throw std::invalid_argument("StabilityGrid: need at least 2 steps per axis");
    if (!(delta_min <= delta_max) || !(g_min <= g_max))
      throw std::invalid_argument("StabilityGrid: min must not exceed max");
  }
};

template <typename Scalar>
std::vector<Scalar> linspace(Scalar lo, Scalar hi, int steps) {
  if (steps < 2) throw std::invalid_argument("linspace: need at least 2 steps");
  std::vector<Scalar> v(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i)
    v[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * Scalar(i) / Scalar(steps - 1);
  return v;
}

// Verdicts stored delta-major: entry(di, gi) = di * g_steps + gi.
template <typename Scalar = double>
struct StabilityMapResult {
  std::vector<Scalar> delta_values;
  std::vector<Scalar> g_values;
  std::vector<std::uint8_t> stable;
  std::vector<Scalar> max_re_eig;
  long rh_disagreements{0};
};

using StabilityMapResultd = StabilityMapResult<double>;

// Evaluate the verdict on every grid point.  Points are independent and run
// on the worker pool; results land in per-index slots, so the map is
// byte-for-byte reproducible regardless of worker count.
template <typename Scalar>
StabilityMapResult<Scalar> stability_map(const ReducedParams<Scalar>& base,
                                         const StabilityGrid& grid,
                                         int workers = 0) {
  grid.validate();
  StabilityMapResult<Scalar> map;
  map.delta_values = linspace(Scalar(grid.delta_min), Scalar(grid.delta_max),
                              grid.delta_steps);
  map.g_values = linspace(Scalar(grid.g_min), Scalar(grid.g_max), grid.g_steps);
  const std::size_t total = map.delta_values.size() * map.g_values.size();
  map.stable.assign(total, 0);
  map.max_re_eig.assign(total, Scalar(0));
  std::vector<std::uint8_t> disagree(total, 0);

  parallel_for(
      total,
      [&](std::size_t idx) {
        const std::size_t di = idx / map.g_values.size();
        const std::size_t gi = idx % map.g_values.size();
        ReducedParams<Scalar> p = base;
        p.delta = map.delta_values[di];
        p.g_eff = map.g_values[gi];
        const auto v = assess_stability(p);
        map.stable[idx] = v.stable ? 1 : 0;
        map.max_re_eig[idx] = v.max_real_eigenvalue;
        disagree[idx] = v.method_agreement ? 0 : 1;
      },
      workers);

  for (const auto d : disagree) map.rh_disagreements += d;
  return map;
}

// Largest drive value whose entire detuning row is stable: the height of the
// unconditionally stable band below the instability tongue.
template <typename Scalar>
std::optional<Scalar> max_fully_stable_drive(const StabilityMapResult<Scalar>& map) {
  std::optional<Scalar> best;
  const std::size_t ng = map.g_values.size();
  const std::size_t nd = map.delta_values.size();
  for (std::size_t gi = 0; gi < ng; ++gi) {
    bool all = true;
    for (std::size_t di = 0; di < nd; ++di)
      if (!map.stable[di * ng + gi]) {
        all = false;
        break;
      }
    if (all && (!best || map.g_values[gi] > *best)) best = map.g_values[gi];
  }
  return best;
}

}  // namespace omcorr
