#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "omcorr/params.hpp"

namespace omcorr {

// One classical working point of the driven cavity-mirror system.  position is
// the static mirror displacement, (field_re, field_im) the intracavity
// amplitude in the lab gauge; the linearized pipeline only needs |field|, via
// g_eff.  branch_index orders coexisting solutions by ascending delta_eff.
template <typename Scalar = double>
struct ClassicalFixedPoint {
  Scalar position{};
  Scalar momentum{};  // zero at stationarity, kept for completeness
  Scalar field_re{};
  Scalar field_im{};
  Scalar delta_eff{};
  Scalar g_eff{};
  int branch_index{0};
  bool degenerate{false};
};

using ClassicalFixedPointd = ClassicalFixedPoint<double>;

// Field-enhanced coupling sqrt(2) * g * |a|; the sqrt(2) converts the photon
// amplitude to the quadrature normalization used by the drift matrix.
template <typename Scalar>
Scalar effective_coupling(Scalar g_single, Scalar field_magnitude) {
  return std::sqrt(Scalar(2)) * g_single * field_magnitude;
}

namespace detail {

// Real roots of the monic cubic x^3 + c2 x^2 + c1 x + c0 via the companion
// matrix, each polished by a few Newton steps.
template <typename Scalar>
std::vector<Scalar> real_cubic_roots(Scalar c2, Scalar c1, Scalar c0) {
  Eigen::Matrix<Scalar, 3, 3> companion;
  companion.setZero();
  companion(1, 0) = Scalar(1);
  companion(2, 1) = Scalar(1);
  companion(0, 2) = -c0;
  companion(1, 2) = -c1;
  companion(2, 2) = -c2;
  Eigen::EigenSolver<Eigen::Matrix<Scalar, 3, 3>> es(companion);

  std::vector<Scalar> roots;
  for (int i = 0; i < 3; ++i) {
    const auto lambda = es.eigenvalues()(i);
    const Scalar mag = std::max(Scalar(1), std::abs(lambda));
    if (std::abs(lambda.imag()) > Scalar(1e-8) * mag) continue;
    Scalar x = lambda.real();
    for (int it = 0; it < 3; ++it) {
      const Scalar f = ((x + c2) * x + c1) * x + c0;
      const Scalar df = (Scalar(3) * x + Scalar(2) * c2) * x + c1;
      if (std::abs(df) < Scalar(1e-300)) break;
      x -= f / df;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace detail

// Classical fixed points of the driven system.  p.delta is read as the *bare*
// detuning delta_0; the self-consistent effective detunings solve the cubic
//   delta^3 - delta_0 delta^2 + kappa^2 delta - (delta_0 kappa^2 - C) = 0,
// C = 2 g^2 kappa_ex alpha_in^2 / (1 - eta), which has one or three real
// solutions (radiation-pressure bistability).  Roots closer than 1e-8 are
// flagged degenerate.  All quantities in mechanical-frequency units.
template <typename Scalar>
std::vector<ClassicalFixedPoint<Scalar>> solve_fixed_points(
    const ReducedParams<Scalar>& p, Scalar g_single, Scalar alpha_in) {
  p.validate();
  if (!(g_single >= Scalar(0)))
    throw std::invalid_argument("solve_fixed_points: g must be >= 0");
  if (!(alpha_in >= Scalar(0)))
    throw std::invalid_argument("solve_fixed_points: drive amplitude must be >= 0");
  if (p.eta >= Scalar(1))
    throw std::domain_error(
        "solve_fixed_points: softening eta >= 1 unbinds the mirror; "
        "no bound steady state");

  const Scalar delta_0 = p.delta;
  const Scalar kappa_ex = p.kappa * p.kappa_ex_frac;
  const Scalar drive_c =
      Scalar(2) * g_single * g_single * kappa_ex * alpha_in * alpha_in /
      (Scalar(1) - p.eta);

  const auto make_point = [&](Scalar delta_eff) {
    ClassicalFixedPoint<Scalar> fp;
    const Scalar denom = p.kappa * p.kappa + delta_eff * delta_eff;
    const Scalar scale = std::sqrt(Scalar(2) * kappa_ex) * alpha_in / denom;
    fp.field_re = scale * p.kappa;
    fp.field_im = -scale * delta_eff;
    const Scalar amp = std::hypot(fp.field_re, fp.field_im);
    fp.position = (g_single > Scalar(0))
                      ? (delta_0 - delta_eff) / g_single
                      : Scalar(0);
    fp.momentum = Scalar(0);
    fp.delta_eff = delta_eff;
    fp.g_eff = effective_coupling(g_single, amp);
    return fp;
  };

  std::vector<ClassicalFixedPoint<Scalar>> points;
  if (drive_c == Scalar(0)) {
    // Undriven cavity or vanishing coupling: the mirror stays at rest and the
    // detuning is unshifted.
    points.push_back(make_point(delta_0));
  } else {
    const auto roots = detail::real_cubic_roots(
        -delta_0, p.kappa * p.kappa, drive_c - delta_0 * p.kappa * p.kappa);
    if (roots.empty())
      throw std::runtime_error("solve_fixed_points: cubic produced no real root");
    for (const Scalar r : roots) points.push_back(make_point(r));
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i].branch_index = static_cast<int>(i);
    if (i + 1 < points.size()) {
      const Scalar gap = points[i + 1].delta_eff - points[i].delta_eff;
      const Scalar ref = std::max(Scalar(1), std::abs(points[i].delta_eff));
      if (std::abs(gap) < Scalar(1e-8) * ref) {
        points[i].degenerate = true;
        points[i + 1].degenerate = true;
      }
    }
  }
  return points;
}

// Preferred branch for reporting: the fixed point with the smallest static
// displacement (the branch continuously connected to the undriven mirror).
template <typename Scalar>
std::size_t default_branch(const std::vector<ClassicalFixedPoint<Scalar>>& points) {
  if (points.empty())
    throw std::invalid_argument("default_branch: no fixed points");
  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (std::abs(points[i].position) < std::abs(points[best].position)) best = i;
  return best;
}

}  // namespace omcorr
