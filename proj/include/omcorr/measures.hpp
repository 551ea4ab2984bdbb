#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "omcorr/dynamics.hpp"

namespace omcorr {

// Symplectic eigenvalues within this band below 1/2 are clamped to 1/2;
// further below is treated as an unphysical covariance matrix.
inline constexpr double physicality_tol = 1e-9;

// Local-symplectic invariants of a two-mode covariance matrix in block form
// V = [[Vm, Vmc], [Vmc^T, Vc]]: the three 2x2 subdeterminants and det V.
template <typename Scalar = double>
struct SymplecticInvariants {
  Scalar i1{};  // det of the mirror block
  Scalar i2{};  // det of the cavity block
  Scalar i3{};  // det of the cross-correlation block
  Scalar i4{};  // det of the full matrix
};

using SymplecticInvariantsd = SymplecticInvariants<double>;

template <typename Scalar>
SymplecticInvariants<Scalar> invariants(const Matrix4<Scalar>& v) {
  SymplecticInvariants<Scalar> inv;
  inv.i1 = v.template block<2, 2>(0, 0).determinant();
  inv.i2 = v.template block<2, 2>(2, 2).determinant();
  inv.i3 = v.template block<2, 2>(0, 2).determinant();
  inv.i4 = v.determinant();
  return inv;
}

namespace detail {

// The symplectic discriminants below are exact cancellations for pure states,
// so the roundoff residue scales with the squared operands, not with any
// absolute tolerance.  Snap |value| <= 256 eps * scale to zero; only a value
// below both the absolute floor (1e-9) and the roundoff band is a genuine
// physicality violation.
template <typename Scalar>
Scalar guarded_discriminant(Scalar value, Scalar scale) {
  const Scalar band =
      Scalar(256) * std::numeric_limits<Scalar>::epsilon() * scale;
  if (std::abs(value) <= band) return Scalar(0);
  if (value < -std::max(Scalar(physicality_tol), band))
    throw std::domain_error(
        "unphysical covariance matrix: negative symplectic discriminant");
  return std::max(value, Scalar(0));
}

template <typename Scalar>
Scalar guarded_sqrt(Scalar value, Scalar scale) {
  return std::sqrt(guarded_discriminant(value, scale));
}

}  // namespace detail

// Symplectic spectrum {nu_plus, nu_minus} of the two-mode state,
// nu^2 = (delta -+ sqrt(delta^2 - 4 i4)) / 2 with delta = i1 + i2 + 2 i3.
// Physical states have nu_minus >= 1/2.
template <typename Scalar>
std::pair<Scalar, Scalar> symplectic_eigenvalues(
    const SymplecticInvariants<Scalar>& inv) {
  const Scalar delta = inv.i1 + inv.i2 + Scalar(2) * inv.i3;
  const Scalar scale = delta * delta + Scalar(4) * std::abs(inv.i4);
  const Scalar root =
      detail::guarded_sqrt(delta * delta - Scalar(4) * inv.i4, scale);
  const Scalar hi = (delta + root) / Scalar(2);
  const Scalar lo = (delta - root) / Scalar(2);
  if (!(hi >= Scalar(0)) || lo < -Scalar(physicality_tol))
    throw std::domain_error(
        "unphysical covariance matrix: complex symplectic eigenvalue");
  return {std::sqrt(hi), std::sqrt(std::max(lo, Scalar(0)))};
}

template <typename Scalar = double>
struct LogNegativity {
  Scalar e_n{};
  Scalar nu_tilde_minus{};
};

using LogNegativityd = LogNegativity<double>;

// Logarithmic negativity from the partially transposed state: flipping the
// mirror momentum sends i3 -> -i3, and
// E_N = max(0, -ln 2 nu~_minus) with nu~ the smaller PT symplectic eigenvalue.
template <typename Scalar>
LogNegativity<Scalar> log_negativity(const SymplecticInvariants<Scalar>& inv) {
  const Scalar delta_pt = inv.i1 + inv.i2 - Scalar(2) * inv.i3;
  const Scalar scale = delta_pt * delta_pt + Scalar(4) * std::abs(inv.i4);
  const Scalar root =
      detail::guarded_sqrt(delta_pt * delta_pt - Scalar(4) * inv.i4, scale);
  const Scalar lo = (delta_pt - root) / Scalar(2);
  if (!(lo > Scalar(0)))
    throw std::domain_error(
        "log_negativity: partial transpose has singular symplectic spectrum");
  LogNegativity<Scalar> out;
  out.nu_tilde_minus = std::sqrt(lo);
  out.e_n = std::max(Scalar(0), -std::log(Scalar(2) * out.nu_tilde_minus));
  return out;
}

// Bosonic entropy kernel f(x) = (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2),
// natural log, with f(1/2) = 0.  Arguments within physicality_tol below 1/2
// are clamped; smaller arguments are unphysical.  The !(x >= ...) form also
// rejects NaN.
template <typename Scalar>
Scalar f_function(Scalar x) {
  if (!(x >= Scalar(0.5) - Scalar(physicality_tol)))
    throw std::domain_error("f_function: argument below the vacuum floor");
  x = std::max(x, Scalar(0.5));
  const Scalar y = x - Scalar(0.5);
  const Scalar grow = (x + Scalar(0.5)) * std::log(x + Scalar(0.5));
  return (y > Scalar(0)) ? grow - y * std::log(y) : grow;
}

// Quantum mutual information I_M = f(sqrt I1) + f(sqrt I2) - f(nu+) - f(nu-).
template <typename Scalar>
Scalar mutual_information(const SymplecticInvariants<Scalar>& inv) {
  const auto [nu_plus, nu_minus] = symplectic_eigenvalues(inv);
  const Scalar val = f_function(std::sqrt(inv.i1)) +
                     f_function(std::sqrt(inv.i2)) - f_function(nu_plus) -
                     f_function(nu_minus);
  return std::max(Scalar(0), val);
}

template <typename Scalar = double>
struct GaussianDiscord {
  Scalar d_g{};
  Scalar w{};      // minimized conditional purity parameter
  int w_branch{};  // which closed-form branch produced w
};

using GaussianDiscordd = GaussianDiscord<double>;

// Gaussian quantum discord under measurements on the cavity mode:
// D_G = f(sqrt I2) - f(nu+) - f(nu-) + f(sqrt W), with W from the closed-form
// two-branch minimization.  Branch 1 applies when
// 4 (I1 I2 - I4)^2 <= (I1 + 4 I4)(1 + 4 I2) I3^2; vanishing cross
// correlations short-circuit to branch 2.
template <typename Scalar>
GaussianDiscord<Scalar> gaussian_discord(const SymplecticInvariants<Scalar>& inv) {
  const Scalar i1 = inv.i1, i2 = inv.i2, i3 = inv.i3, i4 = inv.i4;
  GaussianDiscord<Scalar> out;

  bool branch1 = false;
  if (i3 * i3 >= Scalar(1e-12)) {
    const Scalar lhs = Scalar(4) * (i1 * i2 - i4) * (i1 * i2 - i4);
    const Scalar rhs =
        (i1 + Scalar(4) * i4) * (Scalar(1) + Scalar(4) * i2) * i3 * i3;
    branch1 = lhs <= rhs;
  }

  if (branch1) {
    const Scalar inner =
        Scalar(4) * i3 * i3 + (Scalar(4) * i2 - Scalar(1)) * (Scalar(4) * i4 - i1);
    const Scalar scale = Scalar(4) * i3 * i3 +
                         std::abs((Scalar(4) * i2 - Scalar(1)) *
                                  (Scalar(4) * i4 - i1));
    const Scalar root = detail::guarded_sqrt(inner, scale);
    const Scalar num = Scalar(2) * std::abs(i3) + root;
    const Scalar den = Scalar(4) * i2 - Scalar(1);
    if (!(den > Scalar(0)))
      throw std::domain_error(
          "gaussian_discord: cavity block at or below the vacuum floor");
    out.w = (num / den) * (num / den);
    out.w_branch = 1;
  } else {
    const Scalar x = i1 * i2 + i4 - i3 * i3;
    const Scalar scale = x * x + Scalar(4) * std::abs(i1 * i2 * i4);
    const Scalar root =
        detail::guarded_sqrt(x * x - Scalar(4) * i1 * i2 * i4, scale);
    out.w = (x - root) / (Scalar(2) * i2);
    out.w_branch = 2;
  }

  if (!(out.w >= Scalar(0.25) - Scalar(physicality_tol)))
    throw std::domain_error(
        "gaussian_discord: minimized conditional state is unphysical");
  out.w = std::max(out.w, Scalar(0.25));

  const auto [nu_plus, nu_minus] = symplectic_eigenvalues(inv);
  const Scalar val = f_function(std::sqrt(i2)) - f_function(nu_plus) -
                     f_function(nu_minus) + f_function(std::sqrt(out.w));
  out.d_g = std::max(Scalar(0), val);
  return out;
}

// All correlation measures of one covariance matrix in a single pass.
template <typename Scalar = double>
struct CorrelationReport {
  SymplecticInvariants<Scalar> inv;
  Scalar nu_plus{}, nu_minus{};
  Scalar nu_tilde_minus{};
  Scalar e_n{};
  Scalar i_m{};
  Scalar d_g{};
  Scalar w{};
  int w_branch{};
};

using CorrelationReportd = CorrelationReport<double>;

template <typename Scalar>
CorrelationReport<Scalar> report(const Matrix4<Scalar>& v) {
  CorrelationReport<Scalar> r;
  r.inv = invariants(v);
  std::tie(r.nu_plus, r.nu_minus) = symplectic_eigenvalues(r.inv);
  const auto ln = log_negativity(r.inv);
  r.nu_tilde_minus = ln.nu_tilde_minus;
  r.e_n = ln.e_n;
  r.i_m = mutual_information(r.inv);
  const auto dg = gaussian_discord(r.inv);
  r.d_g = dg.d_g;
  r.w = dg.w;
  r.w_branch = dg.w_branch;
  return r;
}

}  // namespace omcorr
