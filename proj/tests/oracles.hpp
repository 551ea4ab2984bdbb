// Independent cross-checks used by the unit and acceptance suites.  Nothing
// here reuses the library's derivation paths: symplectic spectra come from an
// explicit i*Omega*V eigenproblem, discord from a direct minimization over
// Gaussian measurements, random states from exponentiated symplectic
// generators, and cubic roots from a sign-scan bisection.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "omcorr/measures.hpp"

namespace oracles {

using Matrix2d = Eigen::Matrix2d;
using Matrix4d = Eigen::Matrix4d;

inline Matrix4d symplectic_form() {
  Matrix4d omega = Matrix4d::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

// |eigenvalues| of i Omega V, sorted ascending.  For a physical two-mode
// covariance matrix these are {nu-, nu-, nu+, nu+}.
inline std::array<double, 4> symplectic_spectrum_abs(const Matrix4d& v) {
  const Matrix4d m = symplectic_form() * v;
  const Eigen::EigenSolver<Matrix4d> es(m);
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()(i));
  std::sort(out.begin(), out.end());
  return out;
}

// Smallest symplectic eigenvalue after the mirror-momentum flip (partial
// transposition of the mirror mode).
inline double pt_min_symplectic(const Matrix4d& v) {
  Matrix4d p = Matrix4d::Identity();
  p(1, 1) = -1.0;
  return symplectic_spectrum_abs(p * v * p)[0];
}

// Random symplectic matrix S = exp(Omega K), K symmetric with entries in
// [-scale, scale].
inline Matrix4d random_symplectic(std::mt19937& rng, double scale = 0.4) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix4d k;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) k(i, j) = k(j, i) = u(rng);
  return (symplectic_form() * k).exp();
}

// Random physical covariance matrix V = S diag(n1, n1, n2, n2) S^T with
// thermal symplectic eigenvalues n1, n2 >= 1/2.
inline Matrix4d random_physical_cm(std::mt19937& rng, double n_max = 3.0,
                                   double squeeze_scale = 0.4) {
  std::uniform_real_distribution<double> u(0.5, n_max);
  const double n1 = u(rng), n2 = u(rng);
  Eigen::Vector4d diag(n1, n1, n2, n2);
  const Matrix4d s = random_symplectic(rng, squeeze_scale);
  return s * diag.asDiagonal() * s.transpose();
}

// Random block-diagonal (local) symplectic transformation.
inline Matrix4d random_local_symplectic(std::mt19937& rng, double scale = 0.4) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix2d omega2;
  omega2 << 0.0, 1.0, -1.0, 0.0;
  Matrix4d s = Matrix4d::Zero();
  for (int b = 0; b < 2; ++b) {
    Matrix2d k;
    k(0, 0) = u(rng);
    k(1, 1) = u(rng);
    k(0, 1) = k(1, 0) = u(rng);
    s.block<2, 2>(2 * b, 2 * b) = (omega2 * k).exp();
  }
  return s;
}

// Two-mode squeezed vacuum, variance-1/2 convention; optional thermal
// occupations of the two input modes.
inline Matrix4d two_mode_squeezed(double r, double n1 = 0.0, double n2 = 0.0) {
  const double c = std::cosh(2.0 * r), s = std::sinh(2.0 * r);
  const double a = n1 + 0.5, b = n2 + 0.5;
  Matrix4d v = Matrix4d::Zero();
  v.block<2, 2>(0, 0) = 0.5 * ((a + b) * c + (a - b)) * Matrix2d::Identity();
  v.block<2, 2>(2, 2) = 0.5 * ((a + b) * c - (a - b)) * Matrix2d::Identity();
  Matrix2d cross;
  cross << 1.0, 0.0, 0.0, -1.0;
  v.block<2, 2>(0, 2) = 0.5 * (a + b) * s * cross;
  v.block<2, 2>(2, 0) = v.block<2, 2>(0, 2).transpose();
  return v;
}

// Gaussian discord by direct minimization of the conditional mirror entropy
// over Gaussian measurements sigma(lambda, phi) on the cavity mode, with the
// exact homodyne (lambda -> infinity) limit included as candidate states.
inline double discord_by_measurement(const Matrix4d& v) {
  const Matrix2d vm = v.block<2, 2>(0, 0);
  const Matrix2d vc = v.block<2, 2>(2, 2);
  const Matrix2d vmc = v.block<2, 2>(0, 2);

  const auto cond_det = [&](double lambda, double phi) {
    Matrix2d rot;
    rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    Matrix2d sig = Matrix2d::Zero();
    sig(0, 0) = 0.5 * lambda;
    sig(1, 1) = 0.5 / lambda;
    sig = (rot * sig * rot.transpose()).eval();
    const Matrix2d cond =
        vm - vmc * (vc + sig).inverse() * vmc.transpose();
    return cond.determinant();
  };
  const auto homodyne_det = [&](double phi) {
    const Eigen::Vector2d e_perp(-std::sin(phi), std::cos(phi));
    const Matrix2d proj =
        e_perp * e_perp.transpose() / (e_perp.dot(vc * e_perp));
    const Matrix2d cond = vm - vmc * proj * vmc.transpose();
    return cond.determinant();
  };

  double best = std::numeric_limits<double>::infinity();
  double best_log_lambda = 0.0, best_phi = 0.0;
  for (int li = 0; li <= 40; ++li) {
    const double log_lambda = -3.0 + 6.0 * li / 40.0;
    for (int pi_i = 0; pi_i < 40; ++pi_i) {
      const double phi = M_PI * pi_i / 40.0;
      const double d = cond_det(std::pow(10.0, log_lambda), phi);
      if (d < best) {
        best = d;
        best_log_lambda = log_lambda;
        best_phi = phi;
      }
    }
  }
  // Local refinement in (log lambda, phi).
  double half_l = 0.15, half_p = M_PI / 40.0;
  for (int round = 0; round < 4; ++round) {
    double cl = best_log_lambda, cp = best_phi;
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b) {
        const double ll = cl + half_l * a / 3.0;
        const double pp = cp + half_p * b / 3.0;
        const double d = cond_det(std::pow(10.0, ll), pp);
        if (d < best) {
          best = d;
          best_log_lambda = ll;
          best_phi = pp;
        }
      }
    half_l *= 0.35;
    half_p *= 0.35;
  }
  for (int pi_i = 0; pi_i < 720; ++pi_i)
    best = std::min(best, homodyne_det(M_PI * pi_i / 720.0));

  const auto inv = omcorr::invariants(v);
  const auto [nu_p, nu_m] = omcorr::symplectic_eigenvalues(inv);
  const double val = omcorr::f_function(std::sqrt(inv.i2)) -
                     omcorr::f_function(nu_p) - omcorr::f_function(nu_m) +
                     omcorr::f_function(std::sqrt(best));
  return std::max(0.0, val);
}

// Real roots of x^3 + c2 x^2 + c1 x + c0 on [lo, hi] by sign-scan bisection;
// misses double roots by construction, so use on non-degenerate cases only.
inline std::vector<double> scan_cubic_roots(double c2, double c1, double c0,
                                            double lo, double hi,
                                            int n = 4000) {
  const auto f = [&](double x) { return ((x + c2) * x + c1) * x + c0; };
  std::vector<double> roots;
  double x_prev = lo, f_prev = f(lo);
  for (int i = 1; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double fx = f(x);
    if (f_prev == 0.0) roots.push_back(x_prev);
    else if (f_prev * fx < 0.0) {
      double a = x_prev, b = x;
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (a + b);
        if (f(a) * f(m) <= 0.0) b = m;
        else a = m;
      }
      roots.push_back(0.5 * (a + b));
    }
    x_prev = x;
    f_prev = fx;
  }
  return roots;
}

}  // namespace oracles
