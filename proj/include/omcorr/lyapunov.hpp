#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "omcorr/dynamics.hpp"

namespace omcorr {

// Stationarity is declared when the moment flow ||dV/dt||_max drops below this.
inline constexpr double moment_flow_tol = 1e-10;

// Condition numbers beyond this flag the stationary solve as ill-conditioned.
inline constexpr double lyapunov_condition_limit = 1e12;

template <typename Scalar = double>
struct LyapunovSolution {
  Matrix4<Scalar> v;          // stationary covariance, exactly symmetric
  Scalar rcond{};             // reciprocal condition estimate of the 16x16 solve
  bool ill_conditioned{false};
};

using LyapunovSolutiond = LyapunovSolution<double>;

namespace detail {

template <typename Scalar>
Scalar spectral_abscissa_checked(const Matrix4<Scalar>& a, const char* who) {
  const Scalar max_re = max_real_eigenvalue(a);
  if (!(max_re < -Scalar(stability_margin_tol)))
    throw std::domain_error(std::string(who) +
                            ": drift matrix is not strictly stable, "
                            "no stationary state exists");
  return max_re;
}

template <typename Scalar>
void check_diffusion(const Matrix4<Scalar>& d, const char* who) {
  const Scalar scale = std::max(Scalar(1), d.template lpNorm<Eigen::Infinity>());
  if ((d - d.transpose()).template lpNorm<Eigen::Infinity>() >
      Scalar(1e-12) * scale)
    throw std::invalid_argument(std::string(who) +
                                ": diffusion matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix4<Scalar>> es(d);
  if (es.eigenvalues().minCoeff() < -Scalar(1e-12) * scale)
    throw std::invalid_argument(
        std::string(who) + ": diffusion matrix must be positive semidefinite");
}

}  // namespace detail

// Stationary covariance V of dV/dt = A V + V A^T + D = 0, through the
// equivalent 16x16 linear system (I (x) A + A (x) I) vec(V) = -vec(D).
// The drift must be strictly stable (rechecked here) and D symmetric positive
// semidefinite.  The result is symmetrized explicitly; rcond reports the
// conditioning of the linear solve.
template <typename Scalar>
LyapunovSolution<Scalar> solve_lyapunov(const Matrix4<Scalar>& a,
                                        const Matrix4<Scalar>& d) {
  detail::spectral_abscissa_checked(a, "solve_lyapunov");
  detail::check_diffusion(d, "solve_lyapunov");

  using Matrix16 = Eigen::Matrix<Scalar, 16, 16>;
  using Vector16 = Eigen::Matrix<Scalar, 16, 1>;
  Matrix16 k = Matrix16::Zero();
  // I (x) A: a copy of A on each diagonal block (column-major vec convention).
  for (int j = 0; j < 4; ++j) k.template block<4, 4>(4 * j, 4 * j) += a;
  // A (x) I: block (bi, bj) is A(bi, bj) times the identity.
  for (int bi = 0; bi < 4; ++bi)
    for (int bj = 0; bj < 4; ++bj)
      for (int r = 0; r < 4; ++r) k(4 * bi + r, 4 * bj + r) += a(bi, bj);

  const Eigen::Map<const Vector16> vec_d(d.data());
  Eigen::PartialPivLU<Matrix16> lu(k);
  const Vector16 x = lu.solve(-vec_d);

  LyapunovSolution<Scalar> sol;
  sol.rcond = lu.rcond();
  sol.ill_conditioned = sol.rcond < Scalar(1) / Scalar(lyapunov_condition_limit);
  const Eigen::Map<const Matrix4<Scalar>> v_raw(x.data());
  sol.v = ((v_raw + v_raw.transpose()) / Scalar(2)).eval();
  return sol;
}

template <typename Scalar = double>
struct MomentIntegration {
  Matrix4<Scalar> v;
  Scalar t_end{};
  bool converged{false};
};

using MomentIntegrationd = MomentIntegration<double>;

// Integrate dV/dt = A V + V A^T + D from v0 with classical RK4, stopping as
// soon as the flow norm falls below moment_flow_tol.  t_max <= 0 selects an
// automatic horizon of 100 / |slowest decay rate of A|.  Used as an
// independent cross-check of the direct stationary solve.
template <typename Scalar>
MomentIntegration<Scalar> integrate_moments(const Matrix4<Scalar>& a,
                                            const Matrix4<Scalar>& d,
                                            const Matrix4<Scalar>& v0,
                                            Scalar dt = Scalar(0.01),
                                            Scalar t_max = Scalar(0)) {
  if (!(dt > Scalar(0)))
    throw std::invalid_argument("integrate_moments: dt must be > 0");
  const Scalar max_re = detail::spectral_abscissa_checked(a, "integrate_moments");
  detail::check_diffusion(d, "integrate_moments");
  if (!(t_max > Scalar(0))) t_max = Scalar(100) / (-max_re);

  const auto flow = [&](const Matrix4<Scalar>& v) {
    return Matrix4<Scalar>(a * v + v * a.transpose() + d);
  };

  MomentIntegration<Scalar> out;
  out.v = (v0 + v0.transpose()) / Scalar(2);
  out.t_end = Scalar(0);
  const std::uint64_t n_steps =
      static_cast<std::uint64_t>(std::ceil(t_max / dt));
  for (std::uint64_t step = 0; step < n_steps; ++step) {
    const Matrix4<Scalar> k1 = flow(out.v);
    if (k1.template lpNorm<Eigen::Infinity>() < Scalar(moment_flow_tol)) {
      out.converged = true;
      return out;
    }
    const Matrix4<Scalar> k2 = flow(out.v + (dt / Scalar(2)) * k1);
    const Matrix4<Scalar> k3 = flow(out.v + (dt / Scalar(2)) * k2);
    const Matrix4<Scalar> k4 = flow(out.v + dt * k3);
    out.v += (dt / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
    out.t_end += dt;
  }
  out.converged =
      flow(out.v).template lpNorm<Eigen::Infinity>() < Scalar(moment_flow_tol);
  return out;
}

}  // namespace omcorr
