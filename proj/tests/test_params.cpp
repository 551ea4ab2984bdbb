#include <doctest.h>

#include <cmath>

#include "omcorr/constants.hpp"
#include "omcorr/params.hpp"

using namespace omcorr;

TEST_CASE("params: thermal occupation matches the direct Bose factor") {
  const double omega = 2.0 * M_PI * 1e7;
  // Independent evaluation without expm1.
  const auto direct = [&](double t) {
    const double x = constants::hbar * omega / (constants::k_boltzmann * t);
    return 1.0 / (std::exp(x) - 1.0);
  };
  for (const double t : {0.05, 0.6, 3.18, 5.64, 300.0}) {
    const double got = mean_thermal_occupation(t, omega);
    CHECK(got == doctest::Approx(direct(t)).epsilon(1e-12));
  }
  // Frozen reference value for the workhorse operating temperature.
  CHECK(mean_thermal_occupation(0.6, omega) ==
        doctest::Approx(1249.6972148218272).epsilon(1e-12));
}

TEST_CASE("params: thermal occupation limits and domain") {
  const double omega = 2.0 * M_PI * 1e7;
  CHECK(mean_thermal_occupation(0.0, omega) == 0.0);
  // Deep quantum regime: occupation collapses smoothly, no overflow.
  CHECK(mean_thermal_occupation(1e-9, omega) >= 0.0);
  CHECK(mean_thermal_occupation(1e-9, omega) < 1e-100);
  // High-T limit approaches kT / (hbar omega).
  const double t = 300.0;
  const double classical =
      constants::k_boltzmann * t / (constants::hbar * omega);
  CHECK(mean_thermal_occupation(t, omega) ==
        doctest::Approx(classical - 0.5).epsilon(1e-4));
  CHECK_THROWS_AS(mean_thermal_occupation(-0.1, omega), std::invalid_argument);
  CHECK_THROWS_AS(mean_thermal_occupation(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mean_thermal_occupation(1.0, -omega), std::invalid_argument);
}

TEST_CASE("params: qubit-induced softening strength") {
  // eta = 4 delta_q (mu_q / delta_q)^2; ratio 0.1 on a 15 omega_m splitting
  // gives exactly 0.6 omega_m.
  bool warn = true;
  CHECK(qubit_induced_coupling(QubitSpecd{15.0, 1.5}, &warn) ==
        doctest::Approx(0.6).epsilon(1e-14));
  CHECK_FALSE(warn);  // ratio exactly 0.1 is still within the regime
  CHECK(qubit_induced_coupling(QubitSpecd{15.0, 3.0}, &warn) ==
        doctest::Approx(2.4).epsilon(1e-14));
  CHECK(warn);  // ratio 0.2 is flagged
  CHECK(qubit_induced_coupling(QubitSpecd{15.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(qubit_induced_coupling(QubitSpecd{0.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(qubit_induced_coupling(QubitSpecd{-1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(qubit_induced_coupling(QubitSpecd{15.0, -1.0}),
                  std::invalid_argument);
}

TEST_CASE("params: reduce divides every rate by the mechanical frequency") {
  SystemSpecd spec;
  spec.omega_m = 2.0 * M_PI * 1e7;
  spec.quality_factor = 1e5;
  spec.kappa_ex = 0.3 * spec.omega_m;
  spec.kappa_0 = 0.2 * spec.omega_m;
  spec.g = 1e-3 * spec.omega_m;
  spec.eta = 0.6 * spec.omega_m;
  spec.temperature = 0.6;
  spec.delta_0 = 0.9 * spec.omega_m;
  spec.drive_amplitude = 1e3;

  const auto p = reduce(spec, 0.8 * spec.omega_m, 0.6 * spec.omega_m);
  CHECK(p.delta == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(p.kappa == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p.kappa_ex_frac == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(p.gamma_m == doctest::Approx(1e-5).epsilon(1e-14));
  CHECK(p.g_eff == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(p.eta == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(p.n_th == doctest::Approx(1249.6972148218272).epsilon(1e-12));
}

TEST_CASE("params: validation rejects out-of-domain values") {
  SystemSpecd spec;
  spec.omega_m = 1.0;
  spec.quality_factor = 1e5;
  spec.kappa_ex = 0.5;
  CHECK_NOTHROW(spec.validate());

  SystemSpecd bad = spec;
  bad.omega_m = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.kappa_ex = 0.0;  // with kappa_0 = 0 the cavity never decays
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.temperature = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  ReducedParamsd p{0.8, 0.5, 1.0, 1e-5, 0.6, 0.0, 0.0};
  CHECK_NOTHROW(p.validate());
  ReducedParamsd q = p;
  q.kappa = 0.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = p;
  q.kappa_ex_frac = 1.5;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = p;
  q.gamma_m = -1e-5;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = p;
  q.n_th = -1.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = p;
  q.eta = -0.1;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}
