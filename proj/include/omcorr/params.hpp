#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "omcorr/constants.hpp"

namespace omcorr {

// Physical parameters of the driven cavity + mirror + dispersive qubit setup,
// all rates as angular frequencies in rad/s, temperature in kelvin.
template <typename Scalar = double>
struct SystemSpec {
  Scalar omega_m{};         // mechanical resonance frequency
  Scalar quality_factor{};  // Q = omega_m / gamma_m
  Scalar kappa_ex{};        // cavity decay through the input mirror
  Scalar kappa_0{};         // intrinsic cavity loss
  Scalar g{};               // single-photon optomechanical coupling
  Scalar eta{};             // qubit-induced softening of the mirror potential
  Scalar temperature{};     // mechanical bath temperature
  Scalar delta_0{};         // bare cavity-drive detuning omega_c - omega_l
  Scalar drive_amplitude{}; // input field amplitude alpha_in, sqrt(photon flux)

  void validate() const {
    if (!(omega_m > Scalar(0)))
      throw std::invalid_argument("SystemSpec: omega_m must be > 0");
    if (!(quality_factor > Scalar(0)))
      throw std::invalid_argument("SystemSpec: quality_factor must be > 0");
    if (!(kappa_ex >= Scalar(0)))
      throw std::invalid_argument("SystemSpec: kappa_ex must be >= 0");
    if (!(kappa_0 >= Scalar(0)))
      throw std::invalid_argument("SystemSpec: kappa_0 must be >= 0");
    if (!(kappa_ex + kappa_0 > Scalar(0)))
      throw std::invalid_argument("SystemSpec: total cavity decay must be > 0");
    if (!(g >= Scalar(0)))
      throw std::invalid_argument("SystemSpec: g must be >= 0");
    if (!(eta >= Scalar(0)))
      throw std::invalid_argument("SystemSpec: eta must be >= 0");
    if (!(temperature >= Scalar(0)))
      throw std::invalid_argument("SystemSpec: temperature must be >= 0");
    if (!(drive_amplitude >= Scalar(0)))
      throw std::invalid_argument("SystemSpec: drive_amplitude must be >= 0");
  }
};

// Two-level system that softens the mirror: splitting delta_q and linear
// mirror-qubit coupling mu_q, both in rad/s.
template <typename Scalar = double>
struct QubitSpec {
  Scalar delta_q{};
  Scalar mu_q{};
};

// Dimensionless working set: every rate divided by omega_m.  This is the
// parameterization the drift/diffusion builders and sweeps consume.
template <typename Scalar = double>
struct ReducedParams {
  Scalar delta{};          // effective cavity detuning
  Scalar kappa{};          // total cavity decay
  Scalar kappa_ex_frac{1}; // kappa_ex / kappa, only relevant to the drive
  Scalar gamma_m{};        // mechanical damping
  Scalar g_eff{};          // field-enhanced optomechanical coupling
  Scalar eta{};            // softening strength; eta >= 1 unbinds the mirror
  Scalar n_th{};           // mean thermal phonon number of the bath

  void validate() const {
    if (!(kappa > Scalar(0)))
      throw std::invalid_argument("ReducedParams: kappa must be > 0");
    if (!(kappa_ex_frac >= Scalar(0) && kappa_ex_frac <= Scalar(1)))
      throw std::invalid_argument("ReducedParams: kappa_ex_frac must lie in [0, 1]");
    if (!(gamma_m > Scalar(0)))
      throw std::invalid_argument("ReducedParams: gamma_m must be > 0");
    if (!(g_eff >= Scalar(0)))
      throw std::invalid_argument("ReducedParams: g_eff must be >= 0");
    if (!(eta >= Scalar(0)))
      throw std::invalid_argument("ReducedParams: eta must be >= 0");
    if (!(n_th >= Scalar(0)))
      throw std::invalid_argument("ReducedParams: n_th must be >= 0");
    if (std::isnan(static_cast<double>(delta)))
      throw std::invalid_argument("ReducedParams: delta must be finite");
  }
};

using SystemSpecd = SystemSpec<double>;
using QubitSpecd = QubitSpec<double>;
using ReducedParamsd = ReducedParams<double>;

// Bose-Einstein occupation of the mechanical bath.  expm1 keeps the low-T
// (large x) and high-T (x -> 0) limits accurate; T = 0 returns exactly 0.
template <typename Scalar>
Scalar mean_thermal_occupation(Scalar temperature, Scalar omega_m) {
  if (!(omega_m > Scalar(0)))
    throw std::invalid_argument("mean_thermal_occupation: omega_m must be > 0");
  if (!(temperature >= Scalar(0)))
    throw std::invalid_argument("mean_thermal_occupation: temperature must be >= 0");
  if (temperature == Scalar(0)) return Scalar(0);
  const Scalar x = Scalar(constants::hbar) * omega_m /
                   (Scalar(constants::k_boltzmann) * temperature);
  return Scalar(1) / std::expm1(x);
}

// Softening strength produced by a dispersively coupled qubit,
// eta = 4 delta_q (mu_q / delta_q)^2.  The result is perturbative in
// mu_q / delta_q; the optional flag is set when that ratio exceeds 0.1 and the
// second-order elimination becomes questionable.
template <typename Scalar>
Scalar qubit_induced_coupling(const QubitSpec<Scalar>& qubit,
                              bool* perturbative_warning = nullptr) {
  if (!(qubit.delta_q > Scalar(0)))
    throw std::invalid_argument("qubit_induced_coupling: delta_q must be > 0");
  if (!(qubit.mu_q >= Scalar(0)))
    throw std::invalid_argument("qubit_induced_coupling: mu_q must be >= 0");
  const Scalar ratio = qubit.mu_q / qubit.delta_q;
  if (perturbative_warning) *perturbative_warning = ratio > Scalar(0.1);
  return Scalar(4) * qubit.delta_q * ratio * ratio;
}

// Collapse a physical spec plus a chosen working point (effective detuning and
// field-enhanced coupling, both in rad/s) into the dimensionless set.
template <typename Scalar>
ReducedParams<Scalar> reduce(const SystemSpec<Scalar>& spec, Scalar delta_eff,
                             Scalar g_eff) {
  spec.validate();
  const Scalar kappa_total = spec.kappa_ex + spec.kappa_0;
  ReducedParams<Scalar> p;
  p.delta = delta_eff / spec.omega_m;
  p.kappa = kappa_total / spec.omega_m;
  p.kappa_ex_frac = spec.kappa_ex / kappa_total;
  p.gamma_m = Scalar(1) / spec.quality_factor;
  p.g_eff = g_eff / spec.omega_m;
  p.eta = spec.eta / spec.omega_m;
  p.n_th = mean_thermal_occupation(spec.temperature, spec.omega_m);
  p.validate();
  return p;
}

}  // namespace omcorr
