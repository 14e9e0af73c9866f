#include "gqlimit/foundation.hpp"

#include <cmath>
#include <string>

#include "gqlimit/errors.hpp"

namespace gqlimit {

ElectronKinematics ElectronKinematics::from_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("beta must lie in (0, 1), got " + std::to_string(beta));
  }
  const double gamma = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
  const double beta_gamma = beta * gamma;
  // gamma - 1 written as (beta gamma)^2 / (gamma + 1) to keep the slow limit exact.
  const double kinetic = constants::electron_rest_energy_eV * beta_gamma * beta_gamma / (gamma + 1.0);
  return {beta, gamma, beta_gamma, kinetic};
}

ElectronKinematics ElectronKinematics::from_kinetic_energy(double energy_eV) {
  if (!(energy_eV > 0.0) || !std::isfinite(energy_eV)) {
    throw DomainError("kinetic energy must be positive, got " + std::to_string(energy_eV));
  }
  const double t = energy_eV / constants::electron_rest_energy_eV;
  const double gamma = 1.0 + t;
  const double beta_gamma = std::sqrt(t * (t + 2.0));
  const double beta = beta_gamma / gamma;
  if (!(beta < 1.0)) {
    throw DomainError("kinetic energy too large to represent beta < 1");
  }
  return {beta, gamma, beta_gamma, energy_eV};
}

ElectronKinematics ElectronKinematics::from_beta_gamma(double beta_gamma) {
  if (!(beta_gamma > 0.0) || !std::isfinite(beta_gamma)) {
    throw DomainError("beta*gamma must be positive, got " + std::to_string(beta_gamma));
  }
  const double gamma = std::hypot(1.0, beta_gamma);
  const double beta = beta_gamma / gamma;
  if (!(beta < 1.0)) {
    throw DomainError("beta*gamma too large to represent beta < 1");
  }
  const double kinetic = constants::electron_rest_energy_eV * beta_gamma * beta_gamma / (gamma + 1.0);
  return {beta, gamma, beta_gamma, kinetic};
}

ElectronKinematics kinematics_from_beta(double beta) { return ElectronKinematics::from_beta(beta); }

ElectronKinematics kinematics_from_kinetic_energy(double energy_eV) {
  return ElectronKinematics::from_kinetic_energy(energy_eV);
}

WavevectorTriple wavevector_triple(double omega0, const ElectronKinematics& kin) {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    throw DomainError("photon frequency must be positive, got " + std::to_string(omega0));
  }
  const double k0 = omega0 / constants::c;
  return {k0, k0 / kin.beta(), k0 / kin.beta_gamma()};
}

}  // namespace gqlimit
