#pragma once

#include <numbers>

namespace gqlimit {

/// CODATA-2018 values, SI units unless the name says otherwise.
namespace constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double c = 299'792'458.0;                     // m/s
inline constexpr double hbar = 1.054'571'817e-34;              // J s
inline constexpr double elementary_charge = 1.602'176'634e-19;  // C
inline constexpr double eps0 = 8.854'187'8128e-12;             // F/m
// e^2 / (4 pi eps0 hbar c) from the values above; agrees with CODATA 7.2973525693e-3 to 1e-9
inline constexpr double alpha = elementary_charge * elementary_charge / (4.0 * pi * eps0 * hbar * c);
inline constexpr double electron_rest_energy_eV = 510'998.950'00;
inline constexpr double euler_gamma = std::numbers::egamma;

}  // namespace constants

// Unit conversions between the SI internals and the eV/nm user-facing units.
inline constexpr double ev_to_rad_per_s(double energy_eV) {
  return energy_eV * constants::elementary_charge / constants::hbar;
}
inline constexpr double rad_per_s_to_ev(double omega) {
  return omega * constants::hbar / constants::elementary_charge;
}
inline constexpr double nm_to_m(double nm) { return nm * 1e-9; }
inline constexpr double m_to_nm(double m) { return m * 1e9; }
inline constexpr double um_to_m(double um) { return um * 1e-6; }

/// Velocity description of a free-electron beam.
///
/// Construct through the named factories; every instance satisfies
/// 0 < beta < 1, gamma = 1/sqrt(1 - beta^2), beta_gamma = beta * gamma and
/// kinetic_energy = (gamma - 1) m_e c^2.
class ElectronKinematics {
 public:
  static ElectronKinematics from_beta(double beta);
  static ElectronKinematics from_kinetic_energy(double energy_eV);
  static ElectronKinematics from_beta_gamma(double beta_gamma);

  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double beta_gamma() const { return beta_gamma_; }
  double kinetic_energy_eV() const { return kinetic_energy_eV_; }
  double velocity() const { return beta_ * constants::c; }

 private:
  ElectronKinematics(double beta, double gamma, double beta_gamma, double kinetic_energy_eV)
      : beta_(beta), gamma_(gamma), beta_gamma_(beta_gamma), kinetic_energy_eV_(kinetic_energy_eV) {}

  double beta_;
  double gamma_;
  double beta_gamma_;
  double kinetic_energy_eV_;
};

ElectronKinematics kinematics_from_beta(double beta);
ElectronKinematics kinematics_from_kinetic_energy(double energy_eV);

/// Free-space, longitudinal and transverse wavevectors at one photon frequency.
struct WavevectorTriple {
  double k0;     // omega / c
  double kv;     // omega / v
  double kappa;  // k0 / (beta gamma)
};

WavevectorTriple wavevector_triple(double omega0, const ElectronKinematics& kin);

}  // namespace gqlimit
