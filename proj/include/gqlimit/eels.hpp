#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gqlimit/foundation.hpp"
#include "gqlimit/materials.hpp"

namespace gqlimit {

enum class EelsGeometry { line_halfspace, point_halfspace };

std::string to_string(EelsGeometry g);
EelsGeometry eels_geometry_from_string(const std::string& s);

struct SpectrumProvenance {
  EelsGeometry geometry;
  MaterialModel material;
  ElectronKinematics kin;
  double d;
  double length;
  double q_lineal = 0.0;  // line geometry only
};

/// Loss probability per unit angular frequency, Gamma(omega) in s.
struct LossSpectrum {
  std::vector<double> omega;
  std::vector<double> gamma;
  SpectrumProvenance provenance;

  void validate() const;
};

/// Rectangular window [center - half_width, center + half_width], rad/s.
struct SpectralWindow {
  double center;
  double half_width;

  void validate() const;
  double lower() const { return center - half_width; }
  double upper() const { return center + half_width; }
};

/// Frequency where the electron's longitudinal wavevector omega/v matches the
/// surface-plasmon wavevector (omega/c) sqrt(eps/(eps+1)) of a lossless Drude
/// half-space. Solved by bracketing; equals omega_p / sqrt(1 + gamma^2).
double spp_phase_matched_frequency(double omega_p, const ElectronKinematics& kin);

/// Center at the phase-matched SPP frequency, half-width gamma_m (two FWHM in
/// total). Only defined for Drude materials.
SpectralWindow default_spp_window(const MaterialModel& m, const ElectronKinematics& kin);

/// Quasistatic point-charge loss above a half-space:
///   Gamma = e^2 L / (2 pi^2 eps0 hbar v^2) K0(2 omega d / v) Im[(eps-1)/(eps+1)]
LossSpectrum loss_spectrum_point_halfspace(const MaterialModel& m, const ElectronKinematics& kin, double d,
                                           double length, std::span<const double> omega_grid);

/// Quasistatic sheet-charge loss above a half-space, per unit transverse width:
///   Gamma = q^2 L / (2 pi eps0 hbar omega v) exp(-2 omega d / v) Im[(eps-1)/(eps+1)]
LossSpectrum loss_spectrum_line_halfspace(double q_lineal, const MaterialModel& m, const ElectronKinematics& kin,
                                          double d, double length, std::span<const double> omega_grid);

/// Trapezoidal integral of Gamma over the part of the grid inside the window.
/// Window edges falling between grid points are handled by linear
/// interpolation. Throws DomainError when window and grid do not overlap.
double integrate_gq2(const LossSpectrum& spectrum, const SpectralWindow& window);

/// g = sqrt(N) g_Q for N pump photons.
std::complex<double> stimulated_g(std::complex<double> g_q, double n_photons);

/// I_m = |g_m|^2 / sum_i |g_i|^2, given the per-mode |g_Q|^2 values.
double ideality(std::span<const double> gq2_per_mode, std::size_t target_index);

/// Window-integrated |g_Q|^2 against the matching half-space limit (line:
/// tau = 2 for a conductor-like half-space; point: same tau with psi = pi).
/// The limit is taken at the frequency inside the window where it is largest,
/// which reduces to the window center when the limit is flat across it.
/// Exponential factors are carried in log form so the ratio stays finite when
/// both numbers underflow.
struct LimitComparison {
  double gq2;               // window-integrated loss
  double limit_window_max;  // largest limit value over the window
  double limit_center;      // limit at the window center
  double ratio;             // gq2 / limit_window_max
  double ratio_center;      // gq2 / limit_center
  double tau;
};

LimitComparison compare_with_limit(const SpectrumProvenance& setup, const SpectralWindow& window,
                                   std::size_t points = 4001);

std::string loss_spectrum_csv(const LossSpectrum& spectrum);
nlohmann::json loss_spectrum_sidecar(const LossSpectrum& spectrum, const SpectralWindow* window = nullptr);

}  // namespace gqlimit
