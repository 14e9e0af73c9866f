#include "gqlimit/eels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gqlimit/bounds.hpp"
#include "gqlimit/errors.hpp"
#include "gqlimit/io.hpp"
#include "gqlimit/specfun.hpp"

namespace gqlimit {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

void validate_setup(const SpectrumProvenance& s) {
  require_positive(s.d, "separation d");
  require_positive(s.length, "interaction length L");
  if (s.geometry == EelsGeometry::line_halfspace) require_positive(s.q_lineal, "line charge density q");
}

// Gamma(omega) * exp(-log_shift). The shift lets callers keep the exponential
// tail representable when d / v is large.
double loss_density(const SpectrumProvenance& s, double omega, double log_shift) {
  using namespace constants;
  const double v = s.kin.velocity();
  const double y = 2.0 * omega * s.d / v;
  const double im_g = surface_loss_function(s.material, omega);
  if (im_g == 0.0) return 0.0;
  if (s.geometry == EelsGeometry::line_halfspace) {
    const double pref = s.q_lineal * s.q_lineal * s.length / (2.0 * pi * eps0 * hbar * omega * v);
    return pref * std::exp(-y - log_shift) * im_g;
  }
  const double e = elementary_charge;
  const double pref = e * e * s.length / (2.0 * pi * pi * eps0 * hbar * v * v);
  return pref * bessel_k0_scaled(y) * std::exp(-y - log_shift) * im_g;
}

LossSpectrum make_spectrum(const SpectrumProvenance& s, std::span<const double> grid) {
  validate_setup(s);
  LossSpectrum out{{grid.begin(), grid.end()}, {}, s};
  out.gamma.reserve(grid.size());
  for (double w : grid) {
    require_positive(w, "grid frequency");
    out.gamma.push_back(loss_density(s, w, 0.0));
  }
  out.validate();
  return out;
}

double log_limit(const SpectrumProvenance& s, double tau, double omega) {
  if (s.geometry == EelsGeometry::line_halfspace) {
    return log_gq2_limit_line(LimitQuery2D{s.q_lineal, s.length, tau, omega, s.kin, s.d});
  }
  return log_gq2_limit_point(LimitQuery3D{tau, constants::pi, s.length, omega, s.kin, s.d});
}

double trapezoid_window(std::span<const double> x, std::span<const double> y, double a, double b) {
  const auto lerp = [&](std::size_t i, double t) {
    return y[i] + (y[i + 1] - y[i]) * (t - x[i]) / (x[i + 1] - x[i]);
  };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double lo = std::max(a, x[i]);
    const double hi = std::min(b, x[i + 1]);
    if (hi <= lo) continue;
    sum += 0.5 * (lerp(i, lo) + lerp(i, hi)) * (hi - lo);
  }
  return sum;
}

}  // namespace

std::string to_string(EelsGeometry g) {
  return g == EelsGeometry::line_halfspace ? "line-halfspace" : "point-halfspace";
}

EelsGeometry eels_geometry_from_string(const std::string& s) {
  if (s == "line-halfspace" || s == "line") return EelsGeometry::line_halfspace;
  if (s == "point-halfspace" || s == "point") return EelsGeometry::point_halfspace;
  throw InputError("unknown EELS geometry '" + s + "' (expected line-halfspace or point-halfspace)");
}

void LossSpectrum::validate() const {
  if (omega.size() != gamma.size()) throw InputError("loss spectrum: omega and gamma differ in length");
  if (omega.size() < 2) throw InputError("loss spectrum needs at least two grid points");
  for (std::size_t i = 1; i < omega.size(); ++i) {
    if (!(omega[i] > omega[i - 1])) throw InputError("loss spectrum grid must be strictly increasing");
  }
}

void SpectralWindow::validate() const {
  require_positive(center, "window center");
  require_positive(half_width, "window half-width");
  if (half_width >= center) throw DomainError("window must stay at positive frequencies (half-width < center)");
}

double spp_phase_matched_frequency(double omega_p, const ElectronKinematics& kin) {
  require_positive(omega_p, "plasma frequency");
  const double inv_beta = 1.0 / kin.beta();
  // u = omega / omega_p; lossless SPP index sqrt(eps/(eps+1)) = sqrt((u^2-1)/(2u^2-1))
  const auto f = [&](double u) { return inv_beta - std::sqrt((u * u - 1.0) / (2.0 * u * u - 1.0)); };
  const double u_s = 1.0 / std::sqrt(2.0);
  const double u = find_root_bracketed(f, 1e-6 * u_s, u_s * (1.0 - 1e-12), 1e-15);
  return u * omega_p;
}

SpectralWindow default_spp_window(const MaterialModel& m, const ElectronKinematics& kin) {
  const auto* drude = std::get_if<Drude>(&m.variant());
  if (!drude) {
    throw InputError("default SPP window is only defined for drude materials; give the window explicitly");
  }
  SpectralWindow w{spp_phase_matched_frequency(drude->omega_p, kin), drude->gamma};
  w.validate();
  return w;
}

LossSpectrum loss_spectrum_point_halfspace(const MaterialModel& m, const ElectronKinematics& kin, double d,
                                           double length, std::span<const double> omega_grid) {
  return make_spectrum(SpectrumProvenance{EelsGeometry::point_halfspace, m, kin, d, length, 0.0}, omega_grid);
}

LossSpectrum loss_spectrum_line_halfspace(double q_lineal, const MaterialModel& m, const ElectronKinematics& kin,
                                          double d, double length, std::span<const double> omega_grid) {
  return make_spectrum(SpectrumProvenance{EelsGeometry::line_halfspace, m, kin, d, length, q_lineal},
                       omega_grid);
}

double integrate_gq2(const LossSpectrum& spectrum, const SpectralWindow& window) {
  spectrum.validate();
  window.validate();
  if (window.upper() <= spectrum.omega.front() || window.lower() >= spectrum.omega.back()) {
    throw DomainError("integration window does not overlap the spectrum grid");
  }
  return trapezoid_window(spectrum.omega, spectrum.gamma, window.lower(), window.upper());
}

std::complex<double> stimulated_g(std::complex<double> g_q, double n_photons) {
  if (!(n_photons >= 0.0) || !std::isfinite(n_photons)) {
    throw DomainError("photon number must be finite and non-negative");
  }
  return std::sqrt(n_photons) * g_q;
}

double ideality(std::span<const double> gq2_per_mode, std::size_t target_index) {
  if (target_index >= gq2_per_mode.size()) throw InputError("ideality: target index out of range");
  double total = 0.0;
  for (double g2 : gq2_per_mode) {
    if (!(g2 >= 0.0) || !std::isfinite(g2)) throw DomainError("ideality: |g_Q|^2 values must be finite and >= 0");
    total += g2;
  }
  if (!(total > 0.0)) throw DomainError("ideality: all couplings are zero");
  return gq2_per_mode[target_index] / total;
}

LimitComparison compare_with_limit(const SpectrumProvenance& setup, const SpectralWindow& window,
                                   std::size_t points) {
  validate_setup(setup);
  window.validate();
  if (points < 2) throw InputError("compare_with_limit needs at least two integration points");

  const double tau = tau_half_space(StaticPermittivity::finite(1.0), static_permittivity(setup.material));
  if (!(tau > 0.0)) throw DomainError("half-space with static permittivity 1 cannot scatter; tau is zero");

  std::vector<double> grid(points);
  const double step = 2.0 * window.half_width / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = window.lower() + step * static_cast<double>(i);
  grid.back() = window.upper();

  double log_max = -std::numeric_limits<double>::infinity();
  for (double w : grid) log_max = std::max(log_max, log_limit(setup, tau, w));
  if (setup.geometry == EelsGeometry::point_halfspace) {
    const double w_star = optimal_photon_for_electron(setup.kin, setup.d);
    if (w_star > window.lower() && w_star < window.upper()) {
      log_max = std::max(log_max, log_limit(setup, tau, w_star));
    }
  }
  const double log_center = log_limit(setup, tau, window.center);

  std::vector<double> scaled(points);
  for (std::size_t i = 0; i < points; ++i) scaled[i] = loss_density(setup, grid[i], log_max);
  const double ratio = trapezoid_window(grid, scaled, window.lower(), window.upper());
  if (!std::isfinite(ratio)) throw NumericalError("loss integral is not finite");

  LimitComparison out{};
  out.tau = tau;
  out.ratio = ratio;
  out.ratio_center = ratio * std::exp(log_max - log_center);
  out.limit_window_max = std::exp(log_max);
  out.limit_center = std::exp(log_center);
  out.gq2 = ratio * out.limit_window_max;
  return out;
}

std::string loss_spectrum_csv(const LossSpectrum& spectrum) {
  std::string out = "omega_rad_s,photon_eV,gamma_per_rad_s\n";
  for (std::size_t i = 0; i < spectrum.omega.size(); ++i) {
    out += format_g17(spectrum.omega[i]) + ',' + format_g17(rad_per_s_to_ev(spectrum.omega[i])) + ',' +
           format_g17(spectrum.gamma[i]) + '\n';
  }
  return out;
}

nlohmann::json loss_spectrum_sidecar(const LossSpectrum& spectrum, const SpectralWindow* window) {
  const auto& p = spectrum.provenance;
  nlohmann::json params = {{"material", material_to_json(p.material)},
                           {"beta", p.kin.beta()},
                           {"electron_eV", p.kin.kinetic_energy_eV()},
                           {"d_nm", m_to_nm(p.d)},
                           {"L_um", p.length * 1e6}};
  if (p.geometry == EelsGeometry::line_halfspace) params["q_C_per_m"] = p.q_lineal;
  nlohmann::json j = {{"schema_version", kSchemaVersion},
                      {"code_version", code_version()},
                      {"artifact", "loss_spectrum"},
                      {"geometry", to_string(p.geometry)},
                      {"columns", {"omega_rad_s", "photon_eV", "gamma_per_rad_s"}},
                      {"parameters", params},
                      {"points", spectrum.omega.size()}};
  if (window) {
    j["window"] = {{"center_eV", rad_per_s_to_ev(window->center)},
                   {"half_width_eV", rad_per_s_to_ev(window->half_width)}};
  }
  return j;
}

}  // namespace gqlimit
