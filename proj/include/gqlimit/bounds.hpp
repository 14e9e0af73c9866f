#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gqlimit/foundation.hpp"

namespace gqlimit {

/// Line (sheet) electron above a half-space enclosure. SI units; q_lineal is
/// charge per unit transverse length, so the resulting |g_Q|^2 is per unit
/// transverse width.
struct LimitQuery2D {
  double q_lineal;
  double length;
  double tau;
  double omega0;
  ElectronKinematics kin;
  double d;

  void validate() const;
};

/// Point electron on the axis of a hollow cylinder sector (opening psi, inner radius d).
struct LimitQuery3D {
  double tau;
  double psi;
  double length;
  double omega0;
  ElectronKinematics kin;
  double d;

  void validate() const;
};

/// Integral of |E_inc(omega0)|^2 over the scatterer volume (V^2 s^2 m for a
/// point charge; per unit transverse width for a line charge).
struct FieldIntegral {
  double value;
  double omega0;
};

/// General single-mode limit: (pi eps0 omega0 tau / 4 hbar) * integral |E_inc|^2 dV.
double gq2_limit_from_field_integral(double tau, const FieldIntegral& fi);

/// Closed-form |E_inc|^2 integral of a relativistic sheet charge over the
/// half-space z >= d, per unit transverse width.
FieldIntegral half_space_field_integral_line(double q_lineal, double length, double omega0,
                                             const ElectronKinematics& kin, double d);

/// |E_inc|^2 integral of a point charge over the cylinder sector rho >= d.
/// Uses the envelope kappa^2 (K0^2 + K1^2) for the field intensity, which
/// bounds the exact K1^2 + K0^2/gamma^2 from above.
FieldIntegral cylinder_sector_field_integral_point(double psi, double length, double omega0,
                                                   const ElectronKinematics& kin, double d);

/// Shape-independent limit for line electrons:
///   pi q^2 tau L / (32 hbar eps0) * (kv^2 + kappa^2) / (omega0 kappa) * exp(-2 kappa d)
double gq2_limit_line(const LimitQuery2D& q);
double log_gq2_limit_line(const LimitQuery2D& q);

/// Shape-independent limit for point electrons:
///   alpha tau psi L / (4 c) * omega0 / beta^2 * (kappa d) K0(kappa d) K1(kappa d)
double gq2_limit_point(const LimitQuery3D& q);
double log_gq2_limit_point(const LimitQuery3D& q);

/// Photon cut-off of the line limit, kappa d = 1/2: omega = c beta gamma / (2 d).
/// The line limit at fixed (beta, d) decays as exp(-2 kappa d); the cut-off is
/// where that factor has fallen to 1/e.
double line_cutoff_frequency(const ElectronKinematics& kin, double d);

inline constexpr double kLineCutoffKappaD = 0.5;

/// Root of optimal_residual on [0.05, 2] to 1e-8 (about 0.4064). Computed
/// once and cached.
double optimal_kappa_d();

/// Electron matched to a photon at separation d: beta gamma = omega0 d / (x* c).
ElectronKinematics optimal_electron_for_photon(double omega0, double d);
/// Photon matched to an electron at separation d: omega0 = x* c beta gamma / d.
double optimal_photon_for_electron(const ElectronKinematics& kin, double d);

// --- sweeps ---------------------------------------------------------------

enum class LimitKind { line, point };
enum class GridScale { linear, log };
enum class AxisParam { beta, electron_energy, photon_energy, separation };

std::string to_string(LimitKind k);
std::string to_string(GridScale s);
std::string to_string(AxisParam p);
LimitKind limit_kind_from_string(const std::string& s);
GridScale grid_scale_from_string(const std::string& s);
AxisParam axis_param_from_string(const std::string& s);
std::string axis_unit(AxisParam p);

struct GridSpec {
  double min;
  double max;
  std::size_t count;
  GridScale scale;

  void validate() const;
  std::vector<double> values() const;
};

/// One swept parameter. Values are in user units: beta (1), electron kinetic
/// energy (eV), photon energy (eV), separation (nm).
struct Axis {
  AxisParam param;
  GridSpec grid;
};

/// Parameters held fixed during a sweep. Exactly the physical quantity not
/// covered by the two axes must be present among beta/electron_eV, photon_eV
/// and d_nm.
struct FixedParams {
  std::optional<double> beta;
  std::optional<double> electron_eV;
  std::optional<double> photon_eV;
  std::optional<double> d_nm;
  double length_um = 100.0;
  double tau = 1.0;
  double psi = 2.0 * constants::pi;
  double q_lineal = constants::elementary_charge / 1e-9;  // one electron per nm
};

struct SweepSpec {
  LimitKind kind = LimitKind::point;
  Axis axis1;
  Axis axis2;
  FixedParams fixed;
  bool normalize = false;
  unsigned threads = 1;

  void validate() const;
};

/// Row-major (axis1 outer, axis2 inner) |g_Q|^2 values.
struct LimitMap {
  Axis axis1;
  Axis axis2;
  std::vector<double> axis1_values;
  std::vector<double> axis2_values;
  std::vector<double> values;
  bool normalized = false;
  double peak_raw = 0.0;

  double at(std::size_t i, std::size_t j) const { return values[i * axis2_values.size() + j]; }
};

/// Evaluates the selected limit at one grid point (axis values in user units).
double evaluate_limit_cell(const SweepSpec& spec, double axis1_value, double axis2_value);

/// Dense evaluation on the grid. Each cell is computed independently, so the
/// result is bitwise identical for any thread count.
LimitMap sweep_limit_map(const SweepSpec& spec);

/// CSV with header "axis1,axis2,gq2", one row per cell, %.17g formatting.
std::string limit_map_csv(const LimitMap& map);

/// Sidecar describing axes, fixed parameters and normalization. `extra` is
/// merged under "provenance" (e.g. the material and enclosure that produced tau).
nlohmann::json limit_map_sidecar(const SweepSpec& spec, const LimitMap& map,
                                 const nlohmann::json& extra = nlohmann::json::object());

}  // namespace gqlimit
