#pragma once

#include <complex>
#include <string>
#include <variant>

#include <json.hpp>

namespace gqlimit {

/// Drude metal: eps = 1 - wp^2 / (w (w + i gamma)). Frequencies in rad/s.
struct Drude {
  double omega_p;
  double gamma;
};

/// Polar dielectric: eps = eps_inf + eps_inf (wLO^2 - wTO^2) / (wTO^2 - w^2 - i w gamma).
struct Lorentz {
  double eps_inf;
  double omega_lo;
  double omega_to;
  double gamma;
};

struct ConstantPermittivity {
  double eps;
};

struct PerfectConductor {};

/// A real permittivity that may be the conductor-like "infinite" value.
class StaticPermittivity {
 public:
  static StaticPermittivity finite(double eps);
  static StaticPermittivity infinite() { return StaticPermittivity(0.0, true); }

  bool is_infinite() const { return infinite_; }
  double value() const;  // throws DomainError when infinite

 private:
  StaticPermittivity(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

/// Complex permittivity at one frequency; perfect conductors report infinite.
class ComplexPermittivity {
 public:
  static ComplexPermittivity finite(std::complex<double> eps) { return ComplexPermittivity(eps, false); }
  static ComplexPermittivity infinite() { return ComplexPermittivity({}, true); }

  bool is_infinite() const { return infinite_; }
  std::complex<double> value() const;  // throws DomainError when infinite

 private:
  ComplexPermittivity(std::complex<double> v, bool inf) : value_(v), infinite_(inf) {}
  std::complex<double> value_;
  bool infinite_;
};

class MaterialModel {
 public:
  using Variant = std::variant<Drude, Lorentz, ConstantPermittivity, PerfectConductor>;

  // Energies are given in eV and stored as angular frequencies.
  static MaterialModel drude_eV(double omega_p_eV, double gamma_eV);
  static MaterialModel lorentz_eV(double eps_inf, double omega_lo_eV, double omega_to_eV, double gamma_eV);
  static MaterialModel constant(double eps);
  static MaterialModel perfect_conductor();

  const Variant& variant() const { return model_; }
  std::string name() const;

 private:
  explicit MaterialModel(Variant v) : model_(std::move(v)) {}
  Variant model_;
};

ComplexPermittivity permittivity(const MaterialModel& m, double omega);
StaticPermittivity static_permittivity(const MaterialModel& m);

/// Im[(eps - 1) / (eps + 1)], the quasistatic surface loss function.
/// Throws InputError for a perfect conductor.
double surface_loss_function(const MaterialModel& m, double omega);

/// Zero-frequency polarizability coefficient of a half-space (eps2) in an
/// environment eps1. Infinite eps2 gives the conductor limit 2 eps1.
double tau_half_space(const StaticPermittivity& eps1, const StaticPermittivity& eps2);

/// Same for a concentric cylinder; conductor limit eps1.
double tau_concentric_cylinder(const StaticPermittivity& eps1, const StaticPermittivity& eps2);

// JSON material specs, e.g. {"model":"drude","omega_p_eV":9.06,"gamma_eV":0.071}.
MaterialModel material_from_json(const nlohmann::json& j);
nlohmann::json material_to_json(const MaterialModel& m);

}  // namespace gqlimit
