#include "gqlimit/materials.hpp"

#include <cmath>
#include <set>

#include "gqlimit/errors.hpp"
#include "gqlimit/foundation.hpp"

namespace gqlimit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

StaticPermittivity require_dielectric_environment(const StaticPermittivity& eps1) {
  if (eps1.is_infinite()) {
    throw DomainError("invalid environment: the surrounding medium must be a dielectric with finite permittivity");
  }
  return eps1;
}

}  // namespace

StaticPermittivity StaticPermittivity::finite(double eps) {
  require(std::isfinite(eps) && eps >= 1.0, "static permittivity must be finite and >= 1");
  return StaticPermittivity(eps, false);
}

double StaticPermittivity::value() const {
  if (infinite_) throw DomainError("static permittivity is infinite");
  return value_;
}

std::complex<double> ComplexPermittivity::value() const {
  if (infinite_) throw DomainError("permittivity of a perfect conductor is infinite");
  return value_;
}

MaterialModel MaterialModel::drude_eV(double omega_p_eV, double gamma_eV) {
  require(omega_p_eV > 0.0 && std::isfinite(omega_p_eV), "drude: omega_p must be positive");
  require(gamma_eV >= 0.0 && std::isfinite(gamma_eV), "drude: gamma must be non-negative");
  return MaterialModel(Drude{ev_to_rad_per_s(omega_p_eV), ev_to_rad_per_s(gamma_eV)});
}

MaterialModel MaterialModel::lorentz_eV(double eps_inf, double omega_lo_eV, double omega_to_eV, double gamma_eV) {
  require(eps_inf >= 1.0 && std::isfinite(eps_inf), "lorentz: eps_inf must be >= 1");
  require(omega_to_eV > 0.0, "lorentz: omega_TO must be positive");
  require(omega_lo_eV > omega_to_eV && std::isfinite(omega_lo_eV), "lorentz: omega_LO must exceed omega_TO");
  require(gamma_eV >= 0.0 && std::isfinite(gamma_eV), "lorentz: gamma must be non-negative");
  return MaterialModel(
      Lorentz{eps_inf, ev_to_rad_per_s(omega_lo_eV), ev_to_rad_per_s(omega_to_eV), ev_to_rad_per_s(gamma_eV)});
}

MaterialModel MaterialModel::constant(double eps) {
  require(eps >= 1.0 && std::isfinite(eps), "constant: eps must be >= 1");
  return MaterialModel(ConstantPermittivity{eps});
}

MaterialModel MaterialModel::perfect_conductor() { return MaterialModel(PerfectConductor{}); }

std::string MaterialModel::name() const {
  return std::visit(Overloaded{[](const Drude&) { return std::string("drude"); },
                               [](const Lorentz&) { return std::string("lorentz"); },
                               [](const ConstantPermittivity&) { return std::string("constant"); },
                               [](const PerfectConductor&) { return std::string("pec"); }},
                    model_);
}

ComplexPermittivity permittivity(const MaterialModel& m, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("permittivity: frequency must be positive (use static_permittivity for omega = 0)");
  }
  using cd = std::complex<double>;
  return std::visit(
      Overloaded{[&](const Drude& d) {
                   return ComplexPermittivity::finite(1.0 - d.omega_p * d.omega_p / (omega * cd(omega, d.gamma)));
                 },
                 [&](const Lorentz& l) {
                   const double strength = l.eps_inf * (l.omega_lo * l.omega_lo - l.omega_to * l.omega_to);
                   const cd denom(l.omega_to * l.omega_to - omega * omega, -omega * l.gamma);
                   return ComplexPermittivity::finite(l.eps_inf + strength / denom);
                 },
                 [](const ConstantPermittivity& c) { return ComplexPermittivity::finite(c.eps); },
                 [](const PerfectConductor&) { return ComplexPermittivity::infinite(); }},
      m.variant());
}

StaticPermittivity static_permittivity(const MaterialModel& m) {
  return std::visit(Overloaded{[](const Drude&) { return StaticPermittivity::infinite(); },
                               [](const Lorentz& l) {
                                 const double r = l.omega_lo / l.omega_to;
                                 return StaticPermittivity::finite(l.eps_inf * r * r);
                               },
                               [](const ConstantPermittivity& c) { return StaticPermittivity::finite(c.eps); },
                               [](const PerfectConductor&) { return StaticPermittivity::infinite(); }},
                    m.variant());
}

double surface_loss_function(const MaterialModel& m, double omega) {
  const auto eps = permittivity(m, omega);
  if (eps.is_infinite()) {
    throw InputError("surface loss of a perfect conductor is undefined; describe the metal with a Drude model");
  }
  // Im[(eps - 1)/(eps + 1)] = 2 Im(eps) / |eps + 1|^2; exactly zero without loss.
  const auto e = eps.value();
  if (e.imag() == 0.0) return 0.0;
  return 2.0 * e.imag() / std::norm(e + 1.0);
}

double tau_half_space(const StaticPermittivity& eps1, const StaticPermittivity& eps2) {
  const double e1 = require_dielectric_environment(eps1).value();
  if (eps2.is_infinite()) return 2.0 * e1;
  const double e2 = eps2.value();
  return 2.0 * e1 * (e2 - 1.0) / (e2 + e1);
}

double tau_concentric_cylinder(const StaticPermittivity& eps1, const StaticPermittivity& eps2) {
  const double e1 = require_dielectric_environment(eps1).value();
  if (eps2.is_infinite()) return e1;
  const double e2 = eps2.value();
  return e1 * (e2 - 1.0) / e2;
}

MaterialModel material_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("model") || !j.at("model").is_string()) {
    throw ConfigError("material spec must be a JSON object with a string \"model\" field");
  }
  const std::string model = j.at("model").get<std::string>();

  const auto check_keys = [&](const std::set<std::string>& allowed) {
    for (const auto& [key, _] : j.items()) {
      if (key != "model" && !allowed.count(key)) {
        throw ConfigError("material '" + model + "': unknown key '" + key + "'");
      }
    }
  };
  const auto number = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
      throw ConfigError("material '" + model + "': missing numeric field '" + key + "'");
    }
    return j.at(key).get<double>();
  };
  const auto number_or = [&](const char* key, double fallback) {
    return j.contains(key) ? number(key) : fallback;
  };

  if (model == "drude") {
    check_keys({"omega_p_eV", "gamma_eV"});
    return MaterialModel::drude_eV(number("omega_p_eV"), number_or("gamma_eV", 0.0));
  }
  if (model == "lorentz") {
    check_keys({"eps_inf", "omega_LO_meV", "omega_TO_meV", "gamma_meV"});
    return MaterialModel::lorentz_eV(number("eps_inf"), 1e-3 * number("omega_LO_meV"),
                                     1e-3 * number("omega_TO_meV"), 1e-3 * number_or("gamma_meV", 0.0));
  }
  if (model == "constant") {
    check_keys({"eps"});
    return MaterialModel::constant(number("eps"));
  }
  if (model == "pec") {
    check_keys({});
    return MaterialModel::perfect_conductor();
  }
  throw ConfigError("unknown material model '" + model + "' (expected drude, lorentz, constant or pec)");
}

nlohmann::json material_to_json(const MaterialModel& m) {
  return std::visit(Overloaded{[](const Drude& d) {
                                 return nlohmann::json{{"model", "drude"},
                                                       {"omega_p_eV", rad_per_s_to_ev(d.omega_p)},
                                                       {"gamma_eV", rad_per_s_to_ev(d.gamma)}};
                               },
                               [](const Lorentz& l) {
                                 return nlohmann::json{{"model", "lorentz"},
                                                       {"eps_inf", l.eps_inf},
                                                       {"omega_LO_meV", 1e3 * rad_per_s_to_ev(l.omega_lo)},
                                                       {"omega_TO_meV", 1e3 * rad_per_s_to_ev(l.omega_to)},
                                                       {"gamma_meV", 1e3 * rad_per_s_to_ev(l.gamma)}};
                               },
                               [](const ConstantPermittivity& c) {
                                 return nlohmann::json{{"model", "constant"}, {"eps", c.eps}};
                               },
                               [](const PerfectConductor&) { return nlohmann::json{{"model", "pec"}}; }},
                    m.variant());
}

}  // namespace gqlimit
