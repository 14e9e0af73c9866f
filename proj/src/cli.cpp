#include "gqlimit/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gqlimit/bounds.hpp"
#include "gqlimit/eels.hpp"
#include "gqlimit/errors.hpp"
#include "gqlimit/foundation.hpp"
#include "gqlimit/io.hpp"
#include "gqlimit/materials.hpp"
#include "gqlimit/quantum.hpp"

namespace gqlimit {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

enum class PType { number, integer, text, flag, number_list, object };

struct PDef {
  const char* key;
  const char* flag;  // empty: config file only
  PType type;
  const char* help;
};

// Shared keys.
const PDef kKind{"kind", "--kind", PType::text, "line | point"};
const PDef kMaterial{"material", "--material", PType::text, "material JSON file or inline JSON object"};
const PDef kEnclosure{"enclosure", "--enclosure", PType::text, "halfspace | cylinder (used with --material)"};
const PDef kTau{"tau", "--tau", PType::number, "electrostatic coefficient tau (instead of --material)"};
const PDef kEpsEnv{"eps_env", "--eps-env", PType::number, "static permittivity of the surrounding medium (default 1)"};
const PDef kPsi{"psi", "--psi", PType::number, "opening angle of the cylinder sector, rad (point only, default 2 pi)"};
const PDef kBeta{"beta", "--beta", PType::number, "electron speed v/c"};
const PDef kElectron{"electron_eV", "--electron-eV", PType::number, "electron kinetic energy, eV"};
const PDef kPhoton{"photon_eV", "--photon-eV", PType::number, "photon energy, eV"};
const PDef kD{"d_nm", "--d-nm", PType::number, "electron-structure separation, nm"};
const PDef kL{"L_um", "--L-um", PType::number, "interaction length, um (default 100)"};
const PDef kQ{"q_C_per_m", "--q-C-per-m", PType::number, "line charge density, C/m (line only, default e per nm)"};
const PDef kOutput{"output", "--output", PType::text, "output path prefix (writes <prefix>.csv and <prefix>.json)"};

std::string fmt(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.10g", v);
  return buf.data();
}

std::string type_name(PType t) {
  switch (t) {
    case PType::number: return "a number";
    case PType::integer: return "an integer";
    case PType::text: return "a string";
    case PType::flag: return "a boolean";
    case PType::number_list: return "a list of numbers";
    case PType::object: return "an object";
  }
  return "?";
}

double parse_number(const std::string& key, const std::string& s) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw InputError("--" + key + ": '" + s + "' is not a number");
  return v;
}

class Params {
 public:
  explicit Params(std::vector<PDef> defs) : defs_(std::move(defs)) {}

  const std::vector<PDef>& defs() const { return defs_; }

  void load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config '" + path + "' must contain a JSON object");
    const fs::path base = fs::path(path).parent_path();
    for (const auto& [key, value] : j.items()) {
      const PDef* def = find(key);
      if (!def) throw ConfigError("config '" + path + "': unknown key '" + key + "'");
      check_type(*def, value);
      values_[key] = value;
      base_dir_[key] = base;
    }
  }

  void set_from_flag(const PDef& def, const std::string& raw) {
    json v;
    switch (def.type) {
      case PType::number: v = parse_number(def.key, raw); break;
      case PType::integer: {
        const double x = parse_number(def.key, raw);
        if (x != std::floor(x) || std::abs(x) > 1e9) throw InputError(std::string(def.flag) + " must be an integer");
        v = static_cast<long long>(x);
        break;
      }
      case PType::text: v = raw; break;
      case PType::flag: v = true; break;
      case PType::number_list: {
        v = json::array();
        std::stringstream ss(raw);
        std::string item;
        while (std::getline(ss, item, ',')) v.push_back(parse_number(def.key, item));
        break;
      }
      case PType::object: throw InputError(std::string(def.key) + " can only be set in a config file");
    }
    values_[def.key] = v;
    base_dir_.erase(def.key);
  }

  bool has(const std::string& key) const { return values_.contains(key); }
  const json& raw(const std::string& key) const { return values_.at(key); }
  fs::path base_dir(const std::string& key) const {
    const auto it = base_dir_.find(key);
    return it == base_dir_.end() ? fs::path() : it->second;
  }

  std::optional<double> number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    const double v = values_.at(key).get<double>();
    if (!std::isfinite(v)) throw InputError(key + " must be finite");
    return v;
  }
  double require_number(const std::string& key) const {
    const auto v = number(key);
    if (!v) throw InputError("missing required parameter '" + key + "'");
    return *v;
  }
  double number_or(const std::string& key, double fallback) const { return number(key).value_or(fallback); }
  long long integer_or(const std::string& key, long long fallback) const {
    return has(key) ? values_.at(key).get<long long>() : fallback;
  }
  std::string text_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? values_.at(key).get<std::string>() : fallback;
  }
  bool flag(const std::string& key) const { return has(key) && values_.at(key).get<bool>(); }
  std::vector<double> number_list(const std::string& key) const {
    return has(key) ? values_.at(key).get<std::vector<double>>() : std::vector<double>{};
  }

  void reject(const std::string& key, const std::string& why) const {
    if (has(key)) throw InputError("'" + key + "' " + why);
  }

  json to_json() const { return json(values_); }

 private:
  const PDef* find(const std::string& key) const {
    const auto it = std::find_if(defs_.begin(), defs_.end(), [&](const PDef& d) { return key == d.key; });
    return it == defs_.end() ? nullptr : &*it;
  }

  static void check_type(const PDef& def, const json& v) {
    bool ok = false;
    switch (def.type) {
      case PType::number: ok = v.is_number(); break;
      case PType::integer: ok = v.is_number_integer(); break;
      case PType::text: ok = v.is_string() || (std::string(def.key) == "material" && v.is_object()); break;
      case PType::flag: ok = v.is_boolean(); break;
      case PType::number_list:
        ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); });
        break;
      case PType::object: ok = v.is_object(); break;
    }
    if (!ok) throw ConfigError("config key '" + std::string(def.key) + "' must be " + type_name(def.type));
  }

  std::vector<PDef> defs_;
  std::map<std::string, json> values_;
  std::map<std::string, fs::path> base_dir_;
};

// --- shared parameter resolution ------------------------------------------

MaterialModel load_material(const Params& p) {
  const json& v = p.raw("material");
  if (v.is_object()) return material_from_json(v);
  const std::string s = v.get<std::string>();
  const auto first = s.find_first_not_of(" \t\n");
  if (first != std::string::npos && s[first] == '{') {
    try {
      return material_from_json(json::parse(s));
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("inline material is not valid JSON: ") + e.what());
    }
  }
  fs::path path(s);
  if (path.is_relative() && !p.base_dir("material").empty()) path = p.base_dir("material") / path;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open material file '" + path.string() + "'");
  try {
    return material_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("material file '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::optional<ElectronKinematics> electron_or_none(const Params& p) {
  if (p.has("beta") && p.has("electron_eV")) throw InputError("give either beta or electron_eV, not both");
  if (p.has("beta")) return ElectronKinematics::from_beta(p.require_number("beta"));
  if (p.has("electron_eV")) return ElectronKinematics::from_kinetic_energy(p.require_number("electron_eV"));
  return std::nullopt;
}

ElectronKinematics require_electron(const Params& p) {
  auto kin = electron_or_none(p);
  if (!kin) throw InputError("missing electron: give beta or electron_eV");
  return *kin;
}

struct TauChoice {
  double tau;
  json source;
};

std::optional<TauChoice> resolve_tau(const Params& p, LimitKind kind) {
  if (p.has("tau") && p.has("material")) throw InputError("give either tau or material, not both");
  if (p.has("tau")) {
    p.reject("enclosure", "only applies together with material");
    return TauChoice{p.require_number("tau"), {{"tau", "given"}}};
  }
  if (!p.has("material")) {
    p.reject("enclosure", "only applies together with material");
    p.reject("eps_env", "only applies together with material");
    return std::nullopt;
  }
  const auto mat = load_material(p);
  const std::string enclosure = p.text_or("enclosure", kind == LimitKind::line ? "halfspace" : "cylinder");
  const auto env = StaticPermittivity::finite(p.number_or("eps_env", 1.0));
  double tau = 0.0;
  if (enclosure == "halfspace") {
    tau = tau_half_space(env, static_permittivity(mat));
  } else if (enclosure == "cylinder") {
    tau = tau_concentric_cylinder(env, static_permittivity(mat));
  } else {
    throw InputError("enclosure must be halfspace or cylinder; got '" + enclosure + "'");
  }
  return TauChoice{tau, {{"material", material_to_json(mat)}, {"enclosure", enclosure}, {"eps_env", env.value()}}};
}

void write_outputs(const std::string& prefix, const std::string& csv, const json& sidecar, std::ostream& out) {
  write_text_file(prefix + ".csv", csv);
  write_text_file(prefix + ".json", sidecar.dump(2) + "\n");
  out << "wrote: " << prefix << ".csv\n";
  out << "wrote: " << prefix << ".json\n";
}

// --- commands --------------------------------------------------------------

void cmd_limit(const Params& p, std::ostream& out) {
  const auto kind = limit_kind_from_string(p.text_or("kind", "point"));
  const auto kin = require_electron(p);
  const double photon_eV = p.require_number("photon_eV");
  const double omega = ev_to_rad_per_s(photon_eV);
  const double d = nm_to_m(p.require_number("d_nm"));
  const double length = um_to_m(p.number_or("L_um", 100.0));
  const auto tau = resolve_tau(p, kind);
  if (!tau) throw InputError("missing tau: give tau or material (with enclosure)");

  double gq2 = 0.0;
  std::string extra;
  if (kind == LimitKind::point) {
    p.reject("q_C_per_m", "only applies to kind = line");
    const double psi = p.number_or("psi", 2.0 * constants::pi);
    gq2 = gq2_limit_point(LimitQuery3D{tau->tau, psi, length, omega, kin, d});
    extra = "psi: " + fmt(psi) + "\n";
  } else {
    p.reject("psi", "only applies to kind = point");
    const double q = p.number_or("q_C_per_m", constants::elementary_charge / 1e-9);
    gq2 = gq2_limit_line(LimitQuery2D{q, length, tau->tau, omega, kin, d});
    extra = "q_C_per_m: " + fmt(q) + "\n";
  }
  out << "kind: " << to_string(kind) << "\n";
  out << "beta: " << fmt(kin.beta()) << "\n";
  out << "electron_eV: " << fmt(kin.kinetic_energy_eV()) << "\n";
  out << "photon_eV: " << fmt(photon_eV) << "\n";
  out << "d_nm: " << fmt(m_to_nm(d)) << "\n";
  out << "L_um: " << fmt(length * 1e6) << "\n";
  out << "tau: " << fmt(tau->tau) << "\n";
  out << extra;
  out << "kappa_d: " << fmt(wavevector_triple(omega, kin).kappa * d) << "\n";
  out << "gq2: " << fmt(gq2) << "\n";
  out << "gq: " << fmt(std::sqrt(gq2)) << "\n";
}

Axis axis_from_json(const json& j, const char* name) {
  static const std::array<const char*, 5> allowed{"param", "min", "max", "count", "scale"};
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ConfigError(std::string(name) + ": unknown key '" + key + "'");
    }
  }
  const auto field = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw ConfigError(std::string(name) + ": missing '" + key + "'");
    return j.at(key);
  };
  if (!field("param").is_string()) throw ConfigError(std::string(name) + ".param must be a string");
  if (!field("min").is_number() || !field("max").is_number()) {
    throw ConfigError(std::string(name) + ": min and max must be numbers");
  }
  if (!field("count").is_number_unsigned()) throw ConfigError(std::string(name) + ".count must be a positive integer");
  const std::string scale = j.contains("scale") ? j.at("scale").get<std::string>() : "linear";
  Axis a{axis_param_from_string(j.at("param").get<std::string>()),
         GridSpec{j.at("min").get<double>(), j.at("max").get<double>(), j.at("count").get<std::size_t>(),
                  grid_scale_from_string(scale)}};
  a.grid.validate();
  return a;
}

FixedParams fixed_from_json(const json& j) {
  static const std::array<const char*, 8> allowed{"beta", "electron_eV", "photon_eV", "d_nm",
                                                   "L_um", "tau",         "psi",       "q_C_per_m"};
  FixedParams f;
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ConfigError("fixed: unknown key '" + key + "'");
    }
    if (!value.is_number()) throw ConfigError("fixed." + key + " must be a number");
  }
  const auto opt = [&](const char* key) -> std::optional<double> {
    return j.contains(key) ? std::optional<double>(j.at(key).get<double>()) : std::nullopt;
  };
  f.beta = opt("beta");
  f.electron_eV = opt("electron_eV");
  f.photon_eV = opt("photon_eV");
  f.d_nm = opt("d_nm");
  f.length_um = opt("L_um").value_or(f.length_um);
  f.tau = opt("tau").value_or(f.tau);
  f.psi = opt("psi").value_or(f.psi);
  f.q_lineal = opt("q_C_per_m").value_or(f.q_lineal);
  return f;
}

void cmd_sweep(const Params& p, std::ostream& out) {
  if (!p.has("axis1") || !p.has("axis2")) throw InputError("sweep needs a config with axis1 and axis2");
  SweepSpec spec;
  spec.kind = limit_kind_from_string(p.text_or("kind", "point"));
  spec.axis1 = axis_from_json(p.raw("axis1"), "axis1");
  spec.axis2 = axis_from_json(p.raw("axis2"), "axis2");
  spec.fixed = p.has("fixed") ? fixed_from_json(p.raw("fixed")) : FixedParams{};
  spec.normalize = p.flag("normalize");
  const long long threads = p.integer_or("threads", 1);
  if (threads < 1 || threads > 256) throw InputError("threads must lie in [1, 256]");
  spec.threads = static_cast<unsigned>(threads);

  json provenance = {{"command", "sweep"}};
  const bool fixed_tau = p.has("fixed") && p.raw("fixed").contains("tau");
  if (p.has("material") || p.has("tau")) {
    if (fixed_tau) throw InputError("give tau either in fixed or through material, not both");
    const auto tau = resolve_tau(p, spec.kind);
    spec.fixed.tau = tau->tau;
    provenance["tau_source"] = tau->source;
  } else {
    resolve_tau(p, spec.kind);  // rejects stray enclosure / eps_env
    provenance["tau_source"] = fixed_tau ? json{{"tau", "given"}} : json{{"tau", "default"}};
  }
  const std::string prefix = p.text_or("output", "");
  if (prefix.empty()) throw InputError("sweep needs an output prefix (--output)");

  const auto map = sweep_limit_map(spec);
  write_outputs(prefix, limit_map_csv(map), limit_map_sidecar(spec, map, provenance), out);
  out << "cells: " << map.values.size() << "\n";
  out << "peak_raw_gq2: " << fmt(map.peak_raw) << "\n";
  out << "normalization: " << (map.normalized ? "peak" : "raw") << "\n";
}

void cmd_optimal(const Params& p, std::ostream& out) {
  const auto kind = limit_kind_from_string(p.text_or("kind", "point"));
  const double x = kind == LimitKind::point ? optimal_kappa_d() : kLineCutoffKappaD;
  const char* relation = kind == LimitKind::point ? "optimal" : "cutoff";
  const auto photon_for = [&](const ElectronKinematics& kin, double d) {
    return kind == LimitKind::point ? optimal_photon_for_electron(kin, d) : line_cutoff_frequency(kin, d);
  };

  if (p.has("d_nm_list")) {
    p.reject("d_nm", "cannot be combined with d_nm_list");
    p.reject("photon_eV", "is not used in d-sweep mode");
    p.reject("beta", "is not used in d-sweep mode");
    p.reject("electron_eV", "is not used in d-sweep mode");
    const auto ds = p.number_list("d_nm_list");
    if (ds.empty()) throw InputError("d_nm_list is empty");
    const long long points = p.integer_or("points", 200);
    if (points < 2) throw InputError("points must be at least 2");
    const GridSpec grid{p.require_number("electron_min_eV"), p.require_number("electron_max_eV"),
                        static_cast<std::size_t>(points), GridScale::log};
    grid.validate();
    const std::string prefix = p.text_or("output", "");
    if (prefix.empty()) throw InputError("d-sweep mode needs an output prefix (--output)");

    std::string csv = "d_nm,photon_eV,electron_eV,beta,kappa_d\n";
    const auto energies = grid.values();
    for (double d_nm : ds) {
      if (!(d_nm > 0.0)) throw DomainError("separations in d_nm_list must be positive");
      for (double e : energies) {
        const auto kin = ElectronKinematics::from_kinetic_energy(e);
        const double omega = photon_for(kin, nm_to_m(d_nm));
        csv += format_g17(d_nm) + ',' + format_g17(rad_per_s_to_ev(omega)) + ',' + format_g17(e) + ',' +
               format_g17(kin.beta()) + ',' + format_g17(x) + '\n';
      }
    }
    const json sidecar = {{"schema_version", kSchemaVersion},
                          {"code_version", code_version()},
                          {"artifact", "energy_pairing"},
                          {"kind", to_string(kind)},
                          {"relation", relation},
                          {"kappa_d", x},
                          {"columns", {"d_nm", "photon_eV", "electron_eV", "beta", "kappa_d"}},
                          {"d_nm_list", ds},
                          {"electron_grid", {{"min_eV", grid.min}, {"max_eV", grid.max}, {"count", grid.count},
                                             {"scale", "log"}}},
                          {"provenance", {{"command", "optimal"}, {"config", p.to_json()}}}};
    write_outputs(prefix, csv, sidecar, out);
    out << "rows: " << ds.size() * energies.size() << "\n";
    return;
  }

  const double d = nm_to_m(p.require_number("d_nm"));
  const auto kin_in = electron_or_none(p);
  if (kin_in && p.has("photon_eV")) throw InputError("give either a photon energy or an electron, not both");
  std::optional<ElectronKinematics> kin = kin_in;
  double omega = 0.0;
  if (kin) {
    omega = photon_for(*kin, d);
  } else if (p.has("photon_eV")) {
    omega = ev_to_rad_per_s(p.require_number("photon_eV"));
    if (!(omega > 0.0)) throw DomainError("photon energy must be positive");
    kin = kind == LimitKind::point ? optimal_electron_for_photon(omega, d)
                                   : ElectronKinematics::from_beta_gamma(omega * d / (x * constants::c));
  } else {
    throw InputError("give photon_eV, beta or electron_eV");
  }
  out << "kind: " << to_string(kind) << "\n";
  out << "relation: " << relation << "\n";
  out << "kappa_d: " << fmt(x) << "\n";
  out << "d_nm: " << fmt(m_to_nm(d)) << "\n";
  out << "photon_eV: " << fmt(rad_per_s_to_ev(omega)) << "\n";
  out << "electron_eV: " << fmt(kin->kinetic_energy_eV()) << "\n";
  out << "beta: " << fmt(kin->beta()) << "\n";
  out << "gamma: " << fmt(kin->gamma()) << "\n";
}

void cmd_eels(const Params& p, std::ostream& out) {
  const auto geometry = eels_geometry_from_string(p.text_or("geometry", "line-halfspace"));
  if (!p.has("material")) throw InputError("eels needs a material (drude or lorentz)");
  const auto material = load_material(p);
  if (std::holds_alternative<PerfectConductor>(material.variant())) {
    throw InputError("a perfect conductor has no loss function; describe the metal with a drude model");
  }
  const auto kin = require_electron(p);
  const double d = nm_to_m(p.require_number("d_nm"));
  const double length = um_to_m(p.number_or("L_um", 100.0));
  double q = 0.0;
  if (geometry == EelsGeometry::line_halfspace) {
    q = p.number_or("q_C_per_m", constants::elementary_charge / 1e-9);
  } else {
    p.reject("q_C_per_m", "only applies to the line geometry");
  }
  const SpectrumProvenance setup{geometry, material, kin, d, length, q};

  SpectralWindow window{0.0, 0.0};
  if (std::holds_alternative<Drude>(material.variant())) window = default_spp_window(material, kin);
  if (p.has("window_center_eV")) window.center = ev_to_rad_per_s(p.require_number("window_center_eV"));
  if (p.has("window_half_width_eV")) window.half_width = ev_to_rad_per_s(p.require_number("window_half_width_eV"));
  if (window.center == 0.0 || window.half_width == 0.0) {
    throw InputError("non-drude materials need window_center_eV and window_half_width_eV");
  }
  window.validate();

  const double lo = p.has("photon_min_eV") ? ev_to_rad_per_s(p.require_number("photon_min_eV"))
                                           : std::max(window.center - 4.0 * window.half_width, 1e-3 * window.center);
  const double hi = p.has("photon_max_eV") ? ev_to_rad_per_s(p.require_number("photon_max_eV"))
                                           : window.center + 4.0 * window.half_width;
  const long long points = p.integer_or("points", 2001);
  if (points < 2 || points > 10'000'000) throw InputError("points must lie in [2, 1e7]");
  if (!(lo > 0.0) || !(hi > lo)) throw InputError("photon grid must satisfy 0 < photon_min_eV < photon_max_eV");
  const GridSpec grid{lo, hi, static_cast<std::size_t>(points), GridScale::linear};
  const auto omegas = grid.values();

  const auto spectrum = geometry == EelsGeometry::line_halfspace
                            ? loss_spectrum_line_halfspace(q, material, kin, d, length, omegas)
                            : loss_spectrum_point_halfspace(material, kin, d, length, omegas);
  const double gq2 = integrate_gq2(spectrum, window);
  const auto cmp = compare_with_limit(setup, window);

  out << "geometry: " << to_string(geometry) << "\n";
  out << "material: " << material_to_json(material).dump() << "\n";
  out << "beta: " << fmt(kin.beta()) << "\n";
  out << "electron_eV: " << fmt(kin.kinetic_energy_eV()) << "\n";
  out << "d_nm: " << fmt(m_to_nm(d)) << "\n";
  out << "L_um: " << fmt(length * 1e6) << "\n";
  out << "window_center_eV: " << fmt(rad_per_s_to_ev(window.center)) << "\n";
  out << "window_half_width_eV: " << fmt(rad_per_s_to_ev(window.half_width)) << "\n";
  out << "gq2: " << fmt(gq2) << "\n";
  out << "tau: " << fmt(cmp.tau) << "\n";
  out << "limit_gq2: " << fmt(cmp.limit_window_max) << "\n";
  out << "limit_gq2_center: " << fmt(cmp.limit_center) << "\n";
  out << "ratio: " << fmt(cmp.ratio) << "\n";
  out << "ratio_center: " << fmt(cmp.ratio_center) << "\n";

  if (p.has("output")) {
    auto sidecar = loss_spectrum_sidecar(spectrum, &window);
    sidecar["integrated_gq2"] = gq2;
    sidecar["limit_comparison"] = {{"tau", cmp.tau},
                                   {"limit_gq2", cmp.limit_window_max},
                                   {"limit_gq2_center", cmp.limit_center},
                                   {"ratio", cmp.ratio},
                                   {"ratio_center", cmp.ratio_center}};
    sidecar["provenance"] = {{"command", "eels"}, {"config", p.to_json()}};
    write_outputs(p.text_or("output", ""), loss_spectrum_csv(spectrum), sidecar, out);
  }
}

void cmd_scatter(const Params& p, std::ostream& out) {
  ScatterConfig cfg;
  const double magnitude = p.require_number("gq");
  if (magnitude < 0.0) throw InputError("gq is a magnitude; use phase for the complex argument");
  cfg.g_q = std::polar(magnitude, p.number_or("phase", 0.0));
  const long long k = p.integer_or("K", 40);
  const long long n = p.integer_or("N", 40);
  if (k < 0 || n < 0 || k > Truncation::kMaxSize || n > Truncation::kMaxSize) {
    throw InputError("K and N must lie in [1, " + std::to_string(Truncation::kMaxSize) + "]");
  }
  cfg.truncation = Truncation{static_cast<int>(k), static_cast<int>(n)};
  cfg.tolerance = p.number_or("tolerance", cfg.tolerance);

  const auto state = evolve_spontaneous(cfg);
  const auto dist = photon_distribution(state);
  const double mean = std::norm(cfg.g_q);
  const auto poisson = poisson_distribution(mean, dist.size() - 1);
  double multi = 0.0;
  for (std::size_t i = 2; i < dist.size(); ++i) multi += dist[i];

  out << "gq: " << fmt(magnitude) << "\n";
  out << "K: " << k << "\n";
  out << "N: " << n << "\n";
  out << "P0: " << fmt(dist[0]) << "\n";
  out << "P1: " << fmt(dist[1]) << "\n";
  out << "p_multi: " << fmt(multi) << "\n";
  out << "mean: " << fmt(distribution_mean(dist)) << "\n";
  out << "variance: " << fmt(distribution_variance(dist)) << "\n";
  out << "tv_poisson: " << fmt(total_variation_distance(dist, poisson)) << "\n";
  out << "leak: " << fmt(state.leak()) << "\n";
  out << "norm_drift: " << fmt(std::abs(state.norm() - 1.0)) << "\n";

  if (p.has("output")) {
    auto sidecar = photon_distribution_sidecar(cfg, state);
    sidecar["provenance"] = {{"command", "scatter"}, {"config", p.to_json()}};
    write_outputs(p.text_or("output", ""), photon_distribution_csv(dist), sidecar, out);
  }
}

struct Command {
  const char* name;
  const char* help;
  std::vector<PDef> defs;
  std::function<void(const Params&, std::ostream&)> run;
};

std::vector<Command> commands() {
  return {
      {"limit",
       "Shape-independent |g_Q|^2 limit for one electron/photon pair",
       {kKind, kMaterial, kEnclosure, kTau, kEpsEnv, kPsi, kBeta, kElectron, kPhoton, kD, kL, kQ},
       cmd_limit},
      {"sweep",
       "Evaluate the limit on a 2D grid (config file) and write CSV + JSON",
       {kKind,
        kMaterial,
        kEnclosure,
        kTau,
        kEpsEnv,
        kOutput,
        {"threads", "--threads", PType::integer, "worker threads (default 1)"},
        {"normalize", "--normalize", PType::flag, "divide by the map maximum"},
        {"axis1", "", PType::object, ""},
        {"axis2", "", PType::object, ""},
        {"fixed", "", PType::object, ""}},
       cmd_sweep},
      {"optimal",
       "Electron/photon energy pairing (point: optimal, line: cut-off)",
       {kKind,
        kBeta,
        kElectron,
        kPhoton,
        kD,
        kOutput,
        {"d_nm_list", "--d-nm-list", PType::number_list, "comma-separated separations for d-sweep mode, nm"},
        {"electron_min_eV", "--electron-min-eV", PType::number, "d-sweep: lowest electron energy, eV"},
        {"electron_max_eV", "--electron-max-eV", PType::number, "d-sweep: highest electron energy, eV"},
        {"points", "--points", PType::integer, "d-sweep: electron energies per separation (default 200)"}},
       cmd_optimal},
      {"eels",
       "Quasistatic half-space loss spectrum, window integral and limit ratio",
       {kMaterial,
        kBeta,
        kElectron,
        kD,
        kL,
        kQ,
        kOutput,
        {"geometry", "--geometry", PType::text, "line-halfspace | point-halfspace"},
        {"photon_min_eV", "--photon-min-eV", PType::number, "spectrum grid start, eV"},
        {"photon_max_eV", "--photon-max-eV", PType::number, "spectrum grid end, eV"},
        {"points", "--points", PType::integer, "spectrum grid points (default 2001)"},
        {"window_center_eV", "--window-center-eV", PType::number, "override the integration window center, eV"},
        {"window_half_width_eV", "--window-half-width-eV", PType::number,
         "override the integration window half-width, eV"}},
       cmd_eels},
      {"scatter",
       "Apply the scattering operator to |E0, 0> and report photon statistics",
       {kOutput,
        {"gq", "--gq", PType::number, "coupling magnitude |g_Q|"},
        {"phase", "--phase", PType::number, "coupling phase, rad"},
        {"K", "--K", PType::integer, "electron ladder cutoff (default 40)"},
        {"N", "--N", PType::integer, "photon number cutoff (default 40)"},
        {"tolerance", "--tolerance", PType::number, "largest accepted truncation leak (default 1e-9)"}},
       cmd_scatter},
  };
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Upper limits on free-electron/photon coupling"};
  app.name("gqlimit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(code_version()));

  auto cmds = commands();
  struct Bound {
    CLI::App* sub;
    std::string config;
    std::map<std::string, std::string> raw;
    std::map<std::string, bool> flags;
    std::map<std::string, CLI::Option*> opts;
  };
  std::vector<Bound> bound(cmds.size());
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    auto& b = bound[i];
    b.sub = app.add_subcommand(cmds[i].name, cmds[i].help);
    b.sub->add_option("--config", b.config, "JSON config file; flags override its values");
    for (const auto& def : cmds[i].defs) {
      if (std::string(def.flag).empty()) continue;
      if (def.type == PType::flag) {
        b.opts[def.key] = b.sub->add_flag(def.flag, b.flags[def.key], def.help);
      } else {
        b.opts[def.key] = b.sub->add_option(def.flag, b.raw[def.key], def.help);
      }
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  for (std::size_t i = 0; i < cmds.size(); ++i) {
    auto& b = bound[i];
    if (!b.sub->parsed()) continue;
    try {
      Params params(cmds[i].defs);
      if (!b.config.empty()) params.load_config(b.config);
      for (const auto& def : cmds[i].defs) {
        const auto it = b.opts.find(def.key);
        if (it == b.opts.end() || it->second->count() == 0) continue;
        params.set_from_flag(def, def.type == PType::flag ? std::string() : b.raw[def.key]);
      }
      cmds[i].run(params, out);
      return kExitOk;
    } catch (const InputError& e) {
      err << "error: " << e.what() << "\n";
      return kExitInput;
    } catch (const nlohmann::json::exception& e) {
      err << "error: invalid configuration: " << e.what() << "\n";
      return kExitInput;
    } catch (const NumericalError& e) {
      err << "numerical failure: " << e.what() << "\n";
      return kExitNumerical;
    } catch (const std::exception& e) {
      err << "numerical failure: " << e.what() << "\n";
      return kExitNumerical;
    }
  }
  return kExitInput;
}

}  // namespace gqlimit
