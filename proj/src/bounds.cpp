#include "gqlimit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "gqlimit/errors.hpp"
#include "gqlimit/io.hpp"
#include "gqlimit/specfun.hpp"

namespace gqlimit {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be non-negative and finite");
  }
}

double line_prefactor(const LimitQuery2D& q) {
  using namespace constants;
  return pi * q.q_lineal * q.q_lineal * q.tau * q.length / (32.0 * hbar * eps0);
}

// (kv^2 + kappa^2) / (omega0 kappa)
double line_wavevector_factor(const WavevectorTriple& w, double omega0) {
  return (w.kv * w.kv + w.kappa * w.kappa) / (omega0 * w.kappa);
}

double point_prefactor(const LimitQuery3D& q) {
  using namespace constants;
  const double beta = q.kin.beta();
  return alpha * q.tau * q.psi * q.length / (4.0 * c) * q.omega0 / (beta * beta);
}

}  // namespace

void LimitQuery2D::validate() const {
  require_positive(q_lineal, "line charge density q");
  require_positive(length, "interaction length L");
  require_non_negative(tau, "tau");
  require_positive(omega0, "photon frequency");
  require_positive(d, "separation d");
}

void LimitQuery3D::validate() const {
  require_non_negative(tau, "tau");
  if (!(psi > 0.0 && psi <= 2.0 * constants::pi * (1.0 + 1e-12))) {
    throw DomainError("opening angle psi must lie in (0, 2 pi]");
  }
  require_positive(length, "interaction length L");
  require_positive(omega0, "photon frequency");
  require_positive(d, "separation d");
}

double gq2_limit_from_field_integral(double tau, const FieldIntegral& fi) {
  require_non_negative(tau, "tau");
  require_non_negative(fi.value, "field integral");
  require_positive(fi.omega0, "photon frequency");
  using namespace constants;
  return pi * eps0 * fi.omega0 * tau / (4.0 * hbar) * fi.value;
}

FieldIntegral half_space_field_integral_line(double q_lineal, double length, double omega0,
                                             const ElectronKinematics& kin, double d) {
  require_positive(q_lineal, "line charge density q");
  require_positive(length, "interaction length L");
  require_positive(d, "separation d");
  const auto w = wavevector_triple(omega0, kin);
  const double v = kin.velocity();
  const double g2 = kin.gamma() * kin.gamma();

  // Sheet charge potential amplitude q / (2 eps0 v kappa) e^{-kappa |z|};
  // E_x carries the 1/gamma^2 retardation factor, E_z does not.
  const double amp = q_lineal / (2.0 * constants::eps0 * v * w.kappa);
  const double ex2 = amp * amp * (w.kv * w.kv) / (g2 * g2);
  const double ez2 = amp * amp * w.kappa * w.kappa;
  const double depth = std::exp(-2.0 * w.kappa * d) / (2.0 * w.kappa);
  return {length * (ex2 + ez2) * depth, omega0};
}

FieldIntegral cylinder_sector_field_integral_point(double psi, double length, double omega0,
                                                   const ElectronKinematics& kin, double d) {
  if (!(psi > 0.0 && psi <= 2.0 * constants::pi * (1.0 + 1e-12))) {
    throw DomainError("opening angle psi must lie in (0, 2 pi]");
  }
  require_positive(length, "interaction length L");
  require_positive(d, "separation d");
  const auto w = wavevector_triple(omega0, kin);
  const double amp = constants::elementary_charge / (2.0 * constants::pi * constants::eps0 * kin.velocity());
  // psi L amp^2 kappa^2 int_d^inf rho (K0^2 + K1^2)(kappa rho) drho
  //   = psi L amp^2 int_{kappa d}^inf x (K0^2 + K1^2) dx = psi L amp^2 [x K0 K1]_{x = kappa d}
  return {psi * length * amp * amp * xk0k1(w.kappa * d), omega0};
}

double gq2_limit_line(const LimitQuery2D& q) {
  q.validate();
  const auto w = wavevector_triple(q.omega0, q.kin);
  return line_prefactor(q) * line_wavevector_factor(w, q.omega0) * std::exp(-2.0 * w.kappa * q.d);
}

double log_gq2_limit_line(const LimitQuery2D& q) {
  q.validate();
  const auto w = wavevector_triple(q.omega0, q.kin);
  return std::log(line_prefactor(q) * line_wavevector_factor(w, q.omega0)) - 2.0 * w.kappa * q.d;
}

double gq2_limit_point(const LimitQuery3D& q) {
  q.validate();
  const auto w = wavevector_triple(q.omega0, q.kin);
  return point_prefactor(q) * xk0k1(w.kappa * q.d);
}

double log_gq2_limit_point(const LimitQuery3D& q) {
  q.validate();
  const auto w = wavevector_triple(q.omega0, q.kin);
  return std::log(point_prefactor(q)) + log_xk0k1(w.kappa * q.d);
}

double line_cutoff_frequency(const ElectronKinematics& kin, double d) {
  require_positive(d, "separation d");
  return kLineCutoffKappaD * constants::c * kin.beta_gamma() / d;
}

double optimal_kappa_d() {
  static const double root = find_root_bracketed(optimal_residual, 0.05, 2.0, 1e-14);
  return root;
}

ElectronKinematics optimal_electron_for_photon(double omega0, double d) {
  require_positive(omega0, "photon frequency");
  require_positive(d, "separation d");
  return ElectronKinematics::from_beta_gamma(omega0 * d / (optimal_kappa_d() * constants::c));
}

double optimal_photon_for_electron(const ElectronKinematics& kin, double d) {
  require_positive(d, "separation d");
  return optimal_kappa_d() * constants::c * kin.beta_gamma() / d;
}

// --- sweeps ---------------------------------------------------------------

std::string to_string(LimitKind k) { return k == LimitKind::line ? "line" : "point"; }
std::string to_string(GridScale s) { return s == GridScale::linear ? "lin" : "log"; }

std::string to_string(AxisParam p) {
  switch (p) {
    case AxisParam::beta: return "beta";
    case AxisParam::electron_energy: return "electron_eV";
    case AxisParam::photon_energy: return "photon_eV";
    case AxisParam::separation: return "d_nm";
  }
  return "?";
}

std::string axis_unit(AxisParam p) {
  switch (p) {
    case AxisParam::beta: return "1";
    case AxisParam::electron_energy: return "eV";
    case AxisParam::photon_energy: return "eV";
    case AxisParam::separation: return "nm";
  }
  return "?";
}

LimitKind limit_kind_from_string(const std::string& s) {
  if (s == "line") return LimitKind::line;
  if (s == "point") return LimitKind::point;
  throw ConfigError("limit kind must be 'line' or 'point', got '" + s + "'");
}

GridScale grid_scale_from_string(const std::string& s) {
  if (s == "lin" || s == "linear") return GridScale::linear;
  if (s == "log") return GridScale::log;
  throw ConfigError("grid scale must be 'lin' or 'log', got '" + s + "'");
}

AxisParam axis_param_from_string(const std::string& s) {
  if (s == "beta") return AxisParam::beta;
  if (s == "electron_eV") return AxisParam::electron_energy;
  if (s == "photon_eV") return AxisParam::photon_energy;
  if (s == "d_nm") return AxisParam::separation;
  throw ConfigError("axis parameter must be one of beta, electron_eV, photon_eV, d_nm; got '" + s + "'");
}

void GridSpec::validate() const {
  if (count == 0) throw ConfigError("grid count must be at least 1");
  if (!std::isfinite(min) || !std::isfinite(max)) throw ConfigError("grid bounds must be finite");
  if (count > 1 ? !(max > min) : max < min) throw ConfigError("grid must be increasing (max > min)");
  if (scale == GridScale::log && !(min > 0.0)) throw ConfigError("log grid requires min > 0");
}

std::vector<double> GridSpec::values() const {
  validate();
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = min;
    return out;
  }
  const double n = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / n;
    out[i] = scale == GridScale::linear ? min + (max - min) * f
                                        : std::exp(std::log(min) + (std::log(max) - std::log(min)) * f);
  }
  out.front() = min;
  out.back() = max;
  return out;
}

namespace {

bool is_electron_axis(AxisParam p) { return p == AxisParam::beta || p == AxisParam::electron_energy; }

struct CellInputs {
  std::optional<ElectronKinematics> kin;
  double omega0 = 0.0;
  double d = 0.0;
};

void assign_axis(CellInputs& c, AxisParam p, double v) {
  switch (p) {
    case AxisParam::beta: c.kin = ElectronKinematics::from_beta(v); break;
    case AxisParam::electron_energy: c.kin = ElectronKinematics::from_kinetic_energy(v); break;
    case AxisParam::photon_energy: c.omega0 = ev_to_rad_per_s(v); break;
    case AxisParam::separation: c.d = nm_to_m(v); break;
  }
}

}  // namespace

void SweepSpec::validate() const {
  axis1.grid.validate();
  axis2.grid.validate();
  if (axis1.param == axis2.param || (is_electron_axis(axis1.param) && is_electron_axis(axis2.param))) {
    throw ConfigError("sweep axes must describe two different quantities");
  }
  const bool electron_swept = is_electron_axis(axis1.param) || is_electron_axis(axis2.param);
  const bool photon_swept = axis1.param == AxisParam::photon_energy || axis2.param == AxisParam::photon_energy;
  const bool d_swept = axis1.param == AxisParam::separation || axis2.param == AxisParam::separation;

  if (!electron_swept) {
    if (fixed.beta.has_value() == fixed.electron_eV.has_value()) {
      throw ConfigError("fixed parameters need exactly one of beta or electron_eV");
    }
  } else if (fixed.beta || fixed.electron_eV) {
    throw ConfigError("electron velocity is swept; remove fixed beta/electron_eV");
  }
  if (!photon_swept && !fixed.photon_eV) throw ConfigError("fixed parameters need photon_eV");
  if (photon_swept && fixed.photon_eV) throw ConfigError("photon energy is swept; remove fixed photon_eV");
  if (!d_swept && !fixed.d_nm) throw ConfigError("fixed parameters need d_nm");
  if (d_swept && fixed.d_nm) throw ConfigError("separation is swept; remove fixed d_nm");
  if (!(fixed.length_um > 0.0)) throw ConfigError("L_um must be positive");
  if (!(fixed.tau >= 0.0)) throw ConfigError("tau must be non-negative");
  if (kind == LimitKind::point && !(fixed.psi > 0.0 && fixed.psi <= 2.0 * constants::pi * (1.0 + 1e-12))) {
    throw ConfigError("psi must lie in (0, 2 pi]");
  }
  if (kind == LimitKind::line && !(fixed.q_lineal > 0.0)) throw ConfigError("q_C_per_m must be positive");
  if (threads == 0) throw ConfigError("threads must be at least 1");
}

double evaluate_limit_cell(const SweepSpec& spec, double axis1_value, double axis2_value) {
  CellInputs c;
  if (spec.fixed.beta) c.kin = ElectronKinematics::from_beta(*spec.fixed.beta);
  if (spec.fixed.electron_eV) c.kin = ElectronKinematics::from_kinetic_energy(*spec.fixed.electron_eV);
  if (spec.fixed.photon_eV) c.omega0 = ev_to_rad_per_s(*spec.fixed.photon_eV);
  if (spec.fixed.d_nm) c.d = nm_to_m(*spec.fixed.d_nm);
  assign_axis(c, spec.axis1.param, axis1_value);
  assign_axis(c, spec.axis2.param, axis2_value);
  if (!c.kin) throw ConfigError("electron velocity not specified");

  const double length = um_to_m(spec.fixed.length_um);
  if (spec.kind == LimitKind::line) {
    return gq2_limit_line({spec.fixed.q_lineal, length, spec.fixed.tau, c.omega0, *c.kin, c.d});
  }
  return gq2_limit_point({spec.fixed.tau, spec.fixed.psi, length, c.omega0, *c.kin, c.d});
}

LimitMap sweep_limit_map(const SweepSpec& spec) {
  spec.validate();
  LimitMap map;
  map.axis1 = spec.axis1;
  map.axis2 = spec.axis2;
  map.axis1_values = spec.axis1.grid.values();
  map.axis2_values = spec.axis2.grid.values();
  const std::size_t n1 = map.axis1_values.size();
  const std::size_t n2 = map.axis2_values.size();
  const std::size_t total = n1 * n2;
  map.values.assign(total, 0.0);

  // Validate every grid value up front so workers never throw.
  CellInputs probe;
  for (double v : map.axis1_values) assign_axis(probe, spec.axis1.param, v);
  for (double v : map.axis2_values) assign_axis(probe, spec.axis2.param, v);
  (void)evaluate_limit_cell(spec, map.axis1_values.front(), map.axis2_values.front());

  const auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      map.values[idx] = evaluate_limit_cell(spec, map.axis1_values[idx / n2], map.axis2_values[idx % n2]);
    }
  };

  const std::size_t workers = std::min<std::size_t>(spec.threads, total);
  if (workers <= 1) {
    fill(0, total);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (total + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(total, begin + chunk);
      if (begin < end) pool.emplace_back(fill, begin, end);
    }
  }

  map.peak_raw = *std::max_element(map.values.begin(), map.values.end());
  if (spec.normalize && map.peak_raw > 0.0) {
    for (double& v : map.values) v /= map.peak_raw;
    map.normalized = true;
  }
  return map;
}

std::string limit_map_csv(const LimitMap& map) {
  std::string out = "axis1,axis2,gq2\n";
  out.reserve(out.size() + map.values.size() * 64);
  const std::size_t n2 = map.axis2_values.size();
  for (std::size_t i = 0; i < map.axis1_values.size(); ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      out += format_g17(map.axis1_values[i]);
      out += ',';
      out += format_g17(map.axis2_values[j]);
      out += ',';
      out += format_g17(map.values[i * n2 + j]);
      out += '\n';
    }
  }
  return out;
}

namespace {

nlohmann::json axis_json(const Axis& a) {
  return {{"param", to_string(a.param)},
          {"unit", axis_unit(a.param)},
          {"min", a.grid.min},
          {"max", a.grid.max},
          {"count", a.grid.count},
          {"scale", to_string(a.grid.scale)}};
}

}  // namespace

nlohmann::json limit_map_sidecar(const SweepSpec& spec, const LimitMap& map, const nlohmann::json& extra) {
  nlohmann::json fixed = {{"L_um", spec.fixed.length_um}, {"tau", spec.fixed.tau}};
  if (spec.kind == LimitKind::point) fixed["psi"] = spec.fixed.psi;
  if (spec.kind == LimitKind::line) fixed["q_C_per_m"] = spec.fixed.q_lineal;
  if (spec.fixed.beta) fixed["beta"] = *spec.fixed.beta;
  if (spec.fixed.electron_eV) fixed["electron_eV"] = *spec.fixed.electron_eV;
  if (spec.fixed.photon_eV) fixed["photon_eV"] = *spec.fixed.photon_eV;
  if (spec.fixed.d_nm) fixed["d_nm"] = *spec.fixed.d_nm;

  return {{"schema_version", kSchemaVersion},
          {"code_version", code_version()},
          {"artifact", "limit_map"},
          {"kind", to_string(spec.kind)},
          {"columns", {"axis1", "axis2", "gq2"}},
          {"axis1", axis_json(map.axis1)},
          {"axis2", axis_json(map.axis2)},
          {"fixed", fixed},
          {"normalization", map.normalized ? "peak" : "raw"},
          {"peak_raw_gq2", map.peak_raw},
          {"provenance", extra}};
}

}  // namespace gqlimit
