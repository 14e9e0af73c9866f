#include <doctest.h>

#include <cmath>

#include "gqlimit/bounds.hpp"
#include "gqlimit/errors.hpp"
#include "gqlimit/specfun.hpp"

using namespace gqlimit;

namespace {

const double kE = constants::elementary_charge;
const double kQ = kE / 1e-9;
const double kThz = 2.0 * constants::pi * 1e12;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

LimitQuery2D line_query(double beta, double omega, double d, double tau = 2.0, double length = 100e-6) {
  return {kQ, length, tau, omega, ElectronKinematics::from_beta(beta), d};
}

LimitQuery3D point_query(double beta, double omega, double d, double tau = 1.0, double psi = 2.0 * constants::pi,
                         double length = 100e-6) {
  return {tau, psi, length, omega, ElectronKinematics::from_beta(beta), d};
}

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("general limit from a field integral") {
  CHECK(gq2_limit_from_field_integral(2.0, {0.0, 1e15}) == 0.0);
  CHECK(gq2_limit_from_field_integral(0.0, {1.0, 1e15}) == 0.0);
  CHECK_THROWS_AS(gq2_limit_from_field_integral(-1.0, {1.0, 1e15}), DomainError);
  CHECK_THROWS_AS(gq2_limit_from_field_integral(1.0, {-1.0, 1e15}), DomainError);
  const double w = 3e15;
  CHECK(rel(gq2_limit_from_field_integral(1.5, {2.0, w}),
            constants::pi * constants::eps0 * w * 1.5 / (4.0 * constants::hbar) * 2.0) < 1e-15);
}

TEST_CASE("line limit is the general limit of the sheet-charge field") {
  for (double beta : {0.05, 0.3, 0.7, 0.99}) {
    for (double ev : {0.01, 1.0, 10.0}) {
      for (double d : {10e-9, 100e-9}) {
        const auto q = line_query(beta, ev_to_rad_per_s(ev), d);
        const double direct = gq2_limit_line(q);
        if (direct == 0.0) continue;
        const auto fi = half_space_field_integral_line(q.q_lineal, q.length, q.omega0, q.kin, q.d);
        CHECK(rel(gq2_limit_from_field_integral(q.tau, fi), direct) <= 1e-12);
      }
    }
  }
}

TEST_CASE("point limit is the general limit of the cylinder-sector field") {
  for (double beta : {0.05, 0.3, 0.7, 0.99}) {
    for (double ev : {0.004, 1.0, 10.0}) {
      const auto q = point_query(beta, ev_to_rad_per_s(ev), 100e-9, 2.0, constants::pi);
      const auto fi = cylinder_sector_field_integral_point(q.psi, q.length, q.omega0, q.kin, q.d);
      CHECK(rel(gq2_limit_from_field_integral(q.tau, fi), gq2_limit_point(q)) <= 1e-12);
    }
  }
}

TEST_CASE("radial integral identity behind the point limit") {
  // int_X^inf x (K0^2 + K1^2) dx = X K0(X) K1(X)
  for (double x0 : {0.1, 0.4064, 2.0, 10.0}) {
    const auto f = [](double x) {
      const double k0 = bessel_k0(x), k1 = bessel_k1(x);
      return x * (k0 * k0 + k1 * k1);
    };
    const double num = simpson(f, x0, x0 + 40.0, 400000);
    CHECK(rel(num, xk0k1(x0)) < 1e-8);
  }
}

TEST_CASE("line limit regression anchor") {
  // q = e/nm, L = 100 um, tau = 2, beta = 0.5, d = 100 nm at kappa d = 0.5.
  // Reference from an independent 30-digit evaluation of the closed form.
  const auto kin = ElectronKinematics::from_beta(0.5);
  const double w = line_cutoff_frequency(kin, 100e-9);
  CHECK(rel(gq2_limit_line({kQ, 100e-6, 2.0, w, kin, 100e-9}), 2676997802222.88709) < 1e-12);
}

TEST_CASE("point limit at 1 THz") {
  CHECK(rel(gq2_limit_point(point_query(0.1, kThz, 1e-6)), 3.91815158585510053) < 1e-11);
  CHECK(rel(gq2_limit_point(point_query(0.9, kThz, 1e-6)), 0.139547538548444177) < 1e-11);
  CHECK(rel(std::exp(log_gq2_limit_point(point_query(0.1, kThz, 1e-6))), 3.91815158585510053) < 1e-11);
}

TEST_CASE("limits vanish far away and without a scatterer") {
  CHECK(gq2_limit_line(line_query(0.5, ev_to_rad_per_s(1.0), 1.0)) == 0.0);
  CHECK(gq2_limit_point(point_query(0.5, ev_to_rad_per_s(1.0), 1.0)) == 0.0);
  CHECK(gq2_limit_point(point_query(0.5, ev_to_rad_per_s(1.0), 1e-7, 0.0)) == 0.0);
  CHECK(std::isfinite(log_gq2_limit_point(point_query(0.5, ev_to_rad_per_s(1.0), 1.0))));
  CHECK(std::isfinite(log_gq2_limit_line(line_query(0.5, ev_to_rad_per_s(1.0), 1.0))));
}

TEST_CASE("query validation") {
  auto q = point_query(0.5, 1e15, 1e-7);
  q.psi = 7.0;
  CHECK_THROWS_AS(gq2_limit_point(q), DomainError);
  q = point_query(0.5, 1e15, -1e-7);
  CHECK_THROWS_AS(gq2_limit_point(q), DomainError);
  q = point_query(0.5, 0.0, 1e-7);
  CHECK_THROWS_AS(gq2_limit_point(q), DomainError);
  auto l = line_query(0.5, 1e15, 1e-7, -1.0);
  CHECK_THROWS_AS(gq2_limit_line(l), DomainError);
  l = line_query(0.5, 1e15, 1e-7);
  l.q_lineal = 0.0;
  CHECK_THROWS_AS(gq2_limit_line(l), DomainError);
  CHECK_THROWS_AS(line_cutoff_frequency(ElectronKinematics::from_beta(0.5), 0.0), DomainError);
}

TEST_CASE("monotone in d, linear in L, tau and psi") {
  const double w = ev_to_rad_per_s(1.0);
  double prev_l = INFINITY, prev_p = INFINITY;
  for (double d = 1e-9; d < 1e-5; d *= 1.5) {
    const double l = gq2_limit_line(line_query(0.3, w, d));
    const double p = gq2_limit_point(point_query(0.3, w, d));
    CHECK(l < prev_l);
    CHECK(p < prev_p);
    prev_l = l;
    prev_p = p;
  }
  const double base_l = gq2_limit_line(line_query(0.3, w, 50e-9));
  const double base_p = gq2_limit_point(point_query(0.3, w, 50e-9));
  CHECK(rel(gq2_limit_line(line_query(0.3, w, 50e-9, 6.0)), 3.0 * base_l) < 1e-14);
  CHECK(rel(gq2_limit_line(line_query(0.3, w, 50e-9, 2.0, 300e-6)), 3.0 * base_l) < 1e-14);
  CHECK(rel(gq2_limit_point(point_query(0.3, w, 50e-9, 3.0)), 3.0 * base_p) < 1e-14);
  CHECK(rel(gq2_limit_point(point_query(0.3, w, 50e-9, 1.0, constants::pi)), 0.5 * base_p) < 1e-14);
  CHECK(rel(gq2_limit_point(point_query(0.3, w, 50e-9, 1.0, 2.0 * constants::pi, 300e-6)), 3.0 * base_p) < 1e-14);
}

TEST_CASE("line cut-off") {
  const auto k = ElectronKinematics::from_beta(0.5);
  CHECK(rad_per_s_to_ev(line_cutoff_frequency(k, 100e-9)) == doctest::Approx(0.569634).epsilon(1e-6));
  double prev = 0.0;
  for (double d = 1e-5; d > 1e-9; d /= 2.0) {
    const double w = line_cutoff_frequency(k, d);
    CHECK(w > prev);
    prev = w;
  }
  prev = 0.0;
  for (double b = 0.1; b < 1.0; b = 1.0 - (1.0 - b) / 2.0) {
    const double w = line_cutoff_frequency(ElectronKinematics::from_beta(b), 100e-9);
    CHECK(w > prev);
    prev = w;
  }
  const auto t = wavevector_triple(line_cutoff_frequency(k, 100e-9), k);
  CHECK(t.kappa * 100e-9 == doctest::Approx(kLineCutoffKappaD).epsilon(1e-14));
}

TEST_CASE("line limit falls as exp(-2 kappa d) in frequency") {
  // (kv^2 + kappa^2)/(omega kappa) does not depend on omega, so the line
  // limit decays monotonically in omega; kappa d = 1/2 marks the 1/e point.
  const auto k = ElectronKinematics::from_beta(0.4);
  const double d = 100e-9;
  const double wc = line_cutoff_frequency(k, d);
  const double lo = gq2_limit_line({kQ, 1e-4, 2.0, 1e-6 * wc, k, d});
  CHECK(rel(gq2_limit_line({kQ, 1e-4, 2.0, wc, k, d}), lo * std::exp(-1.0 + 1e-6)) < 1e-9);
  double prev = INFINITY;
  for (double f = 0.01; f < 10.0; f *= 1.1) {
    const double v = gq2_limit_line({kQ, 1e-4, 2.0, f * wc, k, d});
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("optimal kappa d") {
  const double x = optimal_kappa_d();
  CHECK(x == doctest::Approx(0.4064).epsilon(5e-4 / 0.4064));
  CHECK(x >= 0.406);
  CHECK(x <= 0.407);
  CHECK(std::abs(optimal_residual(x)) <= 1e-8);
  CHECK(std::abs(x - 0.4064197246) < 2e-8);
}

TEST_CASE("point limit argmax over frequency sits at the optimal kappa d") {
  for (double beta : {0.05, 0.3, 0.8}) {
    for (double d : {10e-9, 1e-6}) {
      const auto kin = ElectronKinematics::from_beta(beta);
      // grid in x = kappa d
      const double step = 1e-3;
      double best_x = 0.0, best = -INFINITY;
      for (double x = 0.01; x < 3.0; x += step) {
        const double w = x * kin.velocity() * kin.gamma() / d;
        const double v = log_gq2_limit_point({1.0, 2.0 * constants::pi, 1e-4, w, kin, d});
        if (v > best) {
          best = v;
          best_x = x;
        }
      }
      CHECK(std::abs(best_x - optimal_kappa_d()) <= step);
    }
  }
}

TEST_CASE("optimal pairings at 100 nm") {
  const double d = 100e-9;
  const auto fast = optimal_electron_for_photon(ev_to_rad_per_s(10.0), d);
  CHECK(fast.beta_gamma() == doctest::Approx(12.4692).epsilon(1e-5));
  CHECK(fast.kinetic_energy_eV() == doctest::Approx(5.881e6).epsilon(1e-3));
  const auto slow = optimal_electron_for_photon(ev_to_rad_per_s(0.1), d);
  CHECK(slow.kinetic_energy_eV() == doctest::Approx(3957.2).epsilon(1e-4));
  CHECK(rad_per_s_to_ev(optimal_photon_for_electron(ElectronKinematics::from_beta(0.5), d)) ==
        doctest::Approx(0.463021).epsilon(1e-5));
  // both directions agree
  CHECK(rel(optimal_photon_for_electron(fast, d), ev_to_rad_per_s(10.0)) < 1e-13);
  CHECK_THROWS_AS(optimal_electron_for_photon(0.0, d), DomainError);
  CHECK_THROWS_AS(optimal_photon_for_electron(fast, 0.0), DomainError);
}

TEST_CASE("ridge value is proportional to gamma / beta with its minimum at 1/sqrt(2)") {
  const double d = 100e-9;
  double best_b = 0.0, best = INFINITY;
  double ref = 0.0;
  for (double b = 0.05; b < 0.99; b += 1e-4) {
    const auto kin = ElectronKinematics::from_beta(b);
    const double v = gq2_limit_point({1.0, 2.0 * constants::pi, 1e-4, optimal_photon_for_electron(kin, d), kin, d});
    if (ref == 0.0) ref = v / (kin.gamma() / b);
    CHECK(rel(v / (kin.gamma() / b), ref) < 1e-9);
    if (v < best) {
      best = v;
      best_b = b;
    }
  }
  CHECK(std::abs(best_b - 1.0 / std::sqrt(2.0)) < 0.01);
}

// --- sweeps -------------------------------------------------------------------

namespace {

SweepSpec pec_thz_spec(std::size_t nb, std::size_t nd) {
  SweepSpec s;
  s.kind = LimitKind::point;
  s.axis1 = {AxisParam::beta, {0.01, 0.99, nb, GridScale::linear}};
  s.axis2 = {AxisParam::separation, {10.0, 10000.0, nd, GridScale::log}};
  s.fixed.photon_eV = rad_per_s_to_ev(kThz);
  s.fixed.tau = 1.0;
  s.fixed.psi = 2.0 * constants::pi;
  s.fixed.length_um = 100.0;
  return s;
}

}  // namespace

TEST_CASE("grid values") {
  const GridSpec lin{1.0, 2.0, 5, GridScale::linear};
  CHECK(lin.values() == std::vector<double>{1.0, 1.25, 1.5, 1.75, 2.0});
  const auto lg = GridSpec{10.0, 1e4, 4, GridScale::log}.values();
  CHECK(lg.front() == 10.0);
  CHECK(lg.back() == 1e4);
  CHECK(lg[1] == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(GridSpec{3.0, 3.0, 1, GridScale::log}.values() == std::vector<double>{3.0});
  CHECK_THROWS_AS(GridSpec({2.0, 1.0, 3, GridScale::linear}).validate(), ConfigError);
  CHECK_THROWS_AS(GridSpec({0.0, 1.0, 3, GridScale::log}).validate(), ConfigError);
  CHECK_THROWS_AS(GridSpec({0.0, 1.0, 0, GridScale::linear}).validate(), ConfigError);
  CHECK_THROWS_AS(GridSpec({1.0, 1.0, 2, GridScale::linear}).validate(), ConfigError);
}

TEST_CASE("enum string round trips") {
  for (auto k : {LimitKind::line, LimitKind::point}) CHECK(limit_kind_from_string(to_string(k)) == k);
  for (auto s : {GridScale::linear, GridScale::log}) CHECK(grid_scale_from_string(to_string(s)) == s);
  for (auto p : {AxisParam::beta, AxisParam::electron_energy, AxisParam::photon_energy, AxisParam::separation}) {
    CHECK(axis_param_from_string(to_string(p)) == p);
  }
  CHECK(grid_scale_from_string("lin") == GridScale::linear);
  CHECK_THROWS_AS(limit_kind_from_string("plane"), ConfigError);
  CHECK_THROWS_AS(axis_param_from_string("energy"), ConfigError);
}

TEST_CASE("sweep spec validation") {
  auto s = pec_thz_spec(3, 3);
  CHECK_NOTHROW(s.validate());
  s.fixed.d_nm = 100.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = pec_thz_spec(3, 3);
  s.fixed.photon_eV.reset();
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = pec_thz_spec(3, 3);
  s.axis2 = {AxisParam::electron_energy, {1e3, 1e4, 3, GridScale::log}};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = pec_thz_spec(3, 3);
  s.threads = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = pec_thz_spec(3, 3);
  s.axis1.grid = {0.5, 1.5, 3, GridScale::linear};  // beta >= 1 inside the grid
  CHECK_THROWS_AS(sweep_limit_map(s), DomainError);
}

TEST_CASE("1x1 sweep equals the scalar limit") {
  SweepSpec s;
  s.kind = LimitKind::point;
  s.axis1 = {AxisParam::beta, {0.1, 0.1, 1, GridScale::linear}};
  s.axis2 = {AxisParam::separation, {1000.0, 1000.0, 1, GridScale::log}};
  s.fixed.photon_eV = rad_per_s_to_ev(kThz);
  const auto map = sweep_limit_map(s);
  REQUIRE(map.values.size() == 1);
  CHECK(map.values[0] ==
        doctest::Approx(gq2_limit_point(point_query(0.1, ev_to_rad_per_s(*s.fixed.photon_eV), 1e-6))).epsilon(1e-14));

  s.kind = LimitKind::line;
  s.fixed.tau = 2.0;
  CHECK(sweep_limit_map(s).values[0] ==
        doctest::Approx(gq2_limit_line(line_query(0.1, ev_to_rad_per_s(*s.fixed.photon_eV), 1e-6, 2.0))).epsilon(1e-14));
}

TEST_CASE("sweep output is independent of the thread count") {
  auto s = pec_thz_spec(37, 41);
  const auto one = limit_map_csv(sweep_limit_map(s));
  for (unsigned t : {2u, 3u, 8u}) {
    s.threads = t;
    CHECK(limit_map_csv(sweep_limit_map(s)) == one);
  }
}

TEST_CASE("peak normalization") {
  auto s = pec_thz_spec(20, 20);
  const auto raw = sweep_limit_map(s);
  s.normalize = true;
  const auto norm = sweep_limit_map(s);
  CHECK(norm.normalized);
  CHECK(*std::max_element(norm.values.begin(), norm.values.end()) == 1.0);
  CHECK(*std::min_element(norm.values.begin(), norm.values.end()) >= 0.0);
  CHECK(norm.peak_raw == raw.peak_raw);
  CHECK(norm.at(3, 4) == doctest::Approx(raw.at(3, 4) / raw.peak_raw).epsilon(1e-15));
}

TEST_CASE("csv and sidecar layout") {
  auto s = pec_thz_spec(2, 3);
  const auto map = sweep_limit_map(s);
  const auto csv = limit_map_csv(map);
  CHECK(csv.rfind("axis1,axis2,gq2\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  const auto j = limit_map_sidecar(s, map, {{"source", "test"}});
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("normalization") == "raw");
  CHECK(j.at("axis1").at("param") == "beta");
  CHECK(j.at("axis2").at("unit") == "nm");
  CHECK(j.at("fixed").at("photon_eV").get<double>() == *s.fixed.photon_eV);
  CHECK(j.at("provenance").at("source") == "test");
  CHECK(j.contains("code_version"));
}

TEST_CASE("energy-map ridge follows the optimal kappa d") {
  SweepSpec s;
  s.kind = LimitKind::point;
  s.axis1 = {AxisParam::electron_energy, {1e3, 1e8, 41, GridScale::log}};
  s.axis2 = {AxisParam::photon_energy, {0.01, 100.0, 801, GridScale::log}};
  s.fixed.d_nm = 100.0;
  s.normalize = true;
  const auto map = sweep_limit_map(s);
  const double step = std::log(1e4) / 800.0;  // log spacing of the photon grid
  for (std::size_t i = 0; i < map.axis1_values.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < map.axis2_values.size(); ++j) {
      if (map.at(i, j) > map.at(i, best)) best = j;
    }
    if (best == 0 || best + 1 == map.axis2_values.size()) continue;  // ridge outside the window
    const auto kin = ElectronKinematics::from_kinetic_energy(map.axis1_values[i]);
    const double x = wavevector_triple(ev_to_rad_per_s(map.axis2_values[best]), kin).kappa * 100e-9;
    CHECK(std::abs(std::log(x / optimal_kappa_d())) <= step);
  }
}

TEST_CASE("1 THz PEC map: strong coupling only for slow electrons") {
  const auto map = sweep_limit_map(pec_thz_spec(99, 61));
  bool any = false;
  for (std::size_t i = 0; i < map.axis1_values.size(); ++i) {
    for (std::size_t j = 0; j < map.axis2_values.size(); ++j) {
      if (map.at(i, j) > 1.0) {
        any = true;
        CHECK(map.axis1_values[i] < 0.45);
      }
    }
  }
  CHECK(any);
}
