#include "gqlimit/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gqlimit/errors.hpp"
#include "gqlimit/foundation.hpp"

namespace gqlimit {
namespace {

constexpr double kSeriesSplit = 2.0;
constexpr double kUnderflowArg = 700.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || std::isnan(x)) {
    throw DomainError(std::string(name) + ": argument must be positive, got " + std::to_string(x));
  }
}

// Ascending series, valid for 0 < x <= 2:
//   K0 = -ln(x/2) I0 + sum psi(k+1) t^k / (k!)^2
//   x K1 = 1 + x ln(x/2) I1 - (x^2/4) sum [psi(k+1) + psi(k+2)] t^k / (k! (k+1)!)
// with t = x^2/4 and psi(1) = -gamma_E.
struct SmallSeries {
  double k0;
  double xk1;
};

SmallSeries small_series(double x) {
  const double t = 0.25 * x * x;
  const double log_half = std::log(0.5 * x);

  double term0 = 1.0;  // t^k / (k!)^2
  double term1 = 1.0;  // t^k / (k! (k+1)!)
  double psi_k1 = -constants::euler_gamma;        // psi(k+1)
  double psi_k2 = 1.0 - constants::euler_gamma;   // psi(k+2)

  double i0 = 0.0, i1_sum = 0.0, k0_sum = 0.0, k1_sum = 0.0;
  for (int k = 0; k < 60; ++k) {
    i0 += term0;
    i1_sum += term1;
    k0_sum += psi_k1 * term0;
    k1_sum += (psi_k1 + psi_k2) * term1;
    if (term0 < kEps * 1e-3 * i0 && k > 0) break;
    const double kp1 = k + 1.0;
    term0 *= t / (kp1 * kp1);
    term1 *= t / (kp1 * (kp1 + 1.0));
    psi_k1 += 1.0 / kp1;
    psi_k2 += 1.0 / (kp1 + 1.0);
  }
  const double i1 = 0.5 * x * i1_sum;
  return {-log_half * i0 + k0_sum, 1.0 + x * log_half * i1 - t * k1_sum};
}

// Temme's method (continued fraction CF2 with Steed's algorithm) for
// exp(x) K0(x) and exp(x) K1(x), valid for x >= 2.
struct ScaledPair {
  double k0;
  double k1;
};

ScaledPair temme_scaled(double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 10000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) {
      h *= a1;
      const double k0 = std::sqrt(constants::pi / (2.0 * x)) / s;
      return {k0, k0 * (x + 0.5 - h) / x};
    }
  }
  throw NumericalError("Bessel K continued fraction failed to converge at x = " + std::to_string(x));
}

}  // namespace

double bessel_k0_scaled(double x) {
  require_positive(x, "bessel_k0_scaled");
  if (x <= kSeriesSplit) return small_series(x).k0 * std::exp(x);
  return temme_scaled(x).k0;
}

double bessel_k1_scaled(double x) {
  require_positive(x, "bessel_k1_scaled");
  if (x <= kSeriesSplit) return small_series(x).xk1 / x * std::exp(x);
  return temme_scaled(x).k1;
}

double bessel_k0(double x) {
  require_positive(x, "bessel_k0");
  if (x > kUnderflowArg) return 0.0;
  if (x <= kSeriesSplit) return small_series(x).k0;
  return temme_scaled(x).k0 * std::exp(-x);
}

double bessel_k1(double x) {
  require_positive(x, "bessel_k1");
  if (x > kUnderflowArg) return 0.0;
  if (x <= kSeriesSplit) return small_series(x).xk1 / x;
  return temme_scaled(x).k1 * std::exp(-x);
}

double x_bessel_k1(double x) {
  require_positive(x, "x_bessel_k1");
  if (x <= kSeriesSplit) return small_series(x).xk1;
  if (x > kUnderflowArg) return 0.0;
  return x * temme_scaled(x).k1 * std::exp(-x);
}

double xk0k1(double x) {
  require_positive(x, "xk0k1");
  if (x <= kSeriesSplit) {
    const auto s = small_series(x);
    return s.k0 * s.xk1;
  }
  const auto p = temme_scaled(x);
  return x * p.k0 * p.k1 * std::exp(-2.0 * x);
}

double log_xk0k1(double x) {
  require_positive(x, "log_xk0k1");
  if (x <= kSeriesSplit) return std::log(xk0k1(x));
  const auto p = temme_scaled(x);
  return std::log(x * p.k0 * p.k1) - 2.0 * x;
}

double optimal_residual(double x) {
  require_positive(x, "optimal_residual");
  if (x <= kSeriesSplit) {
    const auto s = small_series(x);
    // k1 (k0 - x k1) - x k0^2; k1^2 alone overflows near x = 1e-300
    const double k1 = s.xk1 / x;
    return k1 * (s.k0 - s.xk1) - x * s.k0 * s.k0;
  }
  const auto p = temme_scaled(x);
  const double scale = std::exp(-2.0 * x);
  return (p.k0 * p.k1 - x * (p.k0 * p.k0 + p.k1 * p.k1)) * scale;
}

double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi, double abs_tol,
                           int max_iter) {
  if (!(lo < hi) || !(abs_tol > 0.0)) {
    throw NumericalError("find_root_bracketed: invalid bracket or tolerance");
  }
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb) || std::isnan(fa) || std::isnan(fb)) {
    throw NumericalError("find_root_bracketed: no sign change on [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
  }
  for (int it = 0; it < max_iter; ++it) {
    if (b - a <= 2.0 * abs_tol) return 0.5 * (a + b);

    // Secant through the bracket ends; fall back to bisection when the step
    // leaves the bracket or would shrink it by less than half.
    const double mid = 0.5 * (a + b);
    double x = a - fa * (b - a) / (fb - fa);
    const bool usable = std::isfinite(x) && x > a && x < b;
    if (!usable || std::abs(x - mid) > 0.25 * (b - a)) x = mid;

    const double fx = f(x);
    if (fx == 0.0) return x;
    if (std::signbit(fx) == std::signbit(fa)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
  }
  throw NumericalError("find_root_bracketed: iteration limit reached");
}

}  // namespace gqlimit
