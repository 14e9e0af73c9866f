#pragma once

#include <functional>

namespace gqlimit {

/// Modified Bessel functions of the second kind, orders 0 and 1, real x > 0.
///
/// x <= 2 uses the ascending series; x > 2 uses Temme's continued fraction
/// for the exponentially scaled value and applies exp(-x) last. Both return
/// 0 for x > 700 (underflow is reported as zero, not as an error).
double bessel_k0(double x);
double bessel_k1(double x);

/// exp(x) K0(x) and exp(x) K1(x). Finite for every x > 0.
double bessel_k0_scaled(double x);
double bessel_k1_scaled(double x);

/// x K1(x), which tends to 1 as x -> 0 and stays finite where K1 overflows.
double x_bessel_k1(double x);

/// x K0(x) K1(x), the radial factor of the point-electron limit. Strictly
/// decreasing, diverges logarithmically at 0, decays like (pi/2) e^{-2x}.
double xk0k1(double x);

/// log(x K0(x) K1(x)); usable far past the range where xk0k1 underflows.
double log_xk0k1(double x);

/// K0 K1 - x (K0^2 + K1^2). Its single root on (0.01, 10) is the optimal
/// kappa*d of the point-electron limit.
double optimal_residual(double x);

/// Root of f on [lo, hi] by bisection with secant refinement. f(lo) and
/// f(hi) must differ in sign. Stops when the bracket is narrower than
/// 2 * abs_tol or f hits zero exactly. Throws NumericalError on a bad bracket
/// or when max_iter is exhausted.
double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi, double abs_tol,
                           int max_iter = 400);

}  // namespace gqlimit
