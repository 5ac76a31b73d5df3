#include "relaxflow/relaxation.hpp"

#include <algorithm>
#include <cmath>

namespace relaxflow {

// With a = eps^2|c2| and W = |V|, the equation is eps^2 W + c1 W^m = a.  Each
// term alone gives an upper bound for the root; lambda is the smaller one and
// W = lambda X turns the equation into p X + q X^m = 1 with max(p, q) = 1 and
// the root X in (0, 1].  Newton runs on X for m >= 1 and on Z = X^m for m < 1,
// so the function is convex and increasing in the iteration variable and the
// iteration started at the upper end of the bracket decreases monotonically.
// Iterates that leave the bracket are replaced by bisection.
RelaxationSolve solve_relaxation_newton(double eps, double c1, double c2, double m,
                                        const NewtonOptions& opt) {
  RelaxationSolve out;
  const double e2 = eps * eps;
  const double a = e2 * std::abs(c2);
  if (a == 0.0) return out;
  if (!std::isfinite(a) || !(c1 > 0.0) || !(m > 0.0)) {
    out.converged = false;
    out.residual = INFINITY;
    return out;
  }
  const double sign = c2 > 0.0 ? 1.0 : -1.0;

  // p = eps^2 lambda / a, q = c1 lambda^m / a
  double lambda = std::pow(a / c1, 1.0 / m);
  if (e2 > 0.0) lambda = std::min(lambda, a / e2);
  double p = 0.0, q = 0.0;
  if (std::isnormal(lambda) && std::isnormal(std::pow(lambda, m))) {
    p = e2 * lambda / a;
    q = c1 * std::pow(lambda, m) / a;
  } else {
    // Extreme magnitudes: form the coefficients in logarithms.
    const double log_a = std::log(a);
    double log_lambda = (log_a - std::log(c1)) / m;
    if (e2 > 0.0) log_lambda = std::min(log_lambda, log_a - std::log(e2));
    lambda = std::exp(log_lambda);
    p = e2 > 0.0 ? std::exp(std::log(e2) + log_lambda - log_a) : 0.0;
    q = std::exp(std::log(c1) + m * log_lambda - log_a);
  }

  const bool in_x = m >= 1.0;
  auto x_of = [&](double y) { return in_x ? y : std::pow(y, 1.0 / m); };
  auto residual = [&](double x) { return p * x + q * std::pow(x, m) - 1.0; };
  auto scaled = [&](double x, double r) {
    return std::abs(r) / std::max({1.0, q * std::pow(x, m), p * x});
  };

  double lo = 0.0, hi = 1.0, y = 1.0;
  double x = 1.0;
  double r = residual(x);
  out.residual = scaled(x, r);
  while (out.residual > opt.tol) {
    if (out.iterations >= opt.max_iter) break;
    double dg = in_x ? p + q * m * std::pow(y, m - 1.0) : p / m * std::pow(y, 1.0 / m - 1.0) + q;
    double next = y - r / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    ++out.iterations;
    if (next == y) break;
    y = next;
    x = x_of(y);
    r = residual(x);
    if (r > 0.0) hi = y;
    else lo = y;
    out.residual = scaled(x, r);
  }
  out.converged = out.residual <= opt.tol;
  double w = lambda * x;
  out.underflow = w == 0.0;
  out.value = sign * w;
  return out;
}

}  // namespace relaxflow
