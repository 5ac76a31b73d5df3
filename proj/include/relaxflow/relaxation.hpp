#pragma once

namespace relaxflow {

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 50;
};

struct RelaxationSolve {
  double value = 0.0;
  int iterations = 0;
  bool converged = true;
  // |F(V)| / max(eps^2|c2|, c1|V|^m, eps^2|V|), evaluated in rescaled variables.
  double residual = 0.0;
  // The root is below the smallest representable magnitude and was flushed to 0.
  bool underflow = false;
};

// Root of eps^2 V + c1 |V|^{m-1} V = eps^2 c2 (c1 > 0, m > 0).
// Convergence when |F(V)| <= tol * max(eps^2|c2|, c1|V|^m, eps^2|V|).
RelaxationSolve solve_relaxation_newton(double eps, double c1, double c2, double m,
                                        const NewtonOptions& opt = {});

// Closed form of the m = 1 case.
inline double solve_relaxation_linear(double eps, double c1, double c2) {
  const double e2 = eps * eps;
  return e2 * c2 / (e2 + c1);
}

}  // namespace relaxflow
