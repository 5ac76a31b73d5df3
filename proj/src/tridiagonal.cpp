#include "relaxflow/tridiagonal.hpp"

#include <cmath>

namespace relaxflow {

namespace {

constexpr double kPivotFloor = 1e-300;

// Plain Thomas sweep on (lower, diag, upper), ignoring corner entries.
void thomas(const std::vector<double>& lower, const std::vector<double>& diag,
            const std::vector<double>& upper, std::vector<double>& x) {
  const size_t n = diag.size();
  std::vector<double> cp(n);
  double piv = diag[0];
  if (!(std::abs(piv) > kPivotFloor)) throw SingularSystemError("zero pivot in row 0");
  cp[0] = upper[0] / piv;
  x[0] = x[0] / piv;
  for (size_t j = 1; j < n; ++j) {
    piv = diag[j] - lower[j] * cp[j - 1];
    if (!(std::abs(piv) > kPivotFloor))
      throw SingularSystemError("zero pivot in row " + std::to_string(j));
    cp[j] = upper[j] / piv;
    x[j] = (x[j] - lower[j] * x[j - 1]) / piv;
  }
  for (size_t j = n - 1; j-- > 0;) x[j] -= cp[j] * x[j + 1];
}

}  // namespace

std::vector<double> TridiagonalSystem::apply(CSpan x) const {
  const int n = size();
  std::vector<double> y(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    double v = diag[j] * x[j];
    if (j > 0) v += lower[j] * x[j - 1];
    else if (cyclic) v += lower[0] * x[n - 1];
    if (j < n - 1) v += upper[j] * x[j + 1];
    else if (cyclic) v += upper[n - 1] * x[0];
    y[j] = v;
  }
  return y;
}

std::vector<double> TridiagonalSystem::solve(CSpan rhs) const {
  const int n = size();
  std::vector<double> x(rhs.begin(), rhs.end());
  const double top_right = lower[0];
  const double bottom_left = upper[n - 1];
  if (!cyclic || (top_right == 0.0 && bottom_left == 0.0)) {
    thomas(lower, diag, upper, x);
    return x;
  }
  const double gamma = -diag[0];
  std::vector<double> d = diag;
  d[0] -= gamma;
  d[n - 1] -= bottom_left * top_right / gamma;
  thomas(lower, d, upper, x);
  std::vector<double> z(static_cast<size_t>(n), 0.0);
  z[0] = gamma;
  z[n - 1] = bottom_left;
  thomas(lower, d, upper, z);
  const double ratio = top_right / gamma;
  const double denom = 1.0 + z[0] + ratio * z[n - 1];
  if (!(std::abs(denom) > kPivotFloor)) throw SingularSystemError("singular cyclic correction");
  const double factor = (x[0] + ratio * x[n - 1]) / denom;
  for (int j = 0; j < n; ++j) x[j] -= factor * z[j];
  return x;
}

TridiagonalSystem assemble_diffusion_system(CSpan w, double sigma, const Grid1D& g) {
  const int n = g.size();
  const double s = sigma / (g.dx() * g.dx());
  TridiagonalSystem sys;
  sys.cyclic = g.boundary() == Boundary::Periodic;
  sys.lower.resize(static_cast<size_t>(n));
  sys.diag.resize(static_cast<size_t>(n));
  sys.upper.resize(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    sys.lower[j] = -s * w[j];
    sys.upper[j] = -s * w[j + 1];
    sys.diag[j] = 1.0 + s * (w[j] + w[j + 1]);
  }
  return sys;
}

TridiagonalSystem assemble_frozen_diffusion_system(CSpan u_star, double alpha, double tol,
                                                   double sigma, const Grid1D& g) {
  auto w = power_face_weights(u_star, alpha, tol, g);
  return assemble_diffusion_system(w, sigma, g);
}

}  // namespace relaxflow
