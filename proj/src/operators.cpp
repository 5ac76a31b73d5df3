#include "relaxflow/operators.hpp"

#include <cmath>

namespace relaxflow {

namespace {

std::vector<double> alloc(const Grid1D& g) { return std::vector<double>(static_cast<size_t>(g.size())); }

}  // namespace

void d_central(CSpan f, const Grid1D& g, Span out, Parity parity) {
  const int n = g.size();
  const double inv = 1.0 / (2.0 * g.dx());
  for (int j = 1; j < n - 1; ++j) out[j] = (f[j + 1] - f[j - 1]) * inv;
  out[0] = (f[1] - g.at(f, -1, parity)) * inv;
  out[n - 1] = (g.at(f, n, parity) - f[n - 2]) * inv;
}

void d_upwind(CSpan f, int speed_sign, const Grid1D& g, Span out, Parity parity) {
  const int n = g.size();
  const double inv = 1.0 / g.dx();
  if (speed_sign >= 0) {
    out[0] = (f[0] - g.at(f, -1, parity)) * inv;
    for (int j = 1; j < n; ++j) out[j] = (f[j] - f[j - 1]) * inv;
  } else {
    for (int j = 0; j < n - 1; ++j) out[j] = (f[j + 1] - f[j]) * inv;
    out[n - 1] = (g.at(f, n, parity) - f[n - 1]) * inv;
  }
}

void d_blend(CSpan f, double mu, int speed_sign, const Grid1D& g, Span out, Parity parity) {
  auto up = d_upwind(f, speed_sign, g, parity);
  d_central(f, g, out, parity);
  for (size_t j = 0; j < out.size(); ++j) out[j] = (1.0 - mu) * up[j] + mu * out[j];
}

void d2_central(CSpan f, const Grid1D& g, Span out, Parity parity) {
  const int n = g.size();
  const double inv = 1.0 / (g.dx() * g.dx());
  for (int j = 1; j < n - 1; ++j) out[j] = (f[j + 1] - 2.0 * f[j] + f[j - 1]) * inv;
  out[0] = (f[1] - 2.0 * f[0] + g.at(f, -1, parity)) * inv;
  out[n - 1] = (g.at(f, n, parity) - 2.0 * f[n - 1] + f[n - 2]) * inv;
}

std::vector<double> d_central(CSpan f, const Grid1D& g, Parity parity) {
  auto out = alloc(g);
  d_central(f, g, out, parity);
  return out;
}

std::vector<double> d_upwind(CSpan f, int speed_sign, const Grid1D& g, Parity parity) {
  auto out = alloc(g);
  d_upwind(f, speed_sign, g, out, parity);
  return out;
}

std::vector<double> d_blend(CSpan f, double mu, int speed_sign, const Grid1D& g, Parity parity) {
  auto out = alloc(g);
  d_blend(f, mu, speed_sign, g, out, parity);
  return out;
}

std::vector<double> d2_central(CSpan f, const Grid1D& g, Parity parity) {
  auto out = alloc(g);
  d2_central(f, g, out, parity);
  return out;
}

void power_face_weights(CSpan u, double alpha, double tol, const Grid1D& g, Span w) {
  const int n = g.size();
  const double inv = 1.0 / g.dx();
  auto weight = [&](double du) { return alpha == 0.0 ? 1.0 : std::pow(std::abs(du) * inv + tol, alpha); };
  for (int f = 1; f < n; ++f) w[f] = weight(u[f] - u[f - 1]);
  if (g.boundary() == Boundary::Periodic) {
    w[0] = weight(u[0] - u[n - 1]);
    w[n] = w[0];
  } else {
    w[0] = 0.0;
    w[n] = 0.0;
  }
}

std::vector<double> power_face_weights(CSpan u, double alpha, double tol, const Grid1D& g) {
  std::vector<double> w(static_cast<size_t>(g.size()) + 1);
  power_face_weights(u, alpha, tol, g, w);
  return w;
}

void secant_face_weights(CSpan u, const std::function<double(double)>& phi,
                         const std::function<double(double)>& dphi, double reg_tol,
                         const Grid1D& g, Span w) {
  const int n = g.size();
  auto weight = [&](double ul, double ur) {
    double du = ur - ul;
    if (std::abs(du) >= reg_tol && du != 0.0) return (phi(ur) - phi(ul)) / du;
    double mid = 0.5 * (ul + ur);
    if (dphi) return dphi(mid);
    double h = std::max(reg_tol, 1e-7 * std::max(1.0, std::abs(mid)));
    return (phi(mid + h) - phi(mid - h)) / (2.0 * h);
  };
  for (int f = 1; f < n; ++f) w[f] = weight(u[f - 1], u[f]);
  if (g.boundary() == Boundary::Periodic) {
    w[0] = weight(u[n - 1], u[0]);
    w[n] = w[0];
  } else {
    w[0] = 0.0;
    w[n] = 0.0;
  }
}

void flux_divergence(CSpan u, CSpan w, const Grid1D& g, Span out) {
  for (auto& v : out) v = 0.0;
  add_flux_divergence(u, w, 1.0, g, out);
}

void add_flux_divergence(CSpan u, CSpan w, double scale, const Grid1D& g, Span out) {
  const int n = g.size();
  const double s = scale / (g.dx() * g.dx());
  for (int j = 1; j < n - 1; ++j)
    out[j] += s * (w[j + 1] * (u[j + 1] - u[j]) - w[j] * (u[j] - u[j - 1]));
  // Boundary faces: periodic wrap, or w = 0 under ZeroGradient.
  double left = g.at(u, -1), right = g.at(u, n);
  out[0] += s * (w[1] * (u[1] - u[0]) - w[0] * (u[0] - left));
  out[n - 1] += s * (w[n] * (right - u[n - 1]) - w[n - 1] * (u[n - 1] - u[n - 2]));
}

void nonlinear_flux_divergence(CSpan u, double alpha, double tol, const Grid1D& g, Span out) {
  auto w = power_face_weights(u, alpha, tol, g);
  flux_divergence(u, w, g, out);
}

std::vector<double> nonlinear_flux_divergence(CSpan u, double alpha, double tol, const Grid1D& g) {
  auto out = alloc(g);
  nonlinear_flux_divergence(u, alpha, tol, g, out);
  return out;
}

std::vector<double> fourth_difference(CSpan f, const Grid1D& g) {
  auto out = alloc(g);
  for (int j = 0; j < g.size(); ++j)
    out[j] = g.at(f, j - 2) - 4.0 * g.at(f, j - 1) + 6.0 * f[j] - 4.0 * g.at(f, j + 1) + g.at(f, j + 2);
  return out;
}

}  // namespace relaxflow
