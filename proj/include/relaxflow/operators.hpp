#pragma once

#include <functional>
#include <span>
#include <vector>

#include "relaxflow/grid.hpp"

namespace relaxflow {

using Span = std::span<double>;
using CSpan = std::span<const double>;

// First derivatives. speed_sign = +1 differences backwards, -1 forwards.
void d_central(CSpan f, const Grid1D& g, Span out, Parity parity = Parity::Even);
void d_upwind(CSpan f, int speed_sign, const Grid1D& g, Span out, Parity parity = Parity::Even);
void d_blend(CSpan f, double mu, int speed_sign, const Grid1D& g, Span out,
             Parity parity = Parity::Even);
void d2_central(CSpan f, const Grid1D& g, Span out, Parity parity = Parity::Even);

std::vector<double> d_central(CSpan f, const Grid1D& g, Parity parity = Parity::Even);
std::vector<double> d_upwind(CSpan f, int speed_sign, const Grid1D& g, Parity parity = Parity::Even);
std::vector<double> d_blend(CSpan f, double mu, int speed_sign, const Grid1D& g,
                            Parity parity = Parity::Even);
std::vector<double> d2_central(CSpan f, const Grid1D& g, Parity parity = Parity::Even);

// Face weights have n+1 entries; w[f] sits on the face between cells f-1 and f.
// Under ZeroGradient the two boundary faces carry no flux and get weight 0.

// w = (|u_f - u_{f-1}|/dx + tol)^alpha
void power_face_weights(CSpan u, double alpha, double tol, const Grid1D& g, Span w);
std::vector<double> power_face_weights(CSpan u, double alpha, double tol, const Grid1D& g);

// Divided differences (phi(u_f) - phi(u_{f-1})) / (u_f - u_{f-1}); falls back to
// dphi (or a symmetric difference of half-width reg_tol) when |u_f - u_{f-1}| < reg_tol.
void secant_face_weights(CSpan u, const std::function<double(double)>& phi,
                         const std::function<double(double)>& dphi, double reg_tol,
                         const Grid1D& g, Span w);

// (w_{j+1/2}(u_{j+1}-u_j) - w_{j-1/2}(u_j-u_{j-1})) / dx^2
void flux_divergence(CSpan u, CSpan w, const Grid1D& g, Span out);
// Adds scale * flux_divergence(u, w) to out.
void add_flux_divergence(CSpan u, CSpan w, double scale, const Grid1D& g, Span out);

void nonlinear_flux_divergence(CSpan u, double alpha, double tol, const Grid1D& g, Span out);
std::vector<double> nonlinear_flux_divergence(CSpan u, double alpha, double tol, const Grid1D& g);

// Fourth undivided difference, used as a high-frequency roughness probe.
std::vector<double> fourth_difference(CSpan f, const Grid1D& g);

}  // namespace relaxflow
