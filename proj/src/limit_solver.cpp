#include "relaxflow/limit_solver.hpp"

#include <cmath>

namespace relaxflow {

SemiImplicitScheme::SemiImplicitScheme(ImexPair pair) : pair_(std::move(pair)) {
  pair_.validate();
  if (!pair_.weights_match(0.0))
    throw TableauError("semi-implicit scheme requires b = b~ (pair '" + pair_.name + "')");
}

Field semi_implicit_step(const Field& u, double h, const LimitEquation& F,
                         const SemiImplicitScheme& scheme, SemiImplicitStages* stages) {
  const auto& E = scheme.pair().explicit_part;
  const auto& I = scheme.pair().implicit_part;
  const int s = E.stages;
  std::vector<Field> k;
  k.reserve(static_cast<size_t>(s));
  Field y(u.grid(), u.components());
  for (int i = 0; i < s; ++i) {
    Field ustar = u;
    Field ubar = u;
    for (int j = 0; j < i; ++j) {
      if (E(i, j) != 0.0) ustar.axpy(h * E(i, j), k[j]);
      if (I(i, j) != 0.0) ubar.axpy(h * I(i, j), k[j]);
    }
    k.emplace_back(u.grid(), u.components());
    const double aii = I(i, i);
    if (aii != 0.0) {
      F.solve(ubar, ustar, h * aii, y);
      auto& kv = k[i].data();
      const double inv = 1.0 / (h * aii);
      for (size_t n = 0; n < kv.size(); ++n) kv[n] = (y.data()[n] - ubar.data()[n]) * inv;
    } else {
      F.apply(ustar, ubar, k[i]);
    }
    if (stages) stages->u_star.push_back(ustar);
  }
  Field out = u;
  for (int i = 0; i < s; ++i)
    if (I.b[i] != 0.0) out.axpy(h * I.b[i], k[i]);
  if (stages) stages->k = std::move(k);
  return out;
}

Field midpoint_step(const Field& u, double h, const LimitEquation& F) {
  Field f(u.grid(), u.components());
  F.apply(u, u, f);
  Field ustar = u;
  ustar.axpy(0.5 * h, f);
  Field u2(u.grid(), u.components());
  F.solve(u, ustar, 0.5 * h, u2);
  Field out = u2;
  auto& o = out.data();
  const auto& un = u.data();
  for (size_t n = 0; n < o.size(); ++n) o[n] = 2.0 * o[n] - un[n];
  return out;
}

Field solve_limit(const LimitEquation& F, const Field& u0, double t_final, const DtPolicy& policy) {
  if (t_final <= 0.0) return u0;
  const double dx = u0.grid().dx();
  double dt = policy.value;
  if (policy.kind == DtPolicy::Kind::Parabolic) dt = policy.value * dx * dx;
  if (policy.kind == DtPolicy::Kind::Hyperbolic) dt = policy.value * dx;
  const long steps = std::max(1L, static_cast<long>(std::ceil(t_final / dt - 1e-9)));
  const double h = t_final / static_cast<double>(steps);
  Field u = u0;
  for (long n = 0; n < steps; ++n) {
    u = midpoint_step(u, h, F);
    if (!u.all_finite())
      throw NumericalFailure("limit solve produced a non-finite state at step " + std::to_string(n));
  }
  return u;
}

Field solve_limit(const SplitModel& model, const Field& u0, double t_final, const DtPolicy& policy) {
  auto eq = model.limit_equation();
  return solve_limit(*eq, u0, t_final, policy);
}

}  // namespace relaxflow
