#include "relaxflow/imex.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace relaxflow {

std::string to_string(StageForm f) { return f == StageForm::Additive ? "additive" : "semi-implicit"; }

StageForm parse_stage_form(const std::string& s) {
  if (s == "additive") return StageForm::Additive;
  if (s == "semi-implicit") return StageForm::SemiImplicit;
  throw std::invalid_argument("unknown stage form '" + s + "'");
}

std::string to_string(const DtPolicy& p) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, p.value);
  std::string v(buf, res.ptr);
  switch (p.kind) {
    case DtPolicy::Kind::Parabolic: return "parabolic:" + v;
    case DtPolicy::Kind::Hyperbolic: return "hyperbolic:" + v;
    case DtPolicy::Kind::Fixed: return "fixed:" + v;
  }
  return v;
}

DtPolicy parse_dt_policy(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("time step policy '" + s + "' is not kind:value");
  std::string kind = s.substr(0, colon), val = s.substr(colon + 1);
  double v = 0.0;
  auto res = std::from_chars(val.data(), val.data() + val.size(), v);
  if (res.ec != std::errc() || res.ptr != val.data() + val.size() || !(v > 0.0))
    throw std::invalid_argument("time step policy '" + s + "' needs a positive number");
  if (kind == "parabolic") return DtPolicy::parabolic(v);
  if (kind == "hyperbolic") return DtPolicy::hyperbolic(v);
  if (kind == "fixed") return DtPolicy::fixed(v);
  throw std::invalid_argument("unknown time step policy '" + kind + "'");
}

DtChoice stable_dt(const SplitModel& model, const Field& state, const DtPolicy& policy) {
  const double dx = model.grid().dx();
  DtChoice out;
  switch (policy.kind) {
    case DtPolicy::Kind::Fixed: out.dt = policy.value; return out;
    case DtPolicy::Kind::Hyperbolic: out.dt = policy.value * dx; return out;
    case DtPolicy::Kind::Parabolic: break;
  }
  out.dt = policy.value * dx * dx;
  auto alpha = model.alpha();
  if (!alpha || *alpha == 0.0) return out;
  auto bound = model.diffusion_bound(state);
  if (!bound) return out;
  out.cap = dx * dx / *bound;
  // For alpha < 0 the cap collapses near extrema; it is reported, not applied.
  if (*alpha > 0.0) out.dt = std::min(out.dt, out.cap);
  if (*alpha < 0.0 && !is_penalized(model.kind()) && out.cap < 1e-3 * policy.value * dx * dx)
    out.feasible = false;
  return out;
}

namespace {

bool last_stage_output(const ImexPair& pair) { return is_globally_stiffly_accurate(pair, 0.0); }

bool implicit_weights_are_last_row(const ButcherTableau& t) {
  for (int j = 0; j < t.stages; ++j)
    if (t.b[j] != t(t.stages - 1, j)) return false;
  return true;
}

Field additive_step(const Field& y0, double h, const SplitModel& model, const ImexPair& pair,
                    SolveStats& stats) {
  const int s = pair.stages();
  const auto& E = pair.explicit_part;
  const auto& I = pair.implicit_part;
  std::vector<Field> fe, gi;
  std::vector<bool> has_f(static_cast<size_t>(s), false), has_g(static_cast<size_t>(s), false);
  fe.reserve(static_cast<size_t>(s));
  gi.reserve(static_cast<size_t>(s));
  for (int i = 0; i < s; ++i) {
    fe.emplace_back(y0.grid(), y0.components());
    gi.emplace_back(y0.grid(), y0.components());
  }
  auto needed = [&](const ButcherTableau& t, int j) {
    if (t.b[j] != 0.0) return true;
    for (int k = j + 1; k < s; ++k)
      if (t(k, j) != 0.0) return true;
    return false;
  };

  Field ybar = y0;
  Field yi = y0;
  Field ystar = y0;
  for (int i = 0; i < s; ++i) {
    ybar = y0;
    for (int j = 0; j < i; ++j) {
      if (has_f[j] && E(i, j) != 0.0) ybar.axpy(h * E(i, j), fe[j]);
      if (has_g[j] && I(i, j) != 0.0) ybar.axpy(h * I(i, j), gi[j]);
    }
    const double aii = I(i, i);
    if (aii != 0.0) {
      model.solve_implicit(ybar, ystar, h * aii, yi, stats);
      auto& g = gi[i].data();
      const auto& yv = yi.data();
      const auto& bv = ybar.data();
      const double inv = 1.0 / (h * aii);
      for (size_t k = 0; k < g.size(); ++k) g[k] = (yv[k] - bv[k]) * inv;
      has_g[i] = true;
    } else {
      yi = ybar;
      if (needed(I, i)) {
        model.implicit_rhs(yi, ystar, gi[i]);
        has_g[i] = true;
      }
    }
    if (needed(E, i)) {
      model.explicit_rhs(yi, fe[i]);
      has_f[i] = true;
    }
    ystar = yi;
  }
  if (last_stage_output(pair)) return yi;

  Field y1 = y0;
  for (int i = 0; i < s; ++i) {
    if (has_f[i] && E.b[i] != 0.0) y1.axpy(h * E.b[i], fe[i]);
    if (has_g[i] && I.b[i] != 0.0) y1.axpy(h * I.b[i], gi[i]);
  }
  return y1;
}

Field semi_implicit_step(const Field& y0, double h, const SplitModel& model, const ImexPair& pair,
                         SolveStats& stats) {
  const int s = pair.stages();
  const auto& E = pair.explicit_part;
  const auto& I = pair.implicit_part;
  std::vector<Field> k;
  k.reserve(static_cast<size_t>(s));
  Field f(y0.grid(), y0.components());
  Field yi = y0;
  for (int i = 0; i < s; ++i) {
    Field ystar = y0;
    Field ybar = y0;
    for (int j = 0; j < i; ++j) {
      if (E(i, j) != 0.0) ystar.axpy(h * E(i, j), k[j]);
      if (I(i, j) != 0.0) ybar.axpy(h * I(i, j), k[j]);
    }
    model.explicit_rhs(ystar, f);
    const double aii = I(i, i);
    k.emplace_back(y0.grid(), y0.components());
    if (aii != 0.0) {
      Field rhs = ybar;
      rhs.axpy(h * aii, f);
      model.solve_implicit(rhs, ystar, h * aii, yi, stats);
      auto& kv = k[i].data();
      const auto& yv = yi.data();
      const auto& bv = ybar.data();
      const double inv = 1.0 / (h * aii);
      for (size_t n = 0; n < kv.size(); ++n) kv[n] = (yv[n] - bv[n]) * inv;
    } else {
      model.implicit_rhs(ybar, ystar, k[i]);
      k[i].axpy(1.0, f);
      yi = ybar;
    }
  }
  if (implicit_weights_are_last_row(I)) return yi;
  Field y1 = y0;
  for (int i = 0; i < s; ++i)
    if (I.b[i] != 0.0) y1.axpy(h * I.b[i], k[i]);
  return y1;
}

}  // namespace

Field imex_step(const Field& y0, double h, const SplitModel& model, const ImexPair& pair,
                StageForm form, StepInfo* info) {
  if (!(h > 0.0)) throw std::invalid_argument("time step must be positive");
  if (y0.components() != model.components())
    throw std::invalid_argument("state has the wrong number of components");
  SolveStats stats;
  Field out = form == StageForm::Additive ? additive_step(y0, h, model, pair, stats)
                                          : semi_implicit_step(y0, h, model, pair, stats);
  if (info) info->solve = stats;
  return out;
}

Trajectory integrate(const Field& state0, const SplitModel& model, const SolverConfig& config) {
  if (config.t_final < 0.0) throw std::invalid_argument("t_final must be nonnegative");
  config.pair.validate();
  std::vector<double> outs;
  for (double t : config.output_times)
    if (t > 0.0 && t < config.t_final) outs.push_back(t);
  if (config.t_final > 0.0) outs.push_back(config.t_final);
  std::sort(outs.begin(), outs.end());
  outs.erase(std::unique(outs.begin(), outs.end()), outs.end());

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(state0);
  if (!state0.all_finite()) throw NumericalFailure("non-finite initial state");

  Field y = state0;
  double t = 0.0;
  const double slack = 1e-12 * std::max(1.0, config.t_final);
  for (double target : outs) {
    while (t < target) {
      auto choice = stable_dt(model, y, config.dt);
      if (!choice.feasible) traj.dt_feasible = false;
      double dt = choice.dt;
      if (!(dt > 0.0) || !std::isfinite(dt)) {
        std::ostringstream os;
        os << "time step collapsed to " << dt << " at step " << traj.steps << ", t = " << t;
        throw NumericalFailure(os.str());
      }
      bool land = t + dt >= target - slack;
      if (land) dt = target - t;
      StepInfo info;
      try {
        y = imex_step(y, dt, model, config.pair, config.form, &info);
      } catch (const std::exception& e) {
        std::ostringstream os;
        os << "step " << traj.steps << " at t = " << t << " failed: " << e.what();
        throw NumericalFailure(os.str());
      }
      ++traj.steps;
      traj.max_newton_iterations = std::max(traj.max_newton_iterations, info.solve.newton_iterations);
      if (!y.all_finite()) {
        std::ostringstream os;
        os << "non-finite state after step " << traj.steps << " (t = " << t + dt << ")";
        throw NumericalFailure(os.str());
      }
      t = land ? target : t + dt;
    }
    traj.times.push_back(t);
    traj.states.push_back(y);
  }
  return traj;
}

}  // namespace relaxflow
