#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaxflow/grid.hpp"
#include "relaxflow/relaxation.hpp"

namespace relaxflow {

class ModelDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NewtonFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SplittingKind { Partitioned, Additive, PenalizedBPR, PenalizedBR };
enum class MuRule { Exp, Step, Zero };
// Central: central differences everywhere.  Blended: hyperbolic terms of the
// relaxation models use (1-mu) upwind + mu central on characteristic variables.
enum class Differencing { Central, Blended };

std::string to_string(SplittingKind k);
std::string to_string(MuRule r);
SplittingKind parse_splitting_kind(const std::string& s);
MuRule parse_mu_rule(const std::string& s);

bool is_penalized(SplittingKind k);

double mu_exp(double eps, double dx);
double mu_step(double eps, double dx);
double mu_value(MuRule rule, double eps, double dx);

double eddington_chi(double xi);

struct RelaxParams {
  double eps = 1e-4;
  double m = 1.0;
  double reg_tol = 1e-12;
  // Empty b means b(u) = u; empty q means q = 0.
  std::function<double(double)> b;
  std::function<double(double)> db;
  std::function<double(double)> q;
  NewtonOptions newton;

  double alpha() const { return -1.0 + 1.0 / m; }
  // Throws unless b' > 0 at the sampled points.
  void check_monotone_b(double lo, double hi, int samples = 64) const;
};

struct EulerParams {
  double eps = 1e-3;
  double eta = 2.0;
  double cp = 1.0;
  double kappa = 1.0;
  double sigma = 1.0;
  double reg_tol = 1e-12;

  double p(double rho) const;
  double dp(double rho) const;
};

struct SolveStats {
  int newton_iterations = 0;  // max over cells
  bool newton_converged = true;
};

// Limit parabolic equation in the two-argument form F(u*, u), linear in u.
// Fields hold the non-stiff components only.
class LimitEquation {
 public:
  virtual ~LimitEquation() = default;
  virtual int components() const = 0;
  virtual void apply(const Field& u_star, const Field& u, Field& out) const = 0;
  // Solves Y = rhs + gamma * F(u_star, Y).
  virtual void solve(const Field& rhs, const Field& u_star, double gamma, Field& y) const = 0;
};

class SplitModel {
 public:
  SplitModel(const Grid1D& grid, SplittingKind kind, MuRule rule, double eps);
  virtual ~SplitModel() = default;

  virtual std::string name() const = 0;
  virtual int components() const = 0;
  virtual std::vector<std::string> component_names() const = 0;
  // Non-stiff (conserved) components, in order.
  virtual std::vector<int> conserved() const = 0;

  // Explicit part f(y).
  virtual void explicit_rhs(const Field& y, Field& out) const = 0;
  // Implicit part g(y; y*): frozen coefficients from y_star, linear (diffusion)
  // or per-cell (relaxation) in y.
  virtual void implicit_rhs(const Field& y, const Field& y_star, Field& out) const = 0;
  // Solves Y = rhs + gamma * g(Y; y*).  Non-stiff components first, then the
  // stiff per-cell solves using the fresh non-stiff values.
  virtual void solve_implicit(const Field& rhs, const Field& y_star, double gamma, Field& y,
                              SolveStats& stats) const = 0;
  // Right-hand side of the system without penalization, central differences.
  virtual void unpenalized_rhs(const Field& y, Field& out) const = 0;
  // Copy of state with the stiff components replaced by the local equilibrium.
  virtual Field equilibrium(const Field& state) const = 0;
  virtual std::unique_ptr<LimitEquation> limit_equation() const = 0;
  virtual void check_state(const Field&) const {}
  // max_j of the effective diffusion coefficient, when the model has a
  // state-dependent one (KL: (alpha+1)(|u_x|+tol)^alpha).
  virtual std::optional<double> diffusion_bound(const Field&) const { return std::nullopt; }
  virtual std::optional<double> alpha() const { return std::nullopt; }

  const Grid1D& grid() const { return grid_; }
  SplittingKind kind() const { return kind_; }
  MuRule mu_rule() const { return rule_; }
  double eps() const { return eps_; }
  // Penalization weight; 0 for unpenalized kinds.
  double mu() const { return mu_; }

  Field make_field() const { return Field(grid_, components()); }
  Field conserved_part(const Field& state) const;
  // Inserts the conserved components and closes the stiff ones at equilibrium.
  Field from_conserved(const Field& u) const;

 protected:
  Grid1D grid_;
  SplittingKind kind_;
  MuRule rule_;
  double eps_;
  double mu_;
};

enum class RelaxationLaw { Linear, Power };

// Components (u, v).  Linear: R(v) = v with general b, q.  Power (Kawashima-LeFloch):
// R(v) = |v|^{m-1} v with b = id, q = 0.
std::unique_ptr<SplitModel> linear_relaxation_split(const RelaxParams& params, SplittingKind kind,
                                                    MuRule rule, const Grid1D& grid,
                                                    Differencing diff = Differencing::Central);
std::unique_ptr<SplitModel> kl_split(const RelaxParams& params, SplittingKind kind, MuRule rule,
                                     const Grid1D& grid, Differencing diff = Differencing::Central);

// Components (rho, rho v).
std::unique_ptr<SplitModel> euler_friction_split(const EulerParams& params, MuRule rule,
                                                 const Grid1D& grid);
// Components (rho, rho v, e, f).
std::unique_ptr<SplitModel> euler_m1_split(const EulerParams& params, MuRule rule,
                                           const Grid1D& grid);

// Stiff components at equilibrium for the given state.
Field equilibrium_closure(const SplitModel& model, const Field& state);
// F(u*, u) of the limit equation on conserved-component fields.
Field limit_rhs(const SplitModel& model, const Field& u, const Field& u_star);

}  // namespace relaxflow
