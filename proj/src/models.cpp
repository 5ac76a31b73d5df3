#include "relaxflow/models.hpp"

#include <cmath>
#include <sstream>

#include "relaxflow/operators.hpp"
#include "relaxflow/tridiagonal.hpp"

namespace relaxflow {

std::string to_string(SplittingKind k) {
  switch (k) {
    case SplittingKind::Partitioned: return "partitioned";
    case SplittingKind::Additive: return "additive";
    case SplittingKind::PenalizedBPR: return "penalized-bpr";
    case SplittingKind::PenalizedBR: return "penalized-br";
  }
  return "?";
}

std::string to_string(MuRule r) {
  switch (r) {
    case MuRule::Exp: return "exp";
    case MuRule::Step: return "step";
    case MuRule::Zero: return "zero";
  }
  return "?";
}

SplittingKind parse_splitting_kind(const std::string& s) {
  if (s == "partitioned") return SplittingKind::Partitioned;
  if (s == "additive") return SplittingKind::Additive;
  if (s == "penalized-bpr") return SplittingKind::PenalizedBPR;
  if (s == "penalized-br") return SplittingKind::PenalizedBR;
  throw std::invalid_argument("unknown splitting kind '" + s + "'");
}

MuRule parse_mu_rule(const std::string& s) {
  if (s == "exp") return MuRule::Exp;
  if (s == "step") return MuRule::Step;
  if (s == "zero") return MuRule::Zero;
  throw std::invalid_argument("unknown mu rule '" + s + "'");
}

bool is_penalized(SplittingKind k) {
  return k == SplittingKind::PenalizedBPR || k == SplittingKind::PenalizedBR;
}

double mu_exp(double eps, double dx) { return std::exp(-eps * eps / dx); }
double mu_step(double eps, double dx) { return eps < dx ? 1.0 : 0.0; }

double mu_value(MuRule rule, double eps, double dx) {
  switch (rule) {
    case MuRule::Exp: return mu_exp(eps, dx);
    case MuRule::Step: return mu_step(eps, dx);
    case MuRule::Zero: return 0.0;
  }
  return 0.0;
}

double eddington_chi(double xi) {
  if (!(std::abs(xi) <= 1.0)) {
    std::ostringstream os;
    os << "closure-domain error: |eps f / e| = " << std::abs(xi) << " > 1";
    throw ModelDomainError(os.str());
  }
  return (3.0 + 4.0 * xi * xi) / (5.0 + 2.0 * std::sqrt(4.0 - 3.0 * xi * xi));
}

void RelaxParams::check_monotone_b(double lo, double hi, int samples) const {
  if (!b) return;
  for (int i = 0; i <= samples; ++i) {
    double u = lo + (hi - lo) * i / samples;
    double d = db ? db(u) : (b(u + 1e-7) - b(u - 1e-7)) / 2e-7;
    if (!(d > 0.0)) throw std::invalid_argument("b'(u) must be positive on the field range");
  }
}

double EulerParams::p(double rho) const { return cp * std::pow(rho, eta); }
double EulerParams::dp(double rho) const { return cp * eta * std::pow(rho, eta - 1.0); }

SplitModel::SplitModel(const Grid1D& grid, SplittingKind kind, MuRule rule, double eps)
    : grid_(grid), kind_(kind), rule_(rule), eps_(eps),
      mu_(is_penalized(kind) ? mu_value(rule, eps, grid.dx()) : 0.0) {
  if (eps < 0.0) throw std::invalid_argument("eps must be nonnegative");
}

Field SplitModel::conserved_part(const Field& state) const {
  auto idx = conserved();
  Field u(grid_, static_cast<int>(idx.size()));
  for (size_t c = 0; c < idx.size(); ++c) {
    auto src = state[idx[c]];
    std::copy(src.begin(), src.end(), u[static_cast<int>(c)].begin());
  }
  return u;
}

Field SplitModel::from_conserved(const Field& u) const {
  Field state = make_field();
  auto idx = conserved();
  for (size_t c = 0; c < idx.size(); ++c) {
    auto src = u[static_cast<int>(c)];
    std::copy(src.begin(), src.end(), state[idx[c]].begin());
  }
  return equilibrium(state);
}

namespace {

using Vec = std::vector<double>;

Vec face_zeros(const Grid1D& g) { return Vec(static_cast<size_t>(g.size()) + 1, 0.0); }

Vec unit_face_weights(const Grid1D& g) {
  Vec w(static_cast<size_t>(g.size()) + 1, 1.0);
  if (g.boundary() == Boundary::ZeroGradient) w.front() = w.back() = 0.0;
  return w;
}

void copy_into(CSpan src, Span dst) { std::copy(src.begin(), src.end(), dst.begin()); }

// Solves (I - sigma * L(w)) x = rhs.
Vec diffusion_solve(CSpan w, double sigma, CSpan rhs, const Grid1D& g) {
  if (sigma == 0.0) return Vec(rhs.begin(), rhs.end());
  return assemble_diffusion_system(w, sigma, g).solve(rhs);
}

// ---------------------------------------------------------------------------
// Linear relaxation and Kawashima-LeFloch models, components (u, v).

class RelaxationLimit final : public LimitEquation {
 public:
  RelaxationLimit(RelaxParams p, RelaxationLaw law, const Grid1D& g)
      : p_(std::move(p)), law_(law), g_(g) {}

  int components() const override { return 1; }

  void apply(const Field& u_star, const Field& u, Field& out) const override {
    auto w = weights(u_star[0]);
    flux_divergence(u[0], w, g_, out[0]);
    if (p_.q) {
      auto a = advection(u_star[0]);
      for (int j = 0; j < g_.size(); ++j) out[0][j] += a[j];
    }
  }

  void solve(const Field& rhs, const Field& u_star, double gamma, Field& y) const override {
    Vec r(rhs[0].begin(), rhs[0].end());
    if (p_.q) {
      auto a = advection(u_star[0]);
      for (int j = 0; j < g_.size(); ++j) r[j] += gamma * a[j];
    }
    auto x = diffusion_solve(weights(u_star[0]), gamma, r, g_);
    copy_into(x, y[0]);
  }

 private:
  Vec weights(CSpan u) const {
    Vec w = face_zeros(g_);
    if (law_ == RelaxationLaw::Power) {
      power_face_weights(u, p_.alpha(), p_.reg_tol, g_, w);
    } else if (p_.b) {
      secant_face_weights(u, p_.b, p_.db, p_.reg_tol, g_, w);
    } else {
      w = unit_face_weights(g_);
    }
    return w;
  }

  // -(q(u))_x with first-order upwind face fluxes.
  Vec advection(CSpan u) const {
    const int n = g_.size();
    Vec flux(static_cast<size_t>(n) + 1);
    for (int f = 0; f <= n; ++f) {
      double ul = g_.at(u, f - 1), ur = g_.at(u, f);
      double ql = p_.q(ul), qr = p_.q(ur);
      double speed = ur != ul ? (qr - ql) / (ur - ul) : 0.0;
      flux[f] = speed >= 0.0 ? ql : qr;
    }
    if (g_.boundary() == Boundary::ZeroGradient) flux.front() = flux.back() = 0.0;
    Vec out(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) out[j] = -(flux[j + 1] - flux[j]) / g_.dx();
    return out;
  }

  RelaxParams p_;
  RelaxationLaw law_;
  Grid1D g_;
};

class RelaxationModel final : public SplitModel {
 public:
  RelaxationModel(RelaxParams p, RelaxationLaw law, SplittingKind kind, MuRule rule,
                  const Grid1D& g, Differencing diff)
      : SplitModel(g, kind, rule, p.eps), p_(std::move(p)), law_(law), diff_(diff),
        blend_(mu_value(rule, p_.eps, g.dx())) {
    if (!(p_.m > 0.0)) throw std::invalid_argument("relaxation exponent m must be positive");
    if (law == RelaxationLaw::Power && (p_.b || p_.q))
      throw std::invalid_argument("the power-law model assumes b(u) = u and q = 0");
    if (law == RelaxationLaw::Linear && p_.m != 1.0)
      throw std::invalid_argument("the linear model has m = 1");
    if (p_.alpha() < 0.0 && !(p_.reg_tol > 0.0))
      throw std::invalid_argument("reg_tol must be positive when alpha < 0");
    if (diff == Differencing::Blended && (p_.b || g.boundary() != Boundary::Periodic))
      throw std::invalid_argument("blended differencing needs b(u) = u and periodic boundaries");
    if (p_.eps <= 0.0) throw std::invalid_argument("relaxation models need eps > 0");
  }

  std::string name() const override { return law_ == RelaxationLaw::Power ? "kl" : "linear"; }
  int components() const override { return 2; }
  std::vector<std::string> component_names() const override { return {"u", "v"}; }
  std::vector<int> conserved() const override { return {0}; }
  std::optional<double> alpha() const override {
    return law_ == RelaxationLaw::Power ? std::optional(p_.alpha()) : std::optional(0.0);
  }

  void explicit_rhs(const Field& y, Field& out) const override {
    auto u = y[0];
    hyperbolic_u(y, out[0]);
    if (mu_ != 0.0) {
      auto w = weights(u);
      add_flux_divergence(u, w, -mu_, grid_, out[0]);
    }
    if (explicit_v()) {
      hyperbolic_v(y, out[1]);
    } else {
      for (auto& x : out[1]) x = 0.0;
    }
  }

  void implicit_rhs(const Field& y, const Field& y_star, Field& out) const override {
    if (mu_ != 0.0) {
      auto w = weights(y_star[0]);
      flux_divergence(y[0], w, grid_, out[0]);
      for (auto& x : out[0]) x *= mu_;
    } else {
      for (auto& x : out[0]) x = 0.0;
    }
    auto s = stiff_source(y[0]);
    const double inv = 1.0 / (p_.eps * p_.eps);
    auto v = y[1];
    for (int j = 0; j < grid_.size(); ++j) out[1][j] = (s[j] - relax(v[j])) * inv;
  }

  void solve_implicit(const Field& rhs, const Field& y_star, double gamma, Field& y,
                      SolveStats& stats) const override {
    if (mu_ != 0.0) {
      auto x = diffusion_solve(weights(y_star[0]), gamma * mu_, rhs[0], grid_);
      copy_into(x, y[0]);
    } else {
      copy_into(rhs[0], y[0]);
    }
    auto s = stiff_source(y[0]);
    const double e2 = p_.eps * p_.eps;
    auto rv = rhs[1];
    auto v = y[1];
    for (int j = 0; j < grid_.size(); ++j) {
      double a = e2 * rv[j] + gamma * s[j];
      if (law_ == RelaxationLaw::Linear || p_.m == 1.0) {
        v[j] = a / (e2 + gamma);
        continue;
      }
      auto r = solve_relaxation_newton(p_.eps, gamma, a / e2, p_.m, p_.newton);
      stats.newton_iterations = std::max(stats.newton_iterations, r.iterations);
      if (!r.converged) {
        stats.newton_converged = false;
        std::ostringstream os;
        os << "newton-failure at cell " << j << " after " << r.iterations
           << " iterations, scaled residual " << r.residual << " (c1 = " << gamma
           << ", c2 = " << a / e2 << ")";
        throw NewtonFailure(os.str());
      }
      v[j] = r.value;
    }
  }

  void unpenalized_rhs(const Field& y, Field& out) const override {
    d_central(y[1], grid_, out[0], Parity::Odd);
    for (auto& x : out[0]) x = -x;
    auto bx = d_central(bvals(y[0]), grid_);
    const double inv = 1.0 / (p_.eps * p_.eps);
    for (int j = 0; j < grid_.size(); ++j)
      out[1][j] = (qval(y[0][j]) - bx[j] - relax(y[1][j])) * inv;
  }

  Field equilibrium(const Field& state) const override {
    Field out = state;
    auto bx = d_central(bvals(state[0]), grid_);
    for (int j = 0; j < grid_.size(); ++j) {
      if (law_ == RelaxationLaw::Linear) {
        out[1][j] = qval(state[0][j]) - bx[j];
      } else {
        double ux = bx[j];
        out[1][j] = ux == 0.0 ? 0.0 : -std::copysign(std::pow(std::abs(ux), 1.0 / p_.m), ux);
      }
    }
    return out;
  }

  std::unique_ptr<LimitEquation> limit_equation() const override {
    return std::make_unique<RelaxationLimit>(p_, law_, grid_);
  }

  std::optional<double> diffusion_bound(const Field& state) const override {
    if (law_ == RelaxationLaw::Linear) {
      if (!p_.b) return 1.0;
      auto w = face_zeros(grid_);
      secant_face_weights(state[0], p_.b, p_.db, p_.reg_tol, grid_, w);
      double m = 0.0;
      for (double x : w) m = std::max(m, x);
      return m;
    }
    const double a = p_.alpha();
    auto ux = d_central(state[0], grid_);
    double worst = 0.0;
    for (double d : ux) worst = std::max(worst, (a + 1.0) * std::pow(std::abs(d) + p_.reg_tol, a));
    return worst;
  }

 private:
  bool explicit_v() const {
    return kind_ == SplittingKind::Additive || kind_ == SplittingKind::PenalizedBR;
  }
  bool implicit_flux() const { return !explicit_v(); }

  double bval(double u) const { return p_.b ? p_.b(u) : u; }
  double qval(double u) const { return p_.q ? p_.q(u) : 0.0; }
  double relax(double v) const {
    if (law_ == RelaxationLaw::Linear || p_.m == 1.0) return v;
    return std::copysign(std::pow(std::abs(v), p_.m), v);
  }

  Vec bvals(CSpan u) const {
    Vec b(u.begin(), u.end());
    if (p_.b)
      for (auto& x : b) x = p_.b(x);
    return b;
  }

  Vec weights(CSpan u) const {
    Vec w = face_zeros(grid_);
    if (law_ == RelaxationLaw::Power) {
      power_face_weights(u, p_.alpha(), p_.reg_tol, grid_, w);
    } else if (p_.b) {
      secant_face_weights(u, p_.b, p_.db, p_.reg_tol, grid_, w);
    } else {
      w = unit_face_weights(grid_);
    }
    return w;
  }

  // q(u) - b(u)_x when the flux term is implicit, else q(u).
  Vec stiff_source(CSpan u) const {
    Vec s(u.size());
    for (size_t j = 0; j < u.size(); ++j) s[j] = qval(u[j]);
    if (implicit_flux()) {
      auto bx = d_central(bvals(u), grid_);
      for (size_t j = 0; j < u.size(); ++j) s[j] -= bx[j];
    }
    return s;
  }

  // Characteristic variables r+- = v +- u/eps travel with speed +-1/eps.
  void characteristic(const Field& y, Vec& dp, Vec& dm) const {
    const int n = grid_.size();
    Vec rp(static_cast<size_t>(n)), rm(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      rp[j] = y[1][j] + y[0][j] / p_.eps;
      rm[j] = y[1][j] - y[0][j] / p_.eps;
    }
    dp = d_blend(rp, blend_, +1, grid_);
    dm = d_blend(rm, blend_, -1, grid_);
  }

  void hyperbolic_u(const Field& y, Span out) const {
    if (diff_ == Differencing::Blended) {
      Vec dp, dm;
      characteristic(y, dp, dm);
      for (int j = 0; j < grid_.size(); ++j) out[j] = -0.5 * (dp[j] + dm[j]);
      return;
    }
    d_central(y[1], grid_, out, Parity::Odd);
    for (auto& x : out) x = -x;
  }

  void hyperbolic_v(const Field& y, Span out) const {
    if (diff_ == Differencing::Blended) {
      Vec dp, dm;
      characteristic(y, dp, dm);
      for (int j = 0; j < grid_.size(); ++j) out[j] = -0.5 * (dp[j] - dm[j]) / p_.eps;
      return;
    }
    d_central(bvals(y[0]), grid_, out);
    const double inv = 1.0 / (p_.eps * p_.eps);
    for (auto& x : out) x = -x * inv;
  }

  RelaxParams p_;
  RelaxationLaw law_;
  Differencing diff_;
  double blend_;
};

// ---------------------------------------------------------------------------
// Euler with friction, components (rho, m = rho v).

class EulerLimit final : public LimitEquation {
 public:
  EulerLimit(EulerParams p, const Grid1D& g) : p_(p), g_(g) {}
  int components() const override { return 1; }

  void apply(const Field& u_star, const Field& u, Field& out) const override {
    auto w = weights(u_star[0]);
    flux_divergence(u[0], w, g_, out[0]);
  }

  void solve(const Field& rhs, const Field& u_star, double gamma, Field& y) const override {
    copy_into(diffusion_solve(weights(u_star[0]), gamma, rhs[0], g_), y[0]);
  }

 private:
  Vec weights(CSpan rho) const {
    Vec w = face_zeros(g_);
    secant_face_weights(rho, [this](double r) { return p_.p(r); },
                        [this](double r) { return p_.dp(r); }, p_.reg_tol, g_, w);
    for (auto& x : w) x /= p_.kappa;
    return w;
  }

  EulerParams p_;
  Grid1D g_;
};

Vec pressure_weights(CSpan rho, const EulerParams& p, const Grid1D& g) {
  Vec w = face_zeros(g);
  secant_face_weights(rho, [&p](double r) { return p.p(r); }, [&p](double r) { return p.dp(r); },
                      p.reg_tol, g, w);
  return w;
}

void check_positive(CSpan x, const char* what) {
  for (size_t j = 0; j < x.size(); ++j)
    if (!(x[j] > 0.0)) {
      std::ostringstream os;
      os << "nonpositive " << what << " " << x[j] << " at cell " << j;
      throw ModelDomainError(os.str());
    }
}

class EulerFrictionModel final : public SplitModel {
 public:
  EulerFrictionModel(EulerParams p, MuRule rule, const Grid1D& g)
      : SplitModel(g, SplittingKind::PenalizedBR, rule, p.eps), p_(p) {
    if (!(p_.eps > 0.0)) throw std::invalid_argument("euler model needs eps > 0");
  }

  std::string name() const override { return "euler"; }
  int components() const override { return 2; }
  std::vector<std::string> component_names() const override { return {"rho", "rho_v"}; }
  std::vector<int> conserved() const override { return {0}; }

  void check_state(const Field& y) const override { check_positive(y[0], "density"); }

  void explicit_rhs(const Field& y, Field& out) const override {
    check_state(y);
    d_central(y[1], grid_, out[0], Parity::Odd);
    for (auto& x : out[0]) x = -x;
    if (mu_ != 0.0) add_flux_divergence(y[0], pressure_weights(y[0], p_, grid_), -mu_, grid_, out[0]);
    momentum_flux(y, out[1]);
  }

  void implicit_rhs(const Field& y, const Field& y_star, Field& out) const override {
    for (auto& x : out[0]) x = 0.0;
    if (mu_ != 0.0) add_flux_divergence(y[0], pressure_weights(y_star[0], p_, grid_), mu_, grid_, out[0]);
    const double inv = 1.0 / (p_.eps * p_.eps);
    for (int j = 0; j < grid_.size(); ++j) out[1][j] = -p_.kappa * y[1][j] * inv;
  }

  void solve_implicit(const Field& rhs, const Field& y_star, double gamma, Field& y,
                      SolveStats&) const override {
    check_positive(y_star[0], "density");
    copy_into(diffusion_solve(pressure_weights(y_star[0], p_, grid_), gamma * mu_, rhs[0], grid_), y[0]);
    const double e2 = p_.eps * p_.eps;
    for (int j = 0; j < grid_.size(); ++j) y[1][j] = e2 * rhs[1][j] / (e2 + gamma * p_.kappa);
  }

  void unpenalized_rhs(const Field& y, Field& out) const override {
    d_central(y[1], grid_, out[0], Parity::Odd);
    for (auto& x : out[0]) x = -x;
    momentum_flux(y, out[1]);
    const double inv = 1.0 / (p_.eps * p_.eps);
    for (int j = 0; j < grid_.size(); ++j) out[1][j] -= p_.kappa * y[1][j] * inv;
  }

  Field equilibrium(const Field& state) const override {
    Field out = state;
    Vec pr(state[0].begin(), state[0].end());
    for (auto& x : pr) x = p_.p(x);
    auto px = d_central(pr, grid_);
    for (int j = 0; j < grid_.size(); ++j) out[1][j] = -px[j] / p_.kappa;
    return out;
  }

  std::unique_ptr<LimitEquation> limit_equation() const override {
    return std::make_unique<EulerLimit>(p_, grid_);
  }

 private:
  void momentum_flux(const Field& y, Span out) const {
    const int n = grid_.size();
    const double inv = 1.0 / (p_.eps * p_.eps);
    Vec flux(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) flux[j] = y[1][j] * y[1][j] / y[0][j] + p_.p(y[0][j]) * inv;
    d_central(flux, grid_, out);
    for (auto& x : out) x = -x;
  }

  EulerParams p_;
};

// ---------------------------------------------------------------------------
// Euler coupled with the M1 radiation model, components (rho, m, e, f).

class M1Limit final : public LimitEquation {
 public:
  M1Limit(EulerParams p, const Grid1D& g) : p_(p), g_(g) {}
  int components() const override { return 2; }

  // (rho, e) -> ((p'(rho*) rho_x)_x / kappa + e_xx / (3 kappa), e_xx / (3 sigma))
  void apply(const Field& u_star, const Field& u, Field& out) const override {
    auto exx = d2_central(u[1], g_);
    flux_divergence(u[0], pressure_weights(u_star[0], p_, g_), g_, out[0]);
    for (int j = 0; j < g_.size(); ++j) {
      out[0][j] = (out[0][j] + exx[j] / 3.0) / p_.kappa;
      out[1][j] = exx[j] / (3.0 * p_.sigma);
    }
  }

  // The e-equation is solved first and feeds the rho-equation.
  void solve(const Field& rhs, const Field& u_star, double gamma, Field& y) const override {
    auto e = diffusion_solve(unit_face_weights(g_), gamma / (3.0 * p_.sigma), rhs[1], g_);
    auto exx = d2_central(e, g_);
    Vec r(rhs[0].begin(), rhs[0].end());
    for (int j = 0; j < g_.size(); ++j) r[j] += gamma * exx[j] / (3.0 * p_.kappa);
    copy_into(diffusion_solve(pressure_weights(u_star[0], p_, g_), gamma / p_.kappa, r, g_), y[0]);
    copy_into(e, y[1]);
  }

 private:
  EulerParams p_;
  Grid1D g_;
};

class EulerM1Model final : public SplitModel {
 public:
  EulerM1Model(EulerParams p, MuRule rule, const Grid1D& g)
      : SplitModel(g, SplittingKind::PenalizedBR, rule, p.eps), p_(p) {
    if (!(p_.eps > 0.0)) throw std::invalid_argument("M1 model needs eps > 0");
  }

  std::string name() const override { return "m1"; }
  int components() const override { return 4; }
  std::vector<std::string> component_names() const override { return {"rho", "rho_v", "e", "f"}; }
  std::vector<int> conserved() const override { return {0, 2}; }

  void check_state(const Field& y) const override {
    check_positive(y[0], "density");
    check_positive(y[2], "radiative energy");
  }

  void explicit_rhs(const Field& y, Field& out) const override {
    check_state(y);
    const int n = grid_.size();
    const double inv = 1.0 / (p_.eps * p_.eps);
    d_central(y[1], grid_, out[0], Parity::Odd);
    for (auto& x : out[0]) x = -x;
    d_central(y[3], grid_, out[2], Parity::Odd);
    for (auto& x : out[2]) x = -x;
    if (mu_ != 0.0) {
      auto exx = d2_central(y[2], grid_);
      add_flux_divergence(y[0], pressure_weights(y[0], p_, grid_), -mu_ / p_.kappa, grid_, out[0]);
      for (int j = 0; j < n; ++j) {
        out[0][j] -= mu_ * exx[j] / (3.0 * p_.kappa);
        out[2][j] -= mu_ * exx[j] / (3.0 * p_.sigma);
      }
    }
    Vec mflux(static_cast<size_t>(n)), fflux(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      mflux[j] = y[1][j] * y[1][j] / y[0][j] + p_.p(y[0][j]) * inv;
      fflux[j] = eddington_chi(p_.eps * y[3][j] / y[2][j]) * y[2][j] * inv;
    }
    d_central(mflux, grid_, out[1]);
    d_central(fflux, grid_, out[3]);
    for (auto& x : out[1]) x = -x;
    for (auto& x : out[3]) x = -x;
  }

  void implicit_rhs(const Field& y, const Field& y_star, Field& out) const override {
    const int n = grid_.size();
    const double inv = 1.0 / (p_.eps * p_.eps);
    for (auto& x : out[0]) x = 0.0;
    if (mu_ != 0.0) {
      auto exx = d2_central(y[2], grid_);
      add_flux_divergence(y[0], pressure_weights(y_star[0], p_, grid_), mu_ / p_.kappa, grid_, out[0]);
      for (int j = 0; j < n; ++j) {
        out[0][j] += mu_ * exx[j] / (3.0 * p_.kappa);
        out[2][j] = mu_ * exx[j] / (3.0 * p_.sigma);
      }
    } else {
      for (auto& x : out[2]) x = 0.0;
    }
    for (int j = 0; j < n; ++j) {
      out[1][j] = (-p_.kappa * y[1][j] + p_.sigma * y[3][j]) * inv;
      out[3][j] = -p_.sigma * y[3][j] * inv;
    }
  }

  void solve_implicit(const Field& rhs, const Field& y_star, double gamma, Field& y,
                      SolveStats&) const override {
    check_positive(y_star[0], "density");
    const int n = grid_.size();
    auto e = diffusion_solve(unit_face_weights(grid_), gamma * mu_ / (3.0 * p_.sigma), rhs[2], grid_);
    auto exx = d2_central(e, grid_);
    Vec r(rhs[0].begin(), rhs[0].end());
    for (int j = 0; j < n; ++j) r[j] += gamma * mu_ * exx[j] / (3.0 * p_.kappa);
    copy_into(diffusion_solve(pressure_weights(y_star[0], p_, grid_), gamma * mu_ / p_.kappa, r, grid_), y[0]);
    copy_into(e, y[2]);
    const double e2 = p_.eps * p_.eps;
    for (int j = 0; j < n; ++j) {
      double f = e2 * rhs[3][j] / (e2 + gamma * p_.sigma);
      y[3][j] = f;
      y[1][j] = (e2 * rhs[1][j] + gamma * p_.sigma * f) / (e2 + gamma * p_.kappa);
    }
  }

  void unpenalized_rhs(const Field& y, Field& out) const override {
    const int n = grid_.size();
    const double inv = 1.0 / (p_.eps * p_.eps);
    Vec mflux(static_cast<size_t>(n)), fflux(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      mflux[j] = y[1][j] * y[1][j] / y[0][j] + p_.p(y[0][j]) * inv;
      fflux[j] = eddington_chi(p_.eps * y[3][j] / y[2][j]) * y[2][j] * inv;
    }
    d_central(y[1], grid_, out[0], Parity::Odd);
    d_central(mflux, grid_, out[1]);
    d_central(y[3], grid_, out[2], Parity::Odd);
    d_central(fflux, grid_, out[3]);
    for (int j = 0; j < n; ++j) {
      out[0][j] = -out[0][j];
      out[1][j] = -out[1][j] + (-p_.kappa * y[1][j] + p_.sigma * y[3][j]) * inv;
      out[2][j] = -out[2][j];
      out[3][j] = -out[3][j] - p_.sigma * y[3][j] * inv;
    }
  }

  Field equilibrium(const Field& state) const override {
    Field out = state;
    Vec pr(state[0].begin(), state[0].end());
    for (auto& x : pr) x = p_.p(x);
    auto px = d_central(pr, grid_);
    auto ex = d_central(state[2], grid_);
    for (int j = 0; j < grid_.size(); ++j) {
      out[3][j] = -ex[j] / (3.0 * p_.sigma);
      out[1][j] = -(px[j] + ex[j] / 3.0) / p_.kappa;
    }
    return out;
  }

  std::unique_ptr<LimitEquation> limit_equation() const override {
    return std::make_unique<M1Limit>(p_, grid_);
  }

 private:
  EulerParams p_;
};

}  // namespace

std::unique_ptr<SplitModel> linear_relaxation_split(const RelaxParams& params, SplittingKind kind,
                                                    MuRule rule, const Grid1D& grid,
                                                    Differencing diff) {
  return std::make_unique<RelaxationModel>(params, RelaxationLaw::Linear, kind, rule, grid, diff);
}

std::unique_ptr<SplitModel> kl_split(const RelaxParams& params, SplittingKind kind, MuRule rule,
                                     const Grid1D& grid, Differencing diff) {
  return std::make_unique<RelaxationModel>(params, RelaxationLaw::Power, kind, rule, grid, diff);
}

std::unique_ptr<SplitModel> euler_friction_split(const EulerParams& params, MuRule rule,
                                                 const Grid1D& grid) {
  return std::make_unique<EulerFrictionModel>(params, rule, grid);
}

std::unique_ptr<SplitModel> euler_m1_split(const EulerParams& params, MuRule rule,
                                           const Grid1D& grid) {
  return std::make_unique<EulerM1Model>(params, rule, grid);
}

Field equilibrium_closure(const SplitModel& model, const Field& state) {
  return model.equilibrium(state);
}

Field limit_rhs(const SplitModel& model, const Field& u, const Field& u_star) {
  auto eq = model.limit_equation();
  Field out(u.grid(), u.components());
  eq->apply(u_star, u, out);
  return out;
}

}  // namespace relaxflow
