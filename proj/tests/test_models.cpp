#include <doctest.h>

#include <cmath>
#include <random>

#include "relaxflow/imex.hpp"
#include "relaxflow/models.hpp"
#include "relaxflow/operators.hpp"

using namespace relaxflow;

namespace {

Grid1D periodic(int n, Centering c = Centering::Cell) { return Grid1D(n, -M_PI, M_PI, Boundary::Periodic, c); }

template <class... F>
Field make(const Grid1D& g, F... f) {
  Field y(g, static_cast<int>(sizeof...(F)));
  int k = 0;
  (
      [&](auto fn) {
        for (int j = 0; j < g.size(); ++j) y[k][j] = fn(g.x(j));
        ++k;
      }(f),
      ...);
  return y;
}

// Smooth random state: a few low Fourier modes per component around a base value.
Field smooth_random(const Grid1D& g, int k, unsigned seed, std::vector<double> base) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Field y(g, k);
  for (int c = 0; c < k; ++c) {
    double a1 = d(rng), a2 = d(rng), a3 = d(rng), ph = d(rng);
    for (int j = 0; j < g.size(); ++j) {
      double x = g.x(j);
      y[c][j] = base[c] + 0.2 * (a1 * std::cos(x + ph) + a2 * std::sin(2 * x) + a3 * std::cos(3 * x));
    }
  }
  return y;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double max_abs(const Field& a) { return max_abs(std::span<const double>(a.data())); }

// explicit_rhs(y) + implicit_rhs(y; y) against the unpenalized right-hand side.
double penalization_defect(const SplitModel& m, const Field& y) {
  Field e = m.make_field(), i = m.make_field(), full = m.make_field();
  m.explicit_rhs(y, e);
  m.implicit_rhs(y, y, i);
  m.unpenalized_rhs(y, full);
  e.axpy(1.0, i);
  return max_diff(e, full) / max_abs(full);
}

}  // namespace

TEST_CASE("penalization weight") {
  CHECK(mu_exp(0.0, 0.1) == 1.0);
  CHECK(mu_exp(std::sqrt(0.01), 0.01) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(mu_exp(std::sqrt(0.1), 0.01) < 5e-5);
  CHECK(mu_step(1e-3, 1e-2) == 1.0);
  CHECK(mu_step(1e-2, 1e-2) == 0.0);
  CHECK(mu_step(0.0, 1e-2) == 1.0);
  CHECK(mu_value(MuRule::Zero, 0.0, 1.0) == 0.0);
}

TEST_CASE("eddington factor") {
  CHECK(eddington_chi(0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(eddington_chi(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eddington_chi(-1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eddington_chi(0.5) == doctest::Approx(4.0 / (5.0 + std::sqrt(13.0))).epsilon(1e-15));
  CHECK(eddington_chi(0.5) == doctest::Approx(0.4648).epsilon(1e-4));
  double prev = eddington_chi(0.0);
  for (int i = 1; i <= 100; ++i) {
    double v = eddington_chi(i / 100.0);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(eddington_chi(1.01), ModelDomainError);
}

TEST_CASE("alpha follows from m") {
  for (double m : {0.3, 0.5, 1.0, 2.0, 3.7}) {
    RelaxParams p;
    p.m = m;
    CHECK(p.alpha() == -1.0 + 1.0 / m);
  }
  RelaxParams p;
  p.m = 2.0;
  CHECK(p.alpha() == -0.5);
}

TEST_CASE("monotone b check") {
  RelaxParams p;
  p.b = [](double u) { return u * u * u + u; };
  CHECK_NOTHROW(p.check_monotone_b(-2.0, 2.0));
  p.b = [](double u) { return -u; };
  CHECK_THROWS(p.check_monotone_b(-1.0, 1.0));
}

TEST_CASE("penalization terms cancel for every splitting") {
  Grid1D g = periodic(64);
  RelaxParams lin;
  lin.eps = 0.05;
  RelaxParams kl = lin;
  kl.m = 2.0;
  RelaxParams klsub = lin;
  klsub.m = 0.5;
  RelaxParams nonlin = lin;
  nonlin.b = [](double u) { return u + 0.2 * u * u * u; };
  nonlin.db = [](double u) { return 1.0 + 0.6 * u * u; };
  for (auto kind : {SplittingKind::Partitioned, SplittingKind::Additive, SplittingKind::PenalizedBPR,
                    SplittingKind::PenalizedBR}) {
    CAPTURE(to_string(kind));
    Field y = smooth_random(g, 2, 3, {0.0, 0.0});
    CHECK(penalization_defect(*linear_relaxation_split(lin, kind, MuRule::Exp, g), y) <= 1e-12);
    CHECK(penalization_defect(*linear_relaxation_split(nonlin, kind, MuRule::Exp, g), y) <= 1e-12);
    CHECK(penalization_defect(*kl_split(kl, kind, MuRule::Exp, g), y) <= 1e-12);
    CHECK(penalization_defect(*kl_split(klsub, kind, MuRule::Step, g), y) <= 1e-12);
  }
  EulerParams ep;
  ep.eps = 0.05;
  Field rho = smooth_random(g, 2, 5, {1.0, 0.0});
  CHECK(penalization_defect(*euler_friction_split(ep, MuRule::Step, g), rho) <= 1e-12);
  Field m1 = smooth_random(g, 4, 6, {1.0, 0.0, 1.0, 0.0});
  ep.kappa = 2.0;
  ep.cp = 0.1;
  CHECK(penalization_defect(*euler_m1_split(ep, MuRule::Step, g), m1) <= 1e-12);
}

TEST_CASE("penalized splittings with mu = 0 reduce to the additive one") {
  Grid1D g = periodic(40);
  RelaxParams p;
  p.eps = 0.1;
  auto add = linear_relaxation_split(p, SplittingKind::Additive, MuRule::Zero, g);
  auto br = linear_relaxation_split(p, SplittingKind::PenalizedBR, MuRule::Zero, g);
  CHECK(br->mu() == 0.0);
  Field y = smooth_random(g, 2, 9, {0.0, 0.0});
  Field a = add->make_field(), b = br->make_field();
  add->explicit_rhs(y, a);
  br->explicit_rhs(y, b);
  CHECK(max_diff(a, b) == 0.0);
  add->implicit_rhs(y, y, a);
  br->implicit_rhs(y, y, b);
  CHECK(max_diff(a, b) == 0.0);
}

TEST_CASE("power law model with m = 1 is the linear model") {
  Grid1D g = periodic(40);
  RelaxParams p;
  p.eps = 0.1;
  auto lin = linear_relaxation_split(p, SplittingKind::Additive, MuRule::Zero, g);
  auto kl = kl_split(p, SplittingKind::Additive, MuRule::Zero, g);
  Field y = smooth_random(g, 2, 4, {0.0, 0.0});
  Field a = lin->make_field(), b = kl->make_field();
  lin->explicit_rhs(y, a);
  kl->explicit_rhs(y, b);
  CHECK(max_diff(a, b) == 0.0);
  lin->implicit_rhs(y, y, a);
  kl->implicit_rhs(y, y, b);
  CHECK(max_diff(a, b) == 0.0);
}

TEST_CASE("linear relaxation equilibrium") {
  RelaxParams p;
  auto err = [&](int n) {
    Grid1D g = periodic(n);
    auto m = linear_relaxation_split(p, SplittingKind::Additive, MuRule::Zero, g);
    Field eq = equilibrium_closure(*m, make(g, [](double x) { return std::cos(x); }, [](double) { return 0.0; }));
    double e = 0.0;
    for (int j = 0; j < n; ++j) e = std::max(e, std::abs(eq[1][j] - std::sin(g.x(j))));
    return e;
  };
  CHECK(err(96) <= 1e-3);
  CHECK(err(96) / err(192) == doctest::Approx(4.0).epsilon(0.01));

  // Stiff residual of the analytic equilibrium v = sin x shrinks at second order.
  auto residual = [&](int n) {
    Grid1D g = periodic(n);
    auto m = linear_relaxation_split(p, SplittingKind::Additive, MuRule::Zero, g);
    Field y = make(g, [](double x) { return std::cos(x); }, [](double x) { return std::sin(x); });
    Field out = m->make_field();
    m->unpenalized_rhs(y, out);
    return max_abs(out[1]) * p.eps * p.eps;
  };
  CHECK(residual(96) / residual(192) == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("power law equilibrium") {
  Grid1D g = periodic(96, Centering::Vertex);
  RelaxParams p;
  p.m = 0.5;
  auto m = kl_split(p, SplittingKind::Additive, MuRule::Zero, g);
  Field eq = equilibrium_closure(*m, make(g, [](double x) { return std::cos(x); }, [](double) { return 0.0; }));
  // x = pi/2 sits at index 72: u_x = -1, v = -sign(u_x)|u_x|^2 = 1.
  REQUIRE(g.x(72) == doctest::Approx(M_PI / 2));
  CHECK(eq[1][72] == doctest::Approx(1.0).epsilon(2e-3));
  // u_x = 0 at x = 0 (index 48) gives v = 0.
  CHECK(eq[1][48] == 0.0);
  auto flat = equilibrium_closure(*m, make(g, [](double) { return 2.0; }, [](double) { return 1.0; }));
  CHECK(max_abs(flat[1]) == 0.0);
}

TEST_CASE("superlinear weights blow up at extrema but stay finite") {
  Grid1D g = periodic(96, Centering::Vertex);
  RelaxParams p;
  p.m = 2.0;
  auto m = kl_split(p, SplittingKind::Additive, MuRule::Zero, g);
  Field y = make(g, [](double x) { return std::cos(x); }, [](double) { return 0.0; });
  // Central difference of cos vanishes exactly at x = 0: (alpha + 1) tol^alpha.
  auto bound = m->diffusion_bound(y);
  REQUIRE(bound);
  CHECK(*bound == doctest::Approx(0.5e6).epsilon(1e-9));
  auto w = power_face_weights(y[0], -0.5, 1e-12, g);
  for (double x : w) {
    CHECK(std::isfinite(x));
    CHECK(x >= 1.0);
  }
}

TEST_CASE("constant states are steady") {
  Grid1D z(30, 0.0, 1.0, Boundary::ZeroGradient);
  EulerParams ep;
  auto euler = euler_friction_split(ep, MuRule::Step, z);
  Field y = make(z, [](double) { return 1.0; }, [](double) { return 0.0; });
  Field out = euler->make_field();
  euler->explicit_rhs(y, out);
  CHECK(max_abs(out) == 0.0);
  euler->implicit_rhs(y, y, out);
  CHECK(max_abs(out) == 0.0);

  ep.cp = 1e-3;
  ep.kappa = 2.0;
  auto m1 = euler_m1_split(ep, MuRule::Step, z);
  Field s = make(z, [](double) { return 0.2; }, [](double) { return 0.0; }, [](double) { return 1.5; },
                 [](double) { return 0.0; });
  Field o = m1->make_field();
  m1->explicit_rhs(s, o);
  CHECK(max_abs(o) == 0.0);
  m1->implicit_rhs(s, s, o);
  CHECK(max_abs(o) == 0.0);

  RelaxParams p;
  p.m = 2.0;
  Grid1D g = periodic(20);
  for (auto& lim : {limit_rhs(*kl_split(p, SplittingKind::Additive, MuRule::Zero, g),
                              make(g, [](double) { return 3.0; }), make(g, [](double) { return 3.0; })),
                    limit_rhs(*euler, make(z, [](double) { return 2.0; }), make(z, [](double) { return 2.0; }))})
    CHECK(max_abs(lim) == 0.0);
}

TEST_CASE("domain errors") {
  Grid1D z(10, 0.0, 1.0, Boundary::ZeroGradient);
  EulerParams ep;
  auto euler = euler_friction_split(ep, MuRule::Step, z);
  Field y = make(z, [](double x) { return x - 0.5; }, [](double) { return 0.0; });
  Field out = euler->make_field();
  CHECK_THROWS_AS(euler->explicit_rhs(y, out), ModelDomainError);

  auto m1 = euler_m1_split(ep, MuRule::Step, z);
  // |eps f / e| > 1
  Field s = make(z, [](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 1.0; },
                 [](double) { return 2e3; });
  Field o = m1->make_field();
  CHECK_THROWS_AS(m1->explicit_rhs(s, o), ModelDomainError);
}

TEST_CASE("M1 equilibrium fluxes") {
  Grid1D z(100, 0.0, 1.0, Boundary::ZeroGradient);
  EulerParams ep;
  ep.cp = 1e-3;
  ep.kappa = 2.0;
  ep.sigma = 1.0;
  auto m1 = euler_m1_split(ep, MuRule::Step, z);
  Field s = make(z, [](double) { return 0.2; }, [](double) { return 0.0; },
                 [](double x) { return x >= 0.45 && x <= 0.55 ? 1.5 : 1.0; }, [](double) { return 0.0; });
  Field eq = equilibrium_closure(*m1, s);
  auto ex = d_central(s[2], z);
  for (int j = 0; j < 100; ++j) {
    CHECK(eq[3][j] == doctest::Approx(-ex[j] / 3.0));
    CHECK(eq[1][j] == doctest::Approx(-ex[j] / 6.0));
  }
  // At equilibrium the stiff f residual is only the chi - 1/3 correction, O(eps^2) after scaling.
  auto scaled_residual = [&](double eps) {
    EulerParams q = ep;
    q.eps = eps;
    auto model = euler_m1_split(q, MuRule::Step, z);
    Field out = model->make_field();
    model->unpenalized_rhs(equilibrium_closure(*model, s), out);
    return max_abs(out[3]) * eps * eps;
  };
  CHECK(scaled_residual(1e-3) <= 1e-4 * max_abs(ex));
  CHECK(scaled_residual(1e-3) / scaled_residual(1e-4) == doctest::Approx(100.0).epsilon(0.01));
}

TEST_CASE("limit right-hand sides") {
  Grid1D g = periodic(64);
  RelaxParams p;
  auto heat = kl_split(p, SplittingKind::Additive, MuRule::Zero, g);
  Field u = smooth_random(g, 1, 1, {0.0});
  Field ustar = smooth_random(g, 1, 2, {0.0});
  Field f = limit_rhs(*heat, u, ustar);
  auto d2 = d2_central(u[0], g);
  for (int j = 0; j < 64; ++j) CHECK(f[0][j] == doctest::Approx(d2[j]).epsilon(1e-12));

  // Euler with p = rho^2: F(rho, rho) = (2 rho rho_x)_x ~ 2 rho_xx for rho = 1 + delta cos x.
  Grid1D h = periodic(192);
  EulerParams ep;
  auto euler = euler_friction_split(ep, MuRule::Step, h);
  const double delta = 1e-4;
  Field rho = make(h, [&](double x) { return 1.0 + delta * std::cos(x); });
  Field e = limit_rhs(*euler, rho, rho);
  for (int j = 0; j < 192; ++j) CHECK(std::abs(e[0][j] / delta + 2.0 * std::cos(h.x(j))) <= 1e-3);
}

TEST_CASE("convective parts conserve on periodic grids") {
  Grid1D g = periodic(50);
  RelaxParams p;
  p.eps = 0.1;
  p.m = 2.0;
  auto kl = kl_split(p, SplittingKind::PenalizedBPR, MuRule::Exp, g);
  Field y = smooth_random(g, 2, 12, {0.0, 0.0});
  Field out = kl->make_field();
  kl->explicit_rhs(y, out);
  double s = 0.0;
  for (double x : out[0]) s += x;
  CHECK(std::abs(s) <= 1e-12 * 50 * max_abs(out[0]));

  EulerParams ep;
  ep.eps = 0.1;
  auto m1 = euler_m1_split(ep, MuRule::Step, g);
  Field z = smooth_random(g, 4, 13, {1.0, 0.0, 1.0, 0.0});
  Field o = m1->make_field();
  m1->explicit_rhs(z, o);
  for (int c = 0; c < 4; ++c) {
    double t = 0.0;
    for (double x : o[c]) t += x;
    CHECK(std::abs(t) <= 1e-12 * 50 * max_abs(o[c]));
  }
}
