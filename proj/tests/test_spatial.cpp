#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "relaxflow/grid.hpp"
#include "relaxflow/operators.hpp"
#include "relaxflow/tridiagonal.hpp"

using namespace relaxflow;

namespace {

Grid1D periodic(int n) { return Grid1D(n, -M_PI, M_PI, Boundary::Periodic); }

template <class F>
std::vector<double> sample(const Grid1D& g, F f) {
  std::vector<double> v(static_cast<size_t>(g.size()));
  for (int j = 0; j < g.size(); ++j) v[j] = f(g.x(j));
  return v;
}

std::vector<double> random_field(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(static_cast<size_t>(n));
  for (auto& x : v) x = d(rng);
  return v;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <class Op, class Exact>
double max_error(int n, Op op, Exact exact) {
  Grid1D g = periodic(n);
  auto out = op(sample(g, [](double x) { return std::sin(x); }), g);
  double e = 0.0;
  for (int j = 0; j < n; ++j) e = std::max(e, std::abs(out[j] - exact(g.x(j))));
  return e;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("grid geometry") {
  Grid1D g(4, 0.0, 2.0, Boundary::ZeroGradient);
  CHECK(g.dx() == 0.5);
  CHECK(g.x(0) == 0.25);
  CHECK(g.x(3) == 1.75);
  Grid1D v(4, 0.0, 2.0, Boundary::Periodic, Centering::Vertex);
  CHECK(v.x(0) == 0.0);
  CHECK(v.x(3) == 1.5);
  CHECK_THROWS(Grid1D(2, 0.0, 1.0, Boundary::Periodic));
  CHECK_THROWS(Grid1D(8, 1.0, 1.0, Boundary::Periodic));
  CHECK_THROWS(Grid1D(8, 0.0, 1.0, Boundary::ZeroGradient, Centering::Vertex));
}

TEST_CASE("ghost values") {
  std::vector<double> f{1, 2, 3, 4};
  Grid1D p(4, 0.0, 1.0, Boundary::Periodic);
  CHECK(p.at(f, -1) == 4);
  CHECK(p.at(f, -2) == 3);
  CHECK(p.at(f, 4) == 1);
  Grid1D z(4, 0.0, 1.0, Boundary::ZeroGradient);
  CHECK(z.at(f, -1) == 1);
  CHECK(z.at(f, -2) == 2);
  CHECK(z.at(f, 5) == 3);
  CHECK(z.at(f, 4, Parity::Odd) == -4);
}

TEST_CASE("first differences of constant and linear data") {
  Grid1D g(10, 0.0, 1.0, Boundary::ZeroGradient);
  std::vector<double> c(10, 3.5);
  CHECK(max_abs(d_central(c, g)) == 0.0);
  CHECK(max_abs(d_upwind(c, 1, g)) == 0.0);
  CHECK(max_abs(d_upwind(c, -1, g)) == 0.0);

  auto lin = sample(g, [](double x) { return x; });
  auto dc = d_central(lin, g);
  auto up = d_upwind(lin, 1, g);
  auto dn = d_upwind(lin, -1, g);
  auto bl = d_blend(lin, 0.5, 1, g);
  for (int j = 1; j < 9; ++j) {
    CHECK(dc[j] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(up[j] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(dn[j] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(bl[j] == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("central difference is second order, upwind first order") {
  auto dc = [](const std::vector<double>& f, const Grid1D& g) { return d_central(f, g); };
  auto up = [](const std::vector<double>& f, const Grid1D& g) { return d_upwind(f, 1, g); };
  auto cosx = [](double x) { return std::cos(x); };
  double r_central = max_error(48, dc, cosx) / max_error(96, dc, cosx);
  double r_upwind = max_error(48, up, cosx) / max_error(96, up, cosx);
  CHECK(r_central == doctest::Approx(4.0).epsilon(0.02));
  CHECK(r_upwind == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("second difference") {
  Grid1D g(12, 0.0, 1.0, Boundary::ZeroGradient);
  auto lin = d2_central(sample(g, [](double x) { return 2.0 * x - 1.0; }), g);
  auto quad = d2_central(sample(g, [](double x) { return x * x; }), g);
  for (int j = 1; j < 11; ++j) {
    CHECK(std::abs(lin[j]) <= 1e-11);
    CHECK(quad[j] == doctest::Approx(2.0).epsilon(1e-10));
  }
  auto d2 = [](const std::vector<double>& f, const Grid1D& h) { return d2_central(f, h); };
  auto msin = [](double x) { return -std::sin(x); };
  CHECK(max_error(48, d2, msin) / max_error(96, d2, msin) == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("blend is the linear combination of its endpoints") {
  Grid1D g = periodic(37);
  auto f = random_field(37, 3);
  for (int sign : {1, -1}) {
    auto up = d_upwind(f, sign, g);
    auto dc = d_central(f, g);
    CHECK(d_blend(f, 0.0, sign, g) == up);
    CHECK(d_blend(f, 1.0, sign, g) == dc);
    for (double mu : {0.2, 0.5, 0.9}) {
      auto b = d_blend(f, mu, sign, g);
      for (int j = 0; j < 37; ++j)
        CHECK(b[j] == doctest::Approx((1.0 - mu) * up[j] + mu * dc[j]).epsilon(1e-13));
    }
  }
}

TEST_CASE("nonlinear flux divergence") {
  Grid1D g = periodic(64);
  auto f = random_field(64, 11);
  SUBCASE("alpha = 0 matches the second difference") {
    auto a = nonlinear_flux_divergence(f, 0.0, 0.0, g);
    auto b = d2_central(f, g);
    double tol = 1e-13 * max_abs(f) / (g.dx() * g.dx());
    for (int j = 0; j < 64; ++j) CHECK(std::abs(a[j] - b[j]) <= tol);
    auto c = nonlinear_flux_divergence(f, 0.0, 1e-12, g);
    for (int j = 0; j < 64; ++j) CHECK(std::abs(c[j] - b[j]) <= tol);
  }
  SUBCASE("linear data has constant flux") {
    Grid1D z(20, 0.0, 1.0, Boundary::ZeroGradient);
    auto lin = sample(z, [](double x) { return 3.0 * x; });
    for (double alpha : {-0.5, 0.0, 1.0, 2.0}) {
      auto out = nonlinear_flux_divergence(lin, alpha, 1e-12, z);
      for (int j = 1; j < 19; ++j) CHECK(std::abs(out[j]) <= 1e-9);
    }
  }
  SUBCASE("second order consistency for alpha = 1") {
    // Exact value -2|sin x| cos x.  The flux |sin x| sin x has a second
    // derivative jump at 0 and pi, so the order is measured in L1.
    auto exact = [](double x) { return -2.0 * std::abs(std::sin(x)) * std::cos(x); };
    auto err = [&](int n) {
      Grid1D h(n, -M_PI, M_PI, Boundary::Periodic, Centering::Vertex);
      auto out = nonlinear_flux_divergence(sample(h, [](double x) { return std::cos(x); }), 1.0, 0.0, h);
      double e = 0.0;
      for (int j = 0; j < n; ++j) e += std::abs(out[j] - exact(h.x(j))) * h.dx();
      return e;
    };
    CHECK(std::log2(err(96) / err(192)) > 1.8);
  }
}

TEST_CASE("periodic operators telescope") {
  Grid1D g = periodic(50);
  auto f = random_field(50, 5);
  const double bound = 1e-12 * 50 * max_abs(f);
  CHECK(std::abs(sum(d_central(f, g))) * g.dx() <= bound);
  CHECK(std::abs(sum(d_upwind(f, 1, g))) * g.dx() <= bound);
  CHECK(std::abs(sum(d_upwind(f, -1, g))) * g.dx() <= bound);
  CHECK(std::abs(sum(d_blend(f, 0.3, 1, g))) * g.dx() <= bound);
  CHECK(std::abs(sum(d2_central(f, g))) * g.dx() * g.dx() <= bound);
  CHECK(std::abs(sum(nonlinear_flux_divergence(f, -0.5, 1e-12, g))) * g.dx() * g.dx() <= bound * 1e3);
}

TEST_CASE("frozen diffusion system") {
  SUBCASE("sigma = 0 is the identity") {
    Grid1D g = periodic(16);
    auto rhs = random_field(16, 2);
    auto sys = assemble_frozen_diffusion_system(random_field(16, 9), 0.5, 1e-12, 0.0, g);
    CHECK(sys.solve(rhs) == rhs);
  }
  SUBCASE("constants are preserved") {
    Grid1D g = periodic(16);
    std::vector<double> rhs(16, 2.5);
    auto sys = assemble_frozen_diffusion_system(random_field(16, 4), 0.0, 1e-12, 3.0, g);
    for (double x : sys.solve(rhs)) CHECK(x == doctest::Approx(2.5).epsilon(1e-13));
  }
  SUBCASE("cosine mode is damped by the discrete symbol") {
    const int n = 32;
    Grid1D g = periodic(n);
    const double lambda = 0.7, dx = g.dx();
    const double k = (2.0 - 2.0 * std::cos(dx)) / (dx * dx);
    auto rhs = sample(g, [](double x) { return std::cos(x); });
    auto sys = assemble_frozen_diffusion_system(rhs, 0.0, 0.0, lambda, g);
    CHECK(sys.cyclic);
    auto u = sys.solve(rhs);
    for (int j = 0; j < n; ++j) CHECK(u[j] == doctest::Approx(rhs[j] / (1.0 + lambda * k)).epsilon(1e-12));
    auto back = sys.apply(u);
    for (int j = 0; j < n; ++j) CHECK(std::abs(back[j] - rhs[j]) <= 1e-12);
  }
  SUBCASE("forward application recovers the right-hand side") {
    for (auto bc : {Boundary::Periodic, Boundary::ZeroGradient}) {
      Grid1D g(41, 0.0, 2.0, bc);
      auto ustar = random_field(41, 21);
      auto rhs = random_field(41, 22);
      auto sys = assemble_frozen_diffusion_system(ustar, -0.5, 1e-6, 1e-3, g);
      auto back = sys.apply(sys.solve(rhs));
      for (int j = 0; j < 41; ++j) CHECK(std::abs(back[j] - rhs[j]) <= 1e-12 * max_abs(rhs));
    }
  }
  SUBCASE("zero gradient rows conserve the sum") {
    Grid1D g(25, 0.0, 1.0, Boundary::ZeroGradient);
    auto rhs = random_field(25, 8);
    auto sys = assemble_frozen_diffusion_system(random_field(25, 1), 1.0, 1e-12, 0.01, g);
    CHECK(sum(sys.solve(rhs)) == doctest::Approx(sum(rhs)).epsilon(1e-12));
  }
}

TEST_CASE("cyclic tridiagonal solve matches a dense solve") {
  const int n = 7;
  TridiagonalSystem s;
  s.cyclic = true;
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> d(0.1, 0.5);
  for (int j = 0; j < n; ++j) {
    s.lower.push_back(-d(rng));
    s.upper.push_back(-d(rng));
    s.diag.push_back(2.0 + d(rng));
  }
  auto rhs = random_field(n, 6);
  auto x = s.solve(rhs);
  // Dense Gaussian elimination of the same matrix.
  std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    m[i][i] = s.diag[i];
    m[i][(i + n - 1) % n] += s.lower[i];
    m[i][(i + 1) % n] += s.upper[i];
    m[i][n] = rhs[i];
  }
  for (int c = 0; c < n; ++c)
    for (int r = c + 1; r < n; ++r) {
      double f = m[r][c] / m[c][c];
      for (int k = c; k <= n; ++k) m[r][k] -= f * m[c][k];
    }
  std::vector<double> y(n);
  for (int i = n - 1; i >= 0; --i) {
    double acc = m[i][n];
    for (int k = i + 1; k < n; ++k) acc -= m[i][k] * y[k];
    y[i] = acc / m[i][i];
  }
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-13));
}

TEST_CASE("singular system is reported") {
  TridiagonalSystem s;
  s.lower = {0, 0, 0};
  s.diag = {1, 0, 1};
  s.upper = {0, 0, 0};
  std::vector<double> rhs{1, 1, 1};
  CHECK_THROWS_AS(s.solve(rhs), SingularSystemError);
}
