#pragma once

#include <functional>

#include "relaxflow/imex.hpp"
#include "relaxflow/models.hpp"
#include "relaxflow/tableau.hpp"

namespace relaxflow {

// Semi-implicit Runge-Kutta scheme for u_t = F(u, u), F linear in its second
// argument.  Requires b = b~ so that u*^{n+1} = u^{n+1}.
class SemiImplicitScheme {
 public:
  explicit SemiImplicitScheme(ImexPair pair);
  const ImexPair& pair() const { return pair_; }

 private:
  ImexPair pair_;
};

// Scalar or system limit operator given as plain callables, for tests and small problems.
class FunctionLimitEquation final : public LimitEquation {
 public:
  using Apply = std::function<void(const Field& u_star, const Field& u, Field& out)>;
  using Solve = std::function<void(const Field& rhs, const Field& u_star, double gamma, Field& y)>;

  FunctionLimitEquation(int components, Apply apply, Solve solve)
      : k_(components), apply_(std::move(apply)), solve_(std::move(solve)) {}

  int components() const override { return k_; }
  void apply(const Field& u_star, const Field& u, Field& out) const override { apply_(u_star, u, out); }
  void solve(const Field& rhs, const Field& u_star, double gamma, Field& y) const override {
    solve_(rhs, u_star, gamma, y);
  }

 private:
  int k_;
  Apply apply_;
  Solve solve_;
};

struct SemiImplicitStages {
  std::vector<Field> u_star;  // U*_i
  std::vector<Field> k;       // K_i
};

Field semi_implicit_step(const Field& u, double h, const LimitEquation& F,
                         const SemiImplicitScheme& scheme, SemiImplicitStages* stages = nullptr);

// U*_2 = u + h/2 F(u,u); U_2 = u + h/2 F(U*_2, U_2); returns 2 U_2 - u.
Field midpoint_step(const Field& u, double h, const LimitEquation& F);

// Uniform steps h = T / ceil(T / dt) with dt from the policy (Parabolic uses dx^2 of u's grid).
Field solve_limit(const LimitEquation& F, const Field& u0, double t_final, const DtPolicy& policy);
Field solve_limit(const SplitModel& model, const Field& u0, double t_final, const DtPolicy& policy);

}  // namespace relaxflow
