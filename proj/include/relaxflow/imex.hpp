#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "relaxflow/grid.hpp"
#include "relaxflow/models.hpp"
#include "relaxflow/tableau.hpp"

namespace relaxflow {

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Additive: Y_i = y0 + h sum_j (a~_ij f(Y_j) + a_ij g(Y_j)), frozen coefficients
//   taken from the previous stage value.
// SemiImplicit: K_i = F(Y*_i, Y_i) with Y*_i = y0 + h sum a~_ij K_j and
//   Y_i = y0 + h sum_{j<i} a_ij K_j + h a_ii K_i, F = f(Y*) + g(Y; Y*).
enum class StageForm { Additive, SemiImplicit };

std::string to_string(StageForm f);
StageForm parse_stage_form(const std::string& s);

struct DtPolicy {
  enum class Kind { Parabolic, Hyperbolic, Fixed };
  Kind kind = Kind::Parabolic;
  double value = 1.0;  // C, or the fixed step

  static DtPolicy parabolic(double c) { return {Kind::Parabolic, c}; }
  static DtPolicy hyperbolic(double c) { return {Kind::Hyperbolic, c}; }
  static DtPolicy fixed(double dt) { return {Kind::Fixed, dt}; }
};

// "parabolic:0.025", "hyperbolic:0.1", "fixed:5e-05"
std::string to_string(const DtPolicy& p);
DtPolicy parse_dt_policy(const std::string& s);

struct DtChoice {
  double dt = 0.0;
  bool feasible = true;
  double cap = 0.0;  // parabolic stability cap, 0 when not applicable
};

DtChoice stable_dt(const SplitModel& model, const Field& state, const DtPolicy& policy);

struct SolverConfig {
  ImexPair pair;
  DtPolicy dt;
  double t_final = 1.0;
  StageForm form = StageForm::Additive;
  // Snapshot times in (0, t_final); 0 and t_final are always recorded.
  std::vector<double> output_times;
};

struct StepInfo {
  SolveStats solve;
};

Field imex_step(const Field& y0, double h, const SplitModel& model, const ImexPair& pair,
                StageForm form = StageForm::Additive, StepInfo* info = nullptr);

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> states;
  long steps = 0;
  int max_newton_iterations = 0;
  bool dt_feasible = true;
};

Trajectory integrate(const Field& state0, const SplitModel& model, const SolverConfig& config);

}  // namespace relaxflow
