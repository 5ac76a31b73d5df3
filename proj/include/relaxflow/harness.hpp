#pragma once

#include <cmath>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaxflow/grid.hpp"
#include "relaxflow/imex.hpp"
#include "relaxflow/models.hpp"
#include "relaxflow/tableau.hpp"

namespace relaxflow {

class ZeroReferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

// Relative errors ||u - ref||_p / ||ref||_p with the dx-weighted discrete norms.
ErrorNorms error_norms(std::span<const double> u, std::span<const double> ref, double dx);

enum class Restriction { Subsample, Average };

// Maps a fine-grid profile onto the nodes of a coarser grid on the same
// domain.  Subsample picks the fine value at each coarse node; Average takes
// the mean of the fine cells covering each coarse cell.
std::vector<double> restrict_to(std::span<const double> fine, const Grid1D& fine_grid,
                                const Grid1D& coarse_grid, Restriction mode);

enum class ModelKind { Linear, KawashimaLeFloch, EulerFriction, EulerM1 };

std::string to_string(ModelKind k);
ModelKind parse_model_kind(const std::string& s);
std::string to_string(Differencing d);
Differencing parse_differencing(const std::string& s);

struct ExperimentConfig {
  std::string preset;
  ModelKind model = ModelKind::KawashimaLeFloch;
  double eps = 1e-4;
  double m = 2.0;
  std::string scheme = "ARS111";
  std::string tableau_file;  // overrides scheme when set
  SplittingKind kind = SplittingKind::Additive;
  StageForm form = StageForm::Additive;
  MuRule mu_rule = MuRule::Zero;
  Differencing differencing = Differencing::Central;
  DtPolicy dt = DtPolicy::parabolic(0.025);
  double t_final = 1.0;
  std::vector<int> n_list;  // convergence sweeps
  int n = 96;               // single runs
  double x_min = -M_PI;
  double x_max = M_PI;
  Boundary boundary = Boundary::Periodic;
  Centering centering = Centering::Vertex;
  int reference_n = 384;
  DtPolicy reference_dt = DtPolicy::parabolic(0.25);
  EulerParams euler;
  int snapshots = 0;  // evenly spaced interior snapshots for run_experiment
  // Start the stiff components at the local equilibrium of the initial data.
  bool well_prepared = false;

  ImexPair pair() const;
  void validate() const;
};

std::vector<std::string> preset_names();
ExperimentConfig make_preset(const std::string& name);
// key=value override; keys follow the field names (n_list as "12,24,...",
// dt and reference_dt as "parabolic:C", "hyperbolic:C" or "fixed:dt").
// Extra keys: C (scales dt), periods (domain [-p pi, p pi]), T (t_final),
// N (n_list), cp, eta, kappa, sigma (euler parameters).
void apply_override(ExperimentConfig& config, const std::string& key, const std::string& value);
void apply_override(ExperimentConfig& config, const std::string& assignment);
// One "key=value" line per field, in a fixed order.
std::string serialize(const ExperimentConfig& config);

Grid1D make_grid(const ExperimentConfig& config, int n);
std::unique_ptr<SplitModel> make_model(const ExperimentConfig& config, const Grid1D& grid);
Field initial_state(const ExperimentConfig& config, const SplitModel& model);
// Limit-equation reference on n cells, non-stiff components only.  On periodic
// domains spanning several periods of the data it is solved on one period and tiled.
Field reference_solution(const ExperimentConfig& config, int n);
// Reference resolution used for a run with n cells (never the run's own grid).
int reference_cells(const ExperimentConfig& config, int n);

struct ConvergenceRow {
  int n = 0;
  double dt = 0.0;  // first step
  long steps = 0;
  int reference_n = 0;
  ErrorNorms error;
  std::optional<ErrorNorms> order;
  std::string failure;  // empty on success

  bool failed() const { return !failure.empty(); }
};

struct ConvergenceReport {
  std::string preset, scheme, model;
  double eps = 0.0, c = 0.0, t_final = 0.0;
  std::vector<ConvergenceRow> rows;
};

// order_r = log2(E_{r-1} / E_r) per norm; empty for the first row and next to failed rows.
void compute_orders(std::vector<ConvergenceRow>& rows);

// Per-N runs go to a thread pool capped by RELAXFLOW_THREADS (default: hardware concurrency).
ConvergenceReport convergence_study(const ExperimentConfig& config);

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);

struct ExperimentResult {
  Trajectory trajectory;
  std::optional<Field> reference;
  std::vector<std::string> files;
};

// Writes <dir>/<preset>_solution.csv, <dir>/<preset>_reference.csv (when the
// model has a limit reference) and <dir>/<preset>.gp.  Empty dir writes nothing.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& dir);

struct InstabilityReport {
  bool unstable = false;
  double ratio = 0.0;  // final metric / running minimum after the transient
  std::vector<double> metric;
};

// Growth of max_j |u_{j+2} - 4u_{j+1} + 6u_j - 4u_{j-1} + u_{j-2}| between
// snapshots: unstable iff the final value exceeds 1.2 times the minimum over
// the snapshots after the first 10%.
InstabilityReport detect_instability(const std::vector<std::vector<double>>& snapshots,
                                     const Grid1D& grid);
InstabilityReport detect_instability(const Trajectory& trajectory, const Grid1D& grid);

std::string format_number(double v);  // %.17g

// columns: header names; values: one vector per column, equal lengths.
void write_csv(std::ostream& os, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& values);

}  // namespace relaxflow
