#include "relaxflow/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

#include "relaxflow/limit_solver.hpp"
#include "relaxflow/operators.hpp"
#include "relaxflow/tridiagonal.hpp"

namespace relaxflow {

ErrorNorms error_norms(std::span<const double> u, std::span<const double> ref, double dx) {
  if (u.size() != ref.size()) throw std::invalid_argument("error_norms: size mismatch");
  double e1 = 0.0, e2 = 0.0, einf = 0.0, r1 = 0.0, r2 = 0.0, rinf = 0.0;
  for (size_t j = 0; j < u.size(); ++j) {
    const double e = std::abs(u[j] - ref[j]);
    const double r = std::abs(ref[j]);
    e1 += e;
    e2 += e * e;
    einf = std::max(einf, e);
    r1 += r;
    r2 += r * r;
    rinf = std::max(rinf, r);
  }
  if (r1 == 0.0 || rinf == 0.0) throw ZeroReferenceError("reference has zero norm");
  ErrorNorms out;
  out.l1 = (e1 * dx) / (r1 * dx);
  out.l2 = std::sqrt(e2 * dx) / std::sqrt(r2 * dx);
  out.linf = einf / rinf;
  return out;
}

std::vector<double> restrict_to(std::span<const double> fine, const Grid1D& fine_grid,
                                const Grid1D& coarse_grid, Restriction mode) {
  const int nf = fine_grid.size(), nc = coarse_grid.size();
  if (static_cast<int>(fine.size()) != nf) throw std::invalid_argument("restrict_to: size mismatch");
  const double tol = 1e-9 * (fine_grid.x_max() - fine_grid.x_min());
  if (std::abs(fine_grid.x_min() - coarse_grid.x_min()) > tol ||
      std::abs(fine_grid.x_max() - coarse_grid.x_max()) > tol)
    throw std::invalid_argument("restrict_to: grids cover different domains");
  std::vector<double> out(static_cast<size_t>(nc));
  if (mode == Restriction::Average) {
    if (nf % nc != 0 || fine_grid.centering() != Centering::Cell ||
        coarse_grid.centering() != Centering::Cell)
      throw std::invalid_argument("restrict_to: averaging needs nested cell grids");
    const int k = nf / nc;
    for (int j = 0; j < nc; ++j) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += fine[static_cast<size_t>(j * k + i)];
      out[static_cast<size_t>(j)] = s / k;
    }
    return out;
  }
  for (int j = 0; j < nc; ++j) {
    const double pos = (coarse_grid.x(j) - fine_grid.x(0)) / fine_grid.dx();
    const double idx = std::round(pos);
    if (std::abs(pos - idx) > 1e-6)
      throw std::invalid_argument("restrict_to: coarse node " + std::to_string(j) +
                                  " is not a fine-grid node");
    long k = static_cast<long>(idx);
    if (fine_grid.boundary() == Boundary::Periodic) k = ((k % nf) + nf) % nf;
    if (k < 0 || k >= nf) throw std::invalid_argument("restrict_to: node outside the fine grid");
    out[static_cast<size_t>(j)] = fine[static_cast<size_t>(k)];
  }
  return out;
}

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Linear: return "linear";
    case ModelKind::KawashimaLeFloch: return "kl";
    case ModelKind::EulerFriction: return "euler";
    case ModelKind::EulerM1: return "m1";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "linear") return ModelKind::Linear;
  if (s == "kl") return ModelKind::KawashimaLeFloch;
  if (s == "euler") return ModelKind::EulerFriction;
  if (s == "m1") return ModelKind::EulerM1;
  throw std::invalid_argument("unknown model '" + s + "'");
}

std::string to_string(Differencing d) { return d == Differencing::Central ? "central" : "blended"; }

Differencing parse_differencing(const std::string& s) {
  if (s == "central") return Differencing::Central;
  if (s == "blended") return Differencing::Blended;
  throw std::invalid_argument("unknown differencing '" + s + "'");
}

namespace {

bool is_kinetic(ModelKind k) { return k == ModelKind::Linear || k == ModelKind::KawashimaLeFloch; }

// Number of 2 pi periods of cos x inside the domain, 0 when not a whole number.
int data_periods(const ExperimentConfig& c) {
  if (!is_kinetic(c.model) || c.boundary != Boundary::Periodic) return 0;
  const double p = (c.x_max - c.x_min) / (2.0 * M_PI);
  const double r = std::round(p);
  return r >= 1.0 && std::abs(p - r) < 1e-12 ? static_cast<int>(r) : 0;
}

Restriction restriction_for(const ExperimentConfig& c) {
  return is_kinetic(c.model) ? Restriction::Subsample : Restriction::Average;
}

Centering reference_centering(const ExperimentConfig& c) {
  return c.boundary == Boundary::Periodic ? Centering::Vertex : Centering::Cell;
}

int component_of_interest(const ExperimentConfig& c) { return c.model == ModelKind::EulerM1 ? 2 : 0; }

int reference_component(const ExperimentConfig& c) { return c.model == ModelKind::EulerM1 ? 1 : 0; }

}  // namespace

Grid1D make_grid(const ExperimentConfig& config, int n) {
  return Grid1D(n, config.x_min, config.x_max, config.boundary, config.centering);
}

std::unique_ptr<SplitModel> make_model(const ExperimentConfig& config, const Grid1D& grid) {
  switch (config.model) {
    case ModelKind::Linear:
    case ModelKind::KawashimaLeFloch: {
      RelaxParams p;
      p.eps = config.eps;
      p.m = config.model == ModelKind::Linear ? 1.0 : config.m;
      if (config.model == ModelKind::Linear)
        return linear_relaxation_split(p, config.kind, config.mu_rule, grid, config.differencing);
      return kl_split(p, config.kind, config.mu_rule, grid, config.differencing);
    }
    case ModelKind::EulerFriction: {
      EulerParams p = config.euler;
      p.eps = config.eps;
      return euler_friction_split(p, config.mu_rule, grid);
    }
    case ModelKind::EulerM1: {
      EulerParams p = config.euler;
      p.eps = config.eps;
      return euler_m1_split(p, config.mu_rule, grid);
    }
  }
  throw std::invalid_argument("unknown model");
}

Field initial_state(const ExperimentConfig& config, const SplitModel& model) {
  const Grid1D& g = model.grid();
  Field y = model.make_field();
  for (int j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    switch (config.model) {
      case ModelKind::Linear:
      case ModelKind::KawashimaLeFloch:
        y[0][j] = std::cos(x);
        y[1][j] = std::sin(x);
        break;
      case ModelKind::EulerFriction:
        y[0][j] = x >= 1.2 && x <= 1.8 ? 2.0 : 1.0;
        break;
      case ModelKind::EulerM1:
        y[0][j] = 0.2;
        y[2][j] = x >= 0.45 && x <= 0.55 ? 1.5 : 1.0;
        break;
    }
  }
  return config.well_prepared ? model.equilibrium(y) : y;
}

Field reference_solution(const ExperimentConfig& config, int n) {
  const int periods = data_periods(config);
  ExperimentConfig c = config;
  c.centering = reference_centering(config);
  int cells = n;
  if (periods > 1) {
    if (n % periods != 0)
      throw ConfigError("reference cells " + std::to_string(n) + " not divisible by the period count");
    cells = n / periods;
    c.x_max = c.x_min + 2.0 * M_PI;
  }
  Grid1D g = make_grid(c, cells);
  auto model = make_model(c, g);
  Field u0 = model->conserved_part(initial_state(c, *model));
  Field u = solve_limit(*model, u0, c.t_final, c.reference_dt);
  if (periods <= 1) return u;
  ExperimentConfig full = config;
  full.centering = c.centering;
  Field out(make_grid(full, n), u.components());
  for (int k = 0; k < u.components(); ++k)
    for (int j = 0; j < n; ++j) out[k][j] = u[k][j % cells];
  return out;
}

int reference_cells(const ExperimentConfig& config, int n) {
  int r = config.reference_n;
  if (r <= 0 || r % n != 0)
    throw ConfigError("reference cells " + std::to_string(r) + " are not a multiple of " + std::to_string(n));
  if (restriction_for(config) == Restriction::Average) return r;
  // Subsampling a vertex reference at cell centres needs an even ratio.
  const bool even = config.centering == Centering::Cell;
  while (r <= n || (even && (r / n) % 2 != 0)) r *= 2;
  return r;
}

void compute_orders(std::vector<ConvergenceRow>& rows) {
  for (size_t r = 0; r < rows.size(); ++r) {
    rows[r].order.reset();
    if (r == 0 || rows[r].failed() || rows[r - 1].failed()) continue;
    const auto& a = rows[r - 1].error;
    const auto& b = rows[r].error;
    rows[r].order = ErrorNorms{std::log2(a.l1 / b.l1), std::log2(a.l2 / b.l2), std::log2(a.linf / b.linf)};
  }
}

namespace {

unsigned thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RELAXFLOW_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<unsigned>(v);
  }
  return hw;
}

// Runs task(i) for i in [0, count) on up to thread_cap() threads.
template <class F>
void parallel_for(size_t count, F&& task) {
  const unsigned workers = static_cast<unsigned>(std::min<size_t>(thread_cap(), count));
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) task(i);
    });
  for (auto& t : pool) t.join();
}

std::string failure_text(const std::exception& e) {
  std::string s = e.what();
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s.empty() ? "failed" : s;
}

}  // namespace

ConvergenceReport convergence_study(const ExperimentConfig& config) {
  config.validate();
  if (config.n_list.empty()) throw ConfigError("convergence study needs a non-empty n_list");
  ConvergenceReport report;
  report.preset = config.preset;
  report.scheme = config.tableau_file.empty() ? config.scheme : config.tableau_file;
  report.model = to_string(config.model);
  report.eps = config.eps;
  report.c = config.dt.value;
  report.t_final = config.t_final;
  const ImexPair pair = config.pair();

  std::vector<int> ref_cells;
  for (int n : config.n_list) ref_cells.push_back(reference_cells(config, n));
  std::vector<int> distinct = ref_cells;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::optional<Field>> refs(distinct.size());
  parallel_for(distinct.size(), [&](size_t i) { refs[i] = reference_solution(config, distinct[i]); });
  std::map<int, const Field*> ref_of;
  for (size_t i = 0; i < distinct.size(); ++i) ref_of[distinct[i]] = &*refs[i];

  report.rows.resize(config.n_list.size());
  parallel_for(config.n_list.size(), [&](size_t i) {
    ConvergenceRow& row = report.rows[i];
    row.n = config.n_list[i];
    row.reference_n = ref_cells[i];
    try {
      Grid1D g = make_grid(config, row.n);
      auto model = make_model(config, g);
      Field y0 = initial_state(config, *model);
      row.dt = stable_dt(*model, y0, config.dt).dt;
      SolverConfig sc{pair, config.dt, config.t_final, config.form, {}};
      Trajectory tr = integrate(y0, *model, sc);
      row.steps = tr.steps;
      const Field& ref = *ref_of.at(row.reference_n);
      auto restricted = restrict_to(ref[reference_component(config)], ref.grid(), g, restriction_for(config));
      row.error = error_norms(tr.states.back()[component_of_interest(config)], restricted, g.dx());
    } catch (const std::exception& e) {
      row.failure = failure_text(e);
    }
  });
  compute_orders(report.rows);
  return report;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& values) {
  if (columns.size() != values.size()) throw std::invalid_argument("write_csv: column count mismatch");
  size_t rows = values.empty() ? 0 : values[0].size();
  for (const auto& v : values)
    if (v.size() != rows) throw std::invalid_argument("write_csv: ragged columns");
  for (size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << format_number(values[c][r]);
    os << '\n';
  }
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "N,dt,steps,reference_n,err_linf,err_l2,err_l1,order_linf,order_l2,order_l1,status\n";
  for (const auto& r : report.rows) {
    os << r.n << ',' << format_number(r.dt) << ',' << r.steps << ',' << r.reference_n << ',';
    if (r.failed()) {
      os << ",,,,,,failed: " << r.failure << '\n';
      continue;
    }
    os << format_number(r.error.linf) << ',' << format_number(r.error.l2) << ','
       << format_number(r.error.l1) << ',';
    if (r.order)
      os << format_number(r.order->linf) << ',' << format_number(r.order->l2) << ','
         << format_number(r.order->l1);
    else
      os << ",,";
    os << ",ok\n";
  }
}

namespace {

std::vector<double> nodes_of(const Grid1D& g) { return g.nodes(); }

void write_field_csv(const std::string& path, const Field& f, const std::vector<std::string>& names) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  std::vector<std::string> cols{"x"};
  std::vector<std::vector<double>> vals{nodes_of(f.grid())};
  for (int k = 0; k < f.components(); ++k) {
    cols.push_back(names.at(static_cast<size_t>(k)));
    auto s = f[k];
    vals.emplace_back(s.begin(), s.end());
  }
  write_csv(os, cols, vals);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& dir) {
  config.validate();
  ExperimentResult result;
  Grid1D g = make_grid(config, config.n);
  auto model = make_model(config, g);
  Field y0 = initial_state(config, *model);
  SolverConfig sc{config.pair(), config.dt, config.t_final, config.form, {}};
  for (int k = 1; k <= config.snapshots; ++k)
    sc.output_times.push_back(config.t_final * k / (config.snapshots + 1));
  result.trajectory = integrate(y0, *model, sc);
  if (config.reference_n > 0) result.reference = reference_solution(config, config.reference_n);

  if (dir.empty()) return result;
  const std::string base = dir + "/" + (config.preset.empty() ? std::string("run") : config.preset);
  const auto names = model->component_names();
  write_field_csv(base + "_solution.csv", result.trajectory.states.back(), names);
  result.files.push_back(base + "_solution.csv");
  if (config.reference_n > 0) {
    std::vector<std::string> ref_names;
    for (int c : model->conserved()) ref_names.push_back(names.at(static_cast<size_t>(c)));
    write_field_csv(base + "_reference.csv", *result.reference, ref_names);
    result.files.push_back(base + "_reference.csv");
  }
  if (result.trajectory.states.size() > 2) {
    std::ofstream os(base + "_snapshots.csv");
    std::vector<std::string> cols{"x"};
    std::vector<std::vector<double>> vals{g.nodes()};
    for (size_t s = 0; s < result.trajectory.states.size(); ++s) {
      cols.push_back("t=" + format_number(result.trajectory.times[s]));
      auto u = result.trajectory.states[s][component_of_interest(config)];
      vals.emplace_back(u.begin(), u.end());
    }
    write_csv(os, cols, vals);
    result.files.push_back(base + "_snapshots.csv");
  }
  {
    const std::string stem = base.substr(base.find_last_of('/') + 1);
    const int col = component_of_interest(config) + 2;
    std::ofstream os(base + ".gp");
    os << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 'x'\n"
       << "plot '" << stem << "_solution.csv' using 1:" << col << " with points pt 6";
    if (config.reference_n > 0)
      os << ", '" << stem << "_reference.csv' using 1:" << reference_component(config) + 2 << " with lines";
    os << "\npause -1\n";
    result.files.push_back(base + ".gp");
  }
  return result;
}

InstabilityReport detect_instability(const std::vector<std::vector<double>>& snapshots,
                                     const Grid1D& grid) {
  if (snapshots.size() < 3) throw std::invalid_argument("detect_instability needs at least 3 snapshots");
  InstabilityReport out;
  for (const auto& s : snapshots) {
    auto d = fourth_difference(s, grid);
    double mx = 0.0;
    for (double v : d) mx = std::isfinite(v) ? std::max(mx, std::abs(v)) : INFINITY;
    out.metric.push_back(mx);
  }
  const size_t skip = out.metric.size() / 10;
  double lowest = out.metric[skip];
  for (size_t k = skip; k < out.metric.size(); ++k) lowest = std::min(lowest, out.metric[k]);
  const double last = out.metric.back();
  out.ratio = lowest > 0.0 ? last / lowest : (last > 0.0 ? INFINITY : 1.0);
  out.unstable = !std::isfinite(last) || last > 1.2 * lowest;
  return out;
}

InstabilityReport detect_instability(const Trajectory& trajectory, const Grid1D& grid) {
  std::vector<std::vector<double>> snaps;
  for (const auto& s : trajectory.states) {
    auto u = s[0];
    snaps.emplace_back(u.begin(), u.end());
  }
  return detect_instability(snaps, grid);
}

}  // namespace relaxflow
