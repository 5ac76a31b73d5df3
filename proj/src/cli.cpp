#include "relaxflow/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "relaxflow/harness.hpp"
#include "relaxflow/limit_solver.hpp"
#include "relaxflow/tridiagonal.hpp"

namespace relaxflow {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExperimentConfig configure(const std::string& preset, const std::vector<std::string>& overrides) {
  ExperimentConfig c = make_preset(preset);
  for (const auto& o : overrides) apply_override(c, o);
  c.validate();
  return c;
}

void print_report(std::ostream& out, const ConvergenceReport& r) {
  char line[160];
  std::snprintf(line, sizeof line, "%6s %12s %12s %12s %12s %8s\n", "N", "dt", "L_inf", "L2", "L1", "ord_inf");
  out << line;
  for (const auto& row : r.rows) {
    if (row.failed()) {
      out << std::setw(6) << row.n << "  failed: " << row.failure << '\n';
      continue;
    }
    std::snprintf(line, sizeof line, "%6d %12.4e %12.4e %12.4e %12.4e", row.n, row.dt, row.error.linf,
                  row.error.l2, row.error.l1);
    out << line;
    if (row.order) {
      std::snprintf(line, sizeof line, " %8.3f", row.order->linf);
      out << line;
    }
    out << '\n';
  }
}

int cmd_converge(const std::string& preset, const std::string& path, const std::vector<std::string>& ov,
                 std::ostream& out) {
  auto cfg = configure(preset, ov);
  auto report = convergence_study(cfg);
  if (path.empty()) {
    write_convergence_csv(out, report);
  } else {
    std::ofstream os(path);
    if (!os) throw UsageError("cannot write " + path);
    write_convergence_csv(os, report);
    print_report(out, report);
  }
  for (const auto& row : report.rows)
    if (row.failed()) return 2;
  return 0;
}

int cmd_run(const std::string& preset, const std::string& dir, const std::vector<std::string>& ov,
            std::ostream& out) {
  auto cfg = configure(preset, ov);
  std::filesystem::create_directories(dir);
  auto result = run_experiment(cfg, dir);
  for (const auto& f : result.files) out << f << '\n';
  if (result.trajectory.states.size() >= 3) {
    auto inst = detect_instability(result.trajectory, result.trajectory.states.back().grid());
    out << "instability=" << (inst.unstable ? "true" : "false") << " ratio=" << format_number(inst.ratio) << '\n';
  }
  return 0;
}

int cmd_tableau_check(const std::string& name, double tol, std::ostream& out) {
  ImexPair pair = resolve_pair(name);
  pair.validate();
  auto type = classify(pair, tol);
  bool gsa = is_globally_stiffly_accurate(pair);
  auto report = check_order(pair, 3);
  int order = report.verified_order();
  out << "type=" << to_string(type.kind) << " gsa=" << (gsa ? "true" : "false") << " order≥" << order
      << '\n';
  out << "b=b~: " << (pair.weights_match(0.0) ? "yes" : "no") << '\n';
  if (!type.diagnostics.empty()) out << "classification: " << type.diagnostics << '\n';
  for (const auto& c : report.conditions)
    out << "  p=" << c.order << ' ' << c.tableau << ' ' << c.condition << " residual=" << format_number(c.residual)
        << '\n';
  if (!report.note.empty()) out << "note: " << report.note << '\n';
  for (const auto& w : pair.warnings()) out << "warning: " << w << '\n';
  return 0;
}

std::string default_preset(const std::string& model) {
  if (model == "kl" || model == "linear") return "kl_table1b";
  if (model == "euler") return "euler_fig1";
  if (model == "m1") return "m1_fig2";
  throw UsageError("unknown model '" + model + "' (expected kl, linear, euler or m1)");
}

int cmd_limit(const std::string& model, int n, const std::string& path, const std::vector<std::string>& ov,
              std::ostream& out) {
  auto cfg = make_preset(default_preset(model));
  cfg.preset = model + "_limit";
  if (model == "linear") cfg.model = ModelKind::Linear;
  for (const auto& o : ov) apply_override(cfg, o);
  if (n > 0) cfg.reference_n = n;
  cfg.validate();
  Field ref = reference_solution(cfg, cfg.reference_n);
  Grid1D g = make_grid(cfg, cfg.reference_n);
  auto m = make_model(cfg, g);
  std::vector<std::string> cols{"x"};
  std::vector<std::vector<double>> vals{ref.grid().nodes()};
  auto names = m->component_names();
  for (int k = 0; k < ref.components(); ++k) {
    cols.push_back(names.at(static_cast<size_t>(m->conserved().at(static_cast<size_t>(k)))));
    auto s = ref[k];
    vals.emplace_back(s.begin(), s.end());
  }
  if (path.empty()) {
    write_csv(out, cols, vals);
  } else {
    std::ofstream os(path);
    if (!os) throw UsageError("cannot write " + path);
    write_csv(os, cols, vals);
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Asymptotic-preserving IMEX solvers for relaxation systems"};
  app.require_subcommand(1);

  std::string preset, csv_path, out_dir, name, model;
  std::vector<std::string> overrides;
  int n = 0;
  double tol = 1e-12;

  auto* converge = app.add_subcommand("converge", "grid-refinement study for a preset, CSV output");
  converge->add_option("preset", preset, "preset name")->required();
  converge->add_option("--out", csv_path, "CSV file (default: stdout)");
  converge->add_option("--override", overrides, "key=value")->take_all()->allow_extra_args();

  auto* run = app.add_subcommand("run", "single run writing solution and reference CSVs");
  run->add_option("preset", preset, "preset name")->required();
  run->add_option("--out", out_dir, "output directory")->default_val(".");
  run->add_option("--override", overrides, "key=value")->take_all()->allow_extra_args();

  auto* tableau = app.add_subcommand("tableau", "tableau utilities");
  tableau->require_subcommand(1);
  auto* check = tableau->add_subcommand("check", "classification, GSA flag and order report");
  check->add_option("tableau", name, "builtin name or tableau file")->required();
  check->add_option("--tol", tol, "classification tolerance");

  auto* limit = app.add_subcommand("limit", "limit-equation reference solve only");
  limit->add_option("model", model, "kl, linear, euler or m1")->required();
  limit->add_option("--n", n, "cells");
  limit->add_option("--out", csv_path, "CSV file (default: stdout)");
  limit->add_option("--override", overrides, "key=value")->take_all()->allow_extra_args();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*converge) return cmd_converge(preset, csv_path, overrides, out);
    if (*run) return cmd_run(preset, out_dir, overrides, out);
    if (*check) return cmd_tableau_check(name, tol, out);
    if (*limit) return cmd_limit(model, n, csv_path, overrides, out);
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const NewtonFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const ModelDomainError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const SingularSystemError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int cli_main(int argc, const char* const* argv) { return cli_main(argc, argv, std::cout, std::cerr); }

}  // namespace relaxflow
