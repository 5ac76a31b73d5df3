#include <charconv>
#include <sstream>

#include "relaxflow/harness.hpp"

namespace relaxflow {

ImexPair ExperimentConfig::pair() const {
  return tableau_file.empty() ? resolve_pair(scheme) : load_tableau_file(tableau_file);
}

void ExperimentConfig::validate() const {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (model == ModelKind::KawashimaLeFloch && !(m > 0.0)) throw ConfigError("m must be positive");
  if (!(t_final >= 0.0)) throw ConfigError("t_final must be non-negative");
  if (!(x_max > x_min)) throw ConfigError("x_max must exceed x_min");
  if (!(dt.value > 0.0) || !(reference_dt.value > 0.0)) throw ConfigError("time step values must be positive");
  if (n < 1) throw ConfigError("n must be positive");
  for (int v : n_list)
    if (v < 1) throw ConfigError("n_list entries must be positive");
  if (snapshots < 0) throw ConfigError("snapshots must be non-negative");
  if (centering == Centering::Vertex && boundary != Boundary::Periodic)
    throw ConfigError("vertex centering needs periodic boundaries");
  if ((model == ModelKind::EulerFriction || model == ModelKind::EulerM1) &&
      kind != SplittingKind::PenalizedBR)
    throw ConfigError("euler models are only available with the penalized-br splitting");
  pair().validate();
}

std::vector<std::string> preset_names() {
  return {"kl_table1a", "kl_table1b", "kl_table2", "kl_table3", "kl_fig3",
          "kl_fig4",    "kl_fig5",    "euler_fig1", "m1_fig2"};
}

namespace {

std::vector<int> doubling(int first, int count) {
  std::vector<int> out;
  for (int i = 0, n = first; i < count; ++i, n *= 2) out.push_back(n);
  return out;
}

ExperimentConfig kl_base(const std::string& name) {
  ExperimentConfig c;
  c.preset = name;
  c.model = ModelKind::KawashimaLeFloch;
  c.eps = 1e-4;
  c.t_final = 1.0;
  c.boundary = Boundary::Periodic;
  c.n_list = doubling(12, 6);
  return c;
}

// m = 0.5, C = 1: one period.
ExperimentConfig kl_sublinear(const std::string& name) {
  ExperimentConfig c = kl_base(name);
  c.m = 0.5;
  c.dt = DtPolicy::parabolic(1.0);
  c.reference_n = 768;
  c.reference_dt = DtPolicy::parabolic(0.25);
  return c;
}

// m = 2, C = 0.025: two periods.
ExperimentConfig kl_superlinear(const std::string& name) {
  ExperimentConfig c = kl_base(name);
  c.m = 2.0;
  c.dt = DtPolicy::parabolic(0.025);
  c.x_min = -2.0 * M_PI;
  c.x_max = 2.0 * M_PI;
  c.centering = Centering::Vertex;
  c.reference_n = 768;
  c.reference_dt = DtPolicy::parabolic(0.025);
  return c;
}

void set_penalized_ssp(ExperimentConfig& c, double courant) {
  c.scheme = "SSP332";
  c.kind = SplittingKind::PenalizedBPR;
  c.form = StageForm::SemiImplicit;
  c.mu_rule = MuRule::Exp;
  c.dt = DtPolicy::hyperbolic(courant);
}

}  // namespace

ExperimentConfig make_preset(const std::string& name) {
  if (name == "kl_table1a" || name == "kl_table2") return kl_sublinear(name);
  if (name == "kl_table1b") return kl_superlinear(name);
  if (name == "kl_table3") {
    ExperimentConfig c = kl_base(name);
    c.m = 2.0;
    set_penalized_ssp(c, 0.06);
    c.well_prepared = true;
    c.reference_n = 768;
    c.reference_dt = DtPolicy::parabolic(0.025);
    return c;
  }
  if (name == "kl_fig3") {
    ExperimentConfig c = kl_sublinear(name);
    c.n_list.clear();
    c.n = 96;
    c.reference_n = 384;
    return c;
  }
  if (name == "kl_fig4" || name == "kl_fig5") {
    ExperimentConfig c = kl_superlinear(name);
    c.n_list.clear();
    c.n = 96;
    c.t_final = 1.77;
    c.reference_n = 384;
    c.snapshots = 99;
    if (name == "kl_fig5") set_penalized_ssp(c, 0.25);
    return c;
  }
  if (name == "euler_fig1" || name == "m1_fig2") {
    ExperimentConfig c;
    c.preset = name;
    c.eps = 1e-3;
    c.kind = SplittingKind::PenalizedBR;
    c.mu_rule = MuRule::Step;
    c.dt = DtPolicy::hyperbolic(0.1);
    c.boundary = Boundary::ZeroGradient;
    c.centering = Centering::Cell;
    c.reference_n = 600;
    c.reference_dt = DtPolicy::fixed(5e-5);
    c.x_min = 0.0;
    c.euler.eta = 2.0;
    if (name == "euler_fig1") {
      c.model = ModelKind::EulerFriction;
      c.euler.cp = 1.0;
      c.x_max = 3.0;
      c.n = 300;
      c.t_final = 2e4 * c.eps;
    } else {
      c.model = ModelKind::EulerM1;
      c.euler.cp = 1e-3;
      c.euler.kappa = 2.0;
      c.euler.sigma = 1.0;
      c.x_max = 1.0;
      c.n = 100;
      c.t_final = 0.029;
    }
    return c;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

namespace {

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("override " + key + ": '" + v + "' is not a number");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("override " + key + ": '" + v + "' is not an integer");
  return out;
}

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class F>
auto wrap(const std::string& key, F&& parse) {
  try {
    return parse();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("override " + key + ": " + e.what());
  }
}

}  // namespace

void apply_override(ExperimentConfig& c, const std::string& key, const std::string& v) {
  if (key == "model") c.model = wrap(key, [&] { return parse_model_kind(v); });
  else if (key == "eps") c.eps = to_double(key, v);
  else if (key == "m") c.m = to_double(key, v);
  else if (key == "scheme") { c.scheme = v; c.tableau_file.clear(); }
  else if (key == "tableau_file" || key == "tableau") c.tableau_file = v;
  else if (key == "kind") c.kind = wrap(key, [&] { return parse_splitting_kind(v); });
  else if (key == "form") c.form = wrap(key, [&] { return parse_stage_form(v); });
  else if (key == "mu_rule") c.mu_rule = wrap(key, [&] { return parse_mu_rule(v); });
  else if (key == "differencing") c.differencing = wrap(key, [&] { return parse_differencing(v); });
  else if (key == "dt") c.dt = wrap(key, [&] { return parse_dt_policy(v); });
  else if (key == "C") c.dt.value = to_double(key, v);
  else if (key == "t_final" || key == "T") c.t_final = to_double(key, v);
  else if (key == "n_list" || key == "N") {
    std::vector<int> ns;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) ns.push_back(to_int(key, item));
    c.n_list = ns;
  } else if (key == "n") c.n = to_int(key, v);
  else if (key == "x_min") c.x_min = to_double(key, v);
  else if (key == "x_max") c.x_max = to_double(key, v);
  else if (key == "periods") {
    const int p = to_int(key, v);
    if (p < 1) throw ConfigError("override periods: must be positive");
    c.x_min = -p * M_PI;
    c.x_max = p * M_PI;
  } else if (key == "boundary") {
    if (v == "periodic") c.boundary = Boundary::Periodic;
    else if (v == "zero-gradient") c.boundary = Boundary::ZeroGradient;
    else throw ConfigError("override boundary: unknown value '" + v + "'");
  } else if (key == "centering") {
    if (v == "cell") c.centering = Centering::Cell;
    else if (v == "vertex") c.centering = Centering::Vertex;
    else throw ConfigError("override centering: unknown value '" + v + "'");
  } else if (key == "reference_n") c.reference_n = to_int(key, v);
  else if (key == "reference_dt") c.reference_dt = wrap(key, [&] { return parse_dt_policy(v); });
  else if (key == "cp") c.euler.cp = to_double(key, v);
  else if (key == "eta") c.euler.eta = to_double(key, v);
  else if (key == "kappa") c.euler.kappa = to_double(key, v);
  else if (key == "sigma") c.euler.sigma = to_double(key, v);
  else if (key == "snapshots") c.snapshots = to_int(key, v);
  else if (key == "well_prepared") {
    if (v == "true" || v == "1") c.well_prepared = true;
    else if (v == "false" || v == "0") c.well_prepared = false;
    else throw ConfigError("override well_prepared: expected true or false");
  }
  else throw ConfigError("unknown override key '" + key + "'");
}

void apply_override(ExperimentConfig& c, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  apply_override(c, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::string serialize(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "preset=" << c.preset << '\n'
     << "model=" << to_string(c.model) << '\n'
     << "eps=" << num(c.eps) << '\n'
     << "m=" << num(c.m) << '\n'
     << "scheme=" << c.scheme << '\n'
     << "tableau_file=" << c.tableau_file << '\n'
     << "kind=" << to_string(c.kind) << '\n'
     << "form=" << to_string(c.form) << '\n'
     << "mu_rule=" << to_string(c.mu_rule) << '\n'
     << "differencing=" << to_string(c.differencing) << '\n'
     << "dt=" << to_string(c.dt) << '\n'
     << "t_final=" << num(c.t_final) << '\n'
     << "n_list=";
  for (size_t i = 0; i < c.n_list.size(); ++i) os << (i ? "," : "") << c.n_list[i];
  os << '\n'
     << "n=" << c.n << '\n'
     << "x_min=" << num(c.x_min) << '\n'
     << "x_max=" << num(c.x_max) << '\n'
     << "boundary=" << to_string(c.boundary) << '\n'
     << "centering=" << to_string(c.centering) << '\n'
     << "reference_n=" << c.reference_n << '\n'
     << "reference_dt=" << to_string(c.reference_dt) << '\n'
     << "cp=" << num(c.euler.cp) << '\n'
     << "eta=" << num(c.euler.eta) << '\n'
     << "kappa=" << num(c.euler.kappa) << '\n'
     << "sigma=" << num(c.euler.sigma) << '\n'
     << "snapshots=" << c.snapshots << '\n'
     << "well_prepared=" << (c.well_prepared ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace relaxflow
