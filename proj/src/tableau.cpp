#include "relaxflow/tableau.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace relaxflow {

namespace {

std::string parse_kind_label(TableauParseError::Kind kind) {
  switch (kind) {
    case TableauParseError::Kind::MalformedDimension: return "malformed-dimension";
    case TableauParseError::Kind::NonNumericEntry: return "non-numeric-entry";
    case TableauParseError::Kind::TriangularityViolation: return "triangularity-violation";
  }
  return "parse-error";
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Gaussian elimination with partial pivoting; true when every pivot exceeds thr.
bool nonsingular(std::vector<double> m, int n, double thr) {
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(m[i * n + k]) > std::abs(m[piv * n + k])) piv = i;
    if (!(std::abs(m[piv * n + k]) > thr)) return false;
    if (piv != k)
      for (int j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
    for (int i = k + 1; i < n; ++i) {
      double f = m[i * n + k] / m[k * n + k];
      for (int j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
    }
  }
  return true;
}

const std::map<std::string, std::string>& builtin_sources() {
  static const std::map<std::string, std::string> src = {
      {"ARS111", "ARS(1,1,1): forward/backward Euler pair of Ascher, Ruuth and Spiteri"},
      {"SP111", "SP(1,1,1): forward Euler with backward Euler, Pareschi and Russo"},
      {"MIDPOINT-ARS", "implicit-explicit midpoint rule written as an ARS-type pair"},
      {"SSP332",
       "SSP2(3,3,2): L. Pareschi, G. Russo, Implicit-explicit Runge-Kutta schemes and "
       "applications to hyperbolic systems with relaxation, J. Sci. Comput. 25 (2005)"},
  };
  return src;
}

}  // namespace

TableauParseError::TableauParseError(Kind kind, int line, const std::string& what)
    : TableauError(parse_kind_label(kind) + " at line " + std::to_string(line) + ": " + what),
      kind_(kind),
      line_(line) {}

ButcherTableau::ButcherTableau(const std::vector<std::vector<double>>& rows,
                               std::vector<double> b_in, std::vector<double> c_in)
    : stages(static_cast<int>(rows.size())), b(std::move(b_in)), c(std::move(c_in)) {
  if (stages <= 0) throw TableauError("tableau needs at least one stage");
  if (b.size() != rows.size() || c.size() != rows.size())
    throw TableauError("b and c must have one entry per stage");
  a.reserve(rows.size() * rows.size());
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw TableauError("A must be square");
    a.insert(a.end(), r.begin(), r.end());
  }
}

bool ButcherTableau::strictly_lower() const {
  for (int i = 0; i < stages; ++i)
    for (int j = i; j < stages; ++j)
      if ((*this)(i, j) != 0.0) return false;
  return true;
}

bool ButcherTableau::lower() const {
  for (int i = 0; i < stages; ++i)
    for (int j = i + 1; j < stages; ++j)
      if ((*this)(i, j) != 0.0) return false;
  return true;
}

double ButcherTableau::row_sum_defect() const {
  double worst = 0.0;
  for (int i = 0; i < stages; ++i) {
    double s = 0.0;
    for (int j = 0; j < stages; ++j) s += (*this)(i, j);
    worst = std::max(worst, std::abs(c[i] - s));
  }
  return worst;
}

void ImexPair::validate() const {
  if (explicit_part.stages != implicit_part.stages)
    throw TableauError("explicit and implicit stage counts differ");
  if (!explicit_part.strictly_lower())
    throw TableauError("explicit tableau is not strictly lower triangular");
  if (!implicit_part.lower()) throw TableauError("implicit tableau is not lower triangular");
}

std::vector<std::string> ImexPair::warnings(double tol) const {
  std::vector<std::string> out;
  if (explicit_part.row_sum_defect() > tol)
    out.push_back("explicit c differs from row sums of A by " + fmt17(explicit_part.row_sum_defect()));
  if (implicit_part.row_sum_defect() > tol)
    out.push_back("implicit c differs from row sums of A by " + fmt17(implicit_part.row_sum_defect()));
  return out;
}

bool ImexPair::weights_match(double tol) const {
  for (int i = 0; i < stages(); ++i)
    if (std::abs(explicit_part.b[i] - implicit_part.b[i]) > tol) return false;
  return true;
}

std::string to_string(SchemeClass kind) {
  switch (kind) {
    case SchemeClass::TypeA: return "A";
    case SchemeClass::TypeCK: return "CK";
    case SchemeClass::TypeARS: return "ARS";
    case SchemeClass::Unclassified: return "unclassified";
  }
  return "unclassified";
}

double OrderReport::max_residual(int up_to_order) const {
  double r = 0.0;
  for (const auto& c : conditions)
    if (c.order <= up_to_order) r = std::max(r, std::abs(c.residual));
  return r;
}

int OrderReport::verified_order(double tol) const {
  int best = 0;
  for (int p = 1; p <= requested; ++p) {
    if (max_residual(p) > tol) break;
    if (p > 1 && !coupling_waived) break;
    best = p;
  }
  return best;
}

ImexPair builtin_pair(std::string_view name) {
  ImexPair p;
  p.name = std::string(name);
  if (name == "ARS111") {
    p.explicit_part = ButcherTableau({{0, 0}, {1, 0}}, {1, 0}, {0, 1});
    p.implicit_part = ButcherTableau({{0, 0}, {0, 1}}, {0, 1}, {0, 1});
  } else if (name == "SP111") {
    p.explicit_part = ButcherTableau({{0}}, {1}, {0});
    p.implicit_part = ButcherTableau({{1}}, {1}, {1});
  } else if (name == "MIDPOINT-ARS") {
    p.explicit_part = ButcherTableau({{0, 0}, {0.5, 0}}, {0, 1}, {0, 0.5});
    p.implicit_part = ButcherTableau({{0, 0}, {0, 0.5}}, {0, 1}, {0, 0.5});
  } else if (name == "SSP332") {
    const double third = 1.0 / 3.0;
    p.explicit_part = ButcherTableau({{0, 0, 0}, {0.5, 0, 0}, {0.5, 0.5, 0}},
                                     {third, third, third}, {0, 0.5, 1});
    p.implicit_part = ButcherTableau({{0.25, 0, 0}, {0, 0.25, 0}, {third, third, third}},
                                     {third, third, third}, {0.25, 0.25, 1});
  } else {
    throw TableauError("unknown builtin scheme '" + std::string(name) + "'");
  }
  return p;
}

std::vector<std::string> builtin_names() { return {"ARS111", "SP111", "MIDPOINT-ARS", "SSP332"}; }

ImexPair parse_tableau(std::string_view text) {
  using Kind = TableauParseError::Kind;
  struct Line {
    int number;
    std::string content;
  };
  std::vector<Line> lines;
  std::string name = "file";
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      auto first = raw.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      auto last = raw.find_last_not_of(" \t\r");
      std::string s = raw.substr(first, last - first + 1);
      if (s[0] == '#') {
        auto body = s.substr(1);
        auto pos = body.find("name:");
        if (pos != std::string::npos && name == "file") {
          auto v = body.substr(pos + 5);
          auto f = v.find_first_not_of(' ');
          if (f != std::string::npos) name = v.substr(f);
        }
        continue;
      }
      lines.push_back({number, s});
    }
  }

  size_t cursor = 0;
  int last_line = lines.empty() ? 0 : lines.back().number;
  auto next = [&](const std::string& expecting) -> const Line& {
    if (cursor >= lines.size())
      throw TableauParseError(Kind::MalformedDimension, last_line + 1,
                              "unexpected end of input, expected " + expecting);
    return lines[cursor++];
  };

  const Line& header = next("'s <integer>'");
  int s = 0;
  {
    std::istringstream hs(header.content);
    std::string tag, extra;
    if (!(hs >> tag) || tag != "s" || !(hs >> s) || (hs >> extra) || s <= 0)
      throw TableauParseError(Kind::MalformedDimension, header.number,
                              "expected 's <positive integer>', got '" + header.content + "'");
  }

  auto read_row = [&](const std::string& what) {
    const Line& ln = next(what);
    std::vector<double> row;
    std::istringstream rs(ln.content);
    std::string tok;
    while (rs >> tok) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw TableauParseError(Kind::NonNumericEntry, ln.number, "cannot parse '" + tok + "'");
      row.push_back(v);
    }
    if (static_cast<int>(row.size()) != s)
      throw TableauParseError(Kind::MalformedDimension, ln.number,
                              "expected " + std::to_string(s) + " entries for " + what + ", got " +
                                  std::to_string(row.size()));
    return std::pair{row, ln.number};
  };

  auto read_block = [&](const std::string& keyword, bool strict) {
    const Line& kw = next("'" + keyword + "'");
    if (kw.content != keyword)
      throw TableauParseError(Kind::MalformedDimension, kw.number,
                              "expected '" + keyword + "', got '" + kw.content + "'");
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < s; ++i) {
      auto [row, number] = read_row(keyword + " matrix row " + std::to_string(i + 1));
      for (int j = strict ? i : i + 1; j < s; ++j)
        if (row[j] != 0.0)
          throw TableauParseError(Kind::TriangularityViolation, number,
                                  keyword + " entry (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + ") must be zero");
      rows.push_back(std::move(row));
    }
    auto b = read_row(keyword + " weights").first;
    auto c = read_row(keyword + " abscissae").first;
    return ButcherTableau(rows, b, c);
  };

  ImexPair pair;
  pair.name = name;
  pair.explicit_part = read_block("explicit", true);
  pair.implicit_part = read_block("implicit", false);
  if (cursor < lines.size())
    throw TableauParseError(Kind::MalformedDimension, lines[cursor].number,
                            "trailing content '" + lines[cursor].content + "'");
  pair.validate();
  return pair;
}

ImexPair load_tableau_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TableauError("cannot open tableau file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_tableau(ss.str());
}

ImexPair resolve_pair(const std::string& name_or_path) {
  auto names = builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end())
    return builtin_pair(name_or_path);
  return load_tableau_file(name_or_path);
}

std::string serialize_tableau(const ImexPair& pair) {
  std::ostringstream out;
  out << "# name: " << pair.name << "\n";
  auto it = builtin_sources().find(pair.name);
  if (it != builtin_sources().end()) out << "# source: " << it->second << "\n";
  out << "s " << pair.stages() << "\n";
  auto block = [&](const char* keyword, const ButcherTableau& t) {
    out << keyword << "\n";
    auto row = [&](auto get) {
      for (int j = 0; j < t.stages; ++j) out << (j ? " " : "") << fmt17(get(j));
      out << "\n";
    };
    for (int i = 0; i < t.stages; ++i) row([&](int j) { return t(i, j); });
    row([&](int j) { return t.b[j]; });
    row([&](int j) { return t.c[j]; });
  };
  block("explicit", pair.explicit_part);
  block("implicit", pair.implicit_part);
  return out.str();
}

SchemeType classify(const ImexPair& pair, double tol) {
  pair.validate();
  const ButcherTableau& A = pair.implicit_part;
  const int s = A.stages;
  double scale = 0.0;
  for (double v : A.a) scale = std::max(scale, std::abs(v));
  const double thr = tol * scale;

  SchemeType t;
  t.invertible_a = scale > 0.0 && nonsingular(A.a, s, thr);
  t.zero_first_row = true;
  for (int j = 0; j < s; ++j)
    if (std::abs(A(0, j)) > thr) t.zero_first_row = false;
  t.zero_first_column = true;
  for (int i = 1; i < s; ++i)
    if (std::abs(A(i, 0)) > thr) t.zero_first_column = false;

  bool trailing_invertible = false;
  if (s > 1 && scale > 0.0) {
    std::vector<double> sub;
    for (int i = 1; i < s; ++i)
      for (int j = 1; j < s; ++j) sub.push_back(A(i, j));
    trailing_invertible = nonsingular(sub, s - 1, thr);
  }

  if (t.invertible_a) {
    t.kind = SchemeClass::TypeA;
  } else if (t.zero_first_row && trailing_invertible) {
    t.kind = t.zero_first_column ? SchemeClass::TypeARS : SchemeClass::TypeCK;
  } else {
    t.kind = SchemeClass::Unclassified;
    std::ostringstream d;
    d << "implicit A is singular";
    if (!t.zero_first_row) d << " and its first row is nonzero";
    else if (s == 1) d << " and has no trailing block";
    else d << " and its trailing block is singular";
    t.diagnostics = d.str();
  }
  return t;
}

bool is_globally_stiffly_accurate(const ImexPair& pair, double tol) {
  const int s = pair.stages();
  const auto& E = pair.explicit_part;
  const auto& I = pair.implicit_part;
  for (int j = 0; j < s; ++j) {
    if (std::abs(I.b[j] - I(s - 1, j)) > tol) return false;
    if (std::abs(E.b[j] - E(s - 1, j)) > tol) return false;
  }
  return std::abs(I.c[s - 1] - 1.0) <= tol && std::abs(E.c[s - 1] - 1.0) <= tol;
}

OrderReport check_order(const ImexPair& pair, int p) {
  if (p < 1 || p > 3) throw TableauError("check_order supports p in {1,2,3}");
  OrderReport rep;
  rep.requested = p;
  auto add = [&](const char* which, const ButcherTableau& t) {
    const int s = t.stages;
    double sb = 0.0, sbc = 0.0, sbc2 = 0.0, sbac = 0.0;
    for (int i = 0; i < s; ++i) {
      sb += t.b[i];
      sbc += t.b[i] * t.c[i];
      sbc2 += t.b[i] * t.c[i] * t.c[i];
      for (int j = 0; j < s; ++j) sbac += t.b[i] * t(i, j) * t.c[j];
    }
    rep.conditions.push_back({which, "sum b = 1", 1, sb - 1.0});
    if (p >= 2) rep.conditions.push_back({which, "sum b c = 1/2", 2, sbc - 0.5});
    if (p >= 3) {
      rep.conditions.push_back({which, "sum b c^2 = 1/3", 3, sbc2 - 1.0 / 3.0});
      rep.conditions.push_back({which, "sum b A c = 1/6", 3, sbac - 1.0 / 6.0});
    }
  };
  add("explicit", pair.explicit_part);
  add("implicit", pair.implicit_part);
  rep.coupling_waived = pair.explicit_part.b == pair.implicit_part.b &&
                        pair.explicit_part.c == pair.implicit_part.c;
  if (rep.coupling_waived)
    rep.note = "c~ = c and b~ = b: no additional coupling conditions up to order 3";
  else
    rep.note = "c~ != c or b~ != b: coupling conditions beyond order 1 are NOT verified";
  return rep;
}

}  // namespace relaxflow
