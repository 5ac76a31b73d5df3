#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace relaxflow {

class TableauError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TableauParseError : public TableauError {
 public:
  enum class Kind { MalformedDimension, NonNumericEntry, TriangularityViolation };

  TableauParseError(Kind kind, int line, const std::string& what);

  Kind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

struct ButcherTableau {
  int stages = 0;
  std::vector<double> a;  // row-major, stages x stages
  std::vector<double> b;
  std::vector<double> c;

  ButcherTableau() = default;
  ButcherTableau(const std::vector<std::vector<double>>& rows, std::vector<double> b,
                 std::vector<double> c);

  double operator()(int i, int j) const { return a[static_cast<size_t>(i * stages + j)]; }
  double& operator()(int i, int j) { return a[static_cast<size_t>(i * stages + j)]; }

  bool strictly_lower() const;
  bool lower() const;
  // max_i |c_i - sum_j a_ij|
  double row_sum_defect() const;

  bool operator==(const ButcherTableau&) const = default;
};

struct ImexPair {
  ButcherTableau explicit_part;
  ButcherTableau implicit_part;
  std::string name;

  int stages() const { return explicit_part.stages; }
  // Throws TableauError when the structural invariants do not hold.
  void validate() const;
  // Human-readable warnings, e.g. c != A*1.
  std::vector<std::string> warnings(double tol = 1e-14) const;
  bool weights_match(double tol = 0.0) const;
};

enum class SchemeClass { TypeA, TypeCK, TypeARS, Unclassified };

struct SchemeType {
  SchemeClass kind = SchemeClass::Unclassified;
  bool invertible_a = false;
  bool zero_first_row = false;
  bool zero_first_column = false;
  std::string diagnostics;
};

std::string to_string(SchemeClass kind);

struct OrderCondition {
  std::string tableau;  // "explicit" or "implicit"
  std::string condition;
  int order = 1;
  double residual = 0.0;
};

struct OrderReport {
  int requested = 1;
  std::vector<OrderCondition> conditions;
  bool coupling_waived = false;
  std::string note;

  double max_residual(int up_to_order) const;
  // Largest p <= requested whose classical and coupling conditions all hold.
  int verified_order(double tol = 1e-12) const;
};

ImexPair builtin_pair(std::string_view name);
std::vector<std::string> builtin_names();

ImexPair parse_tableau(std::string_view text);
ImexPair load_tableau_file(const std::string& path);
// Builtin name or path to a tableau file.
ImexPair resolve_pair(const std::string& name_or_path);

// 17 significant digits; parse(serialize(p)) reproduces p bitwise.
std::string serialize_tableau(const ImexPair& pair);

// tol is relative to max|a_ij| of the implicit tableau.
SchemeType classify(const ImexPair& pair, double tol = 1e-12);
bool is_globally_stiffly_accurate(const ImexPair& pair, double tol = 1e-14);
OrderReport check_order(const ImexPair& pair, int p);

}  // namespace relaxflow
