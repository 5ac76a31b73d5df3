#include "relaxflow/grid.hpp"

#include <cmath>

namespace relaxflow {

Grid1D::Grid1D(int n, double x_min, double x_max, Boundary boundary, Centering centering)
    : n_(n), x_min_(x_min), x_max_(x_max), dx_((x_max - x_min) / n), boundary_(boundary),
      centering_(centering) {
  if (n < 3) throw std::invalid_argument("grid needs at least 3 cells");
  if (!(x_max > x_min)) throw std::invalid_argument("grid needs x_max > x_min");
  if (centering == Centering::Vertex && boundary != Boundary::Periodic)
    throw std::invalid_argument("vertex centering requires periodic boundaries");
}

double Grid1D::x(int j) const {
  double offset = centering_ == Centering::Cell ? 0.5 : 0.0;
  return x_min_ + (j + offset) * dx_;
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(static_cast<size_t>(n_));
  for (int j = 0; j < n_; ++j) xs[static_cast<size_t>(j)] = x(j);
  return xs;
}

std::string to_string(Boundary b) { return b == Boundary::Periodic ? "periodic" : "zero-gradient"; }
std::string to_string(Centering c) { return c == Centering::Cell ? "cell" : "vertex"; }

Field::Field(const Grid1D& grid, int components)
    : grid_(grid), k_(components), values_(static_cast<size_t>(grid.size()) * components, 0.0) {
  if (components <= 0) throw std::invalid_argument("field needs at least one component");
}

bool Field::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

void Field::fill(double v) {
  for (double& x : values_) x = v;
}

void Field::axpy(double s, const Field& other) {
  const double* o = other.values_.data();
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += s * o[i];
}

}  // namespace relaxflow
