#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaxflow {

enum class Boundary { Periodic, ZeroGradient };

// Cell: x_j = x_min + (j + 1/2) dx.  Vertex (periodic only): x_j = x_min + j dx.
enum class Centering { Cell, Vertex };

// Ghost-value symmetry under ZeroGradient: Even copies, Odd reflects the sign
// (used for momentum-like components at a reflecting wall).
enum class Parity { Even, Odd };

class Grid1D {
 public:
  Grid1D(int n, double x_min, double x_max, Boundary boundary,
         Centering centering = Centering::Cell);

  int size() const { return n_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double dx() const { return dx_; }
  Boundary boundary() const { return boundary_; }
  Centering centering() const { return centering_; }

  double x(int j) const;
  std::vector<double> nodes() const;

  // Value at index j in [-2, n+1], ghosts filled by the boundary rule.
  double at(std::span<const double> f, int j, Parity parity = Parity::Even) const {
    if (j >= 0 && j < n_) return f[static_cast<size_t>(j)];
    if (boundary_ == Boundary::Periodic) return f[static_cast<size_t>((j % n_ + n_) % n_)];
    int mirror = j < 0 ? -1 - j : 2 * n_ - 1 - j;
    double v = f[static_cast<size_t>(mirror)];
    return parity == Parity::Even ? v : -v;
  }

  bool operator==(const Grid1D&) const = default;

 private:
  int n_;
  double x_min_;
  double x_max_;
  double dx_;
  Boundary boundary_;
  Centering centering_;
};

std::string to_string(Boundary b);
std::string to_string(Centering c);

// Multi-component state; component-major storage.
class Field {
 public:
  Field(const Grid1D& grid, int components);

  const Grid1D& grid() const { return grid_; }
  int components() const { return k_; }
  int size() const { return grid_.size(); }

  std::span<double> operator[](int c) {
    return {values_.data() + static_cast<size_t>(c) * grid_.size(), static_cast<size_t>(grid_.size())};
  }
  std::span<const double> operator[](int c) const {
    return {values_.data() + static_cast<size_t>(c) * grid_.size(), static_cast<size_t>(grid_.size())};
  }

  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  bool all_finite() const;
  void fill(double v);
  // this += s * other
  void axpy(double s, const Field& other);

 private:
  Grid1D grid_;
  int k_;
  std::vector<double> values_;
};

}  // namespace relaxflow
