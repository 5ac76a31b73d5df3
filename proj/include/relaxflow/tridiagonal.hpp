#pragma once

#include <stdexcept>
#include <vector>

#include "relaxflow/grid.hpp"
#include "relaxflow/operators.hpp"

namespace relaxflow {

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Row j: lower[j] x_{j-1} + diag[j] x_j + upper[j] x_{j+1}.  When cyclic,
// lower[0] couples x_{n-1} and upper[n-1] couples x_0; otherwise they are ignored.
struct TridiagonalSystem {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  bool cyclic = false;

  int size() const { return static_cast<int>(diag.size()); }
  std::vector<double> apply(CSpan x) const;
  // Thomas sweep; Sherman-Morrison correction when cyclic.
  std::vector<double> solve(CSpan rhs) const;
};

// Matrix of u -> u - sigma * flux_divergence(u, w).
TridiagonalSystem assemble_diffusion_system(CSpan face_weights, double sigma, const Grid1D& g);

// Same with power weights (|u*_x| + tol)^alpha frozen from u_star.
TridiagonalSystem assemble_frozen_diffusion_system(CSpan u_star, double alpha, double tol,
                                                   double sigma, const Grid1D& g);

}  // namespace relaxflow
