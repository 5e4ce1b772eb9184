// SPDX-License-Identifier: Apache-2.0
//
// Linear preconditioner L = w_id I - w_p Lap_h + w_bi Lap_h^2, the
// linearization of the implicit operator with the 4-Laplacian replaced by the
// standard Laplacian. On the periodic grid it is diagonal in the discrete
// Fourier basis with symbol
//
//   lambda(l,q) = w_id - w_p sigma(l,q) + w_bi sigma(l,q)^2,
//   sigma(l,q)  = -(4/h^2) (sin^2(pi l/m) + sin^2(pi q/m)),
//
// so solve_L is exact up to rounding.

#ifndef SSFILM_PRECOND_HPP
#define SSFILM_PRECOND_HPP

#include <memory>
#include <vector>

#include "ssfilm/energy.hpp"
#include "ssfilm/grid.hpp"

namespace ssfilm {

/// Eigenvalue of the 5-point Laplacian for Fourier mode (l, q).
double laplacian_symbol(const GridSpec& grid, int l, int q);

class PrecondSymbol {
 public:
  PrecondSymbol(const GridSpec& grid, const OperatorWeights& weights);

  const GridSpec& grid() const { return grid_; }
  const OperatorWeights& weights() const { return weights_; }

  /// lambda(l, q) for 0 <= l, q < m.
  double operator()(int l, int q) const {
    return lambda_[static_cast<std::size_t>(l) * grid_.m() + q];
  }
  double min_value() const;

  /// Inverse of apply_L via forward DFT, division by lambda, inverse DFT.
  /// Safe to call concurrently; scratch buffers are per thread.
  CellField solve(const CellField& r) const;
  void solve(const CellField& r, CellField& out) const;

 private:
  struct Plans;

  GridSpec grid_;
  OperatorWeights weights_;
  std::vector<double> lambda_;
  std::vector<double> inv_half_;  // 1/(m^2 lambda) on the r2c half spectrum
  std::shared_ptr<const Plans> plans_;
};

/// Symbol for the BDF2 preconditioner (3/2, s, A s^2 + s eps^2).
PrecondSymbol build_symbol(const GridSpec& grid, const SchemeParams& params);

/// Physical-space application (stencils only, no transforms).
CellField apply_linear(const CellField& psi, const OperatorWeights& w);
CellField apply_L(const CellField& psi, const SchemeParams& params);

inline CellField solve_L(const CellField& r, const PrecondSymbol& symbol) {
  return symbol.solve(r);
}

}  // namespace ssfilm

#endif  // SSFILM_PRECOND_HPP
