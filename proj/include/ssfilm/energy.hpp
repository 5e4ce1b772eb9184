// SPDX-License-Identifier: Apache-2.0
//
// Discrete energies and the nonlinear system solved at every implicit step.
//
// The BDF2 step (multiplied through by the time step s) reads
//
//   N[phi] = 3/2 phi - s div_v(|grad_v phi|^2 grad_v phi) + (A s^2 + s eps^2) Lap^2 phi = f
//   f      = (4 phi^k - phi^{k-1})/2 - s Lap_v(2 phi^k - phi^{k-1}) + A s^2 Lap^2 phi^k
//
// N is the gradient of the strictly convex objective
//
//   J(phi) = 3/4 ||phi||^2 + s/4 ||grad_v phi||_4^4 + (A s^2 + s eps^2)/2 ||Lap phi||^2 - (f, phi).
//
// The same structure with weights (1, s, s eps^2) describes the first-order
// step used to bootstrap the two-level history, so the system is written in
// terms of three operator weights.

#ifndef SSFILM_ENERGY_HPP
#define SSFILM_ENERGY_HPP

#include "ssfilm/grid.hpp"

namespace ssfilm {

struct SchemeParams {
  double epsilon = 0.1;
  double A = 1.0 / 16.0;  // stabilization; energy decay is proven for A >= 1/16
  double dt = 1e-3;
  bool allow_small_A = false;

  /// Throws std::invalid_argument on non-positive epsilon/dt, negative A, or
  /// A < 1/16 without allow_small_A. Prints a warning when the override is used.
  void validate() const;
};

/// w_id * phi - w_p * p_laplacian4(phi) + w_bi * biharmonic(phi)
struct OperatorWeights {
  double identity;
  double p_laplacian;
  double biharmonic;

  /// (3/2, s, A s^2 + s eps^2)
  static OperatorWeights bdf2(const SchemeParams& p);
  /// (1, s, s eps^2)
  static OperatorWeights bdf1(const SchemeParams& p);
};

struct ImplicitSystem {
  OperatorWeights weights;
  CellField f;
};

/// Scratch storage reused across operator evaluations of one grid.
struct Workspace {
  explicit Workspace(const GridSpec& grid);
  VertexVectorField g;
  VertexVectorField e;
  CellField a;
  CellField b;
};

/// F_h = 1/4 ||grad_v phi||_4^4 - 1/2 ||grad_v phi||_2^2 + eps^2/2 ||Lap phi||_2^2
double energy(const CellField& phi, const SchemeParams& params);

/// ||phi - psi||^2/(4s) + 1/2 ||grad_h (phi - psi)||^2
double history_penalty(const CellField& phi, const CellField& psi, const SchemeParams& params);

/// F_h(phi) + history_penalty(phi, psi)
double modified_energy(const CellField& phi, const CellField& psi, const SchemeParams& params);

void apply_nonlinear(const CellField& phi, const OperatorWeights& w, CellField& out,
                     Workspace& ws);
CellField apply_nonlinear(const CellField& phi, const OperatorWeights& w);

/// The BDF2 operator N.
CellField apply_N(const CellField& phi, const SchemeParams& params);

/// Right-hand side f of the BDF2 step from the history (phi^k, phi^{k-1}).
CellField assemble_rhs(const CellField& phi_k, const CellField& phi_km1,
                       const SchemeParams& params);
ImplicitSystem make_bdf2_system(const CellField& phi_k, const CellField& phi_km1,
                                const SchemeParams& params);
/// First-order step from phi0: f = phi0 - s Lap_v phi0.
ImplicitSystem make_bdf1_system(const CellField& phi0, const SchemeParams& params);

/// f - N[phi]
CellField residual(const CellField& phi, const ImplicitSystem& sys);
void residual(const CellField& phi, const ImplicitSystem& sys, CellField& out, Workspace& ws);

/// Convex objective whose gradient is N[phi] - f.
double objective(const CellField& phi, const ImplicitSystem& sys);

/// q(alpha) = d/dalpha objective(phi + alpha d) = a0 + a1 alpha + a2 alpha^2 + a3 alpha^3
struct CubicCoeffs {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;

  double operator()(double alpha) const { return a0 + alpha * (a1 + alpha * (a2 + alpha * a3)); }
  double derivative(double alpha) const { return a1 + alpha * (2.0 * a2 + 3.0 * alpha * a3); }
};

/// Cubic line-search coefficients along d. `r` is the residual f - N[phi]
/// (so a0 = -(r, d)); the overload without it recomputes the residual.
CubicCoeffs line_coeffs(const CellField& phi, const CellField& d, const CellField& r,
                        const OperatorWeights& w, Workspace& ws);
CubicCoeffs line_coeffs(const CellField& phi, const CellField& d, const ImplicitSystem& sys);

}  // namespace ssfilm

#endif  // SSFILM_ENERGY_HPP
