// SPDX-License-Identifier: Apache-2.0
//
// Preconditioned steepest descent (PSD) and preconditioned nonlinear
// conjugate gradient (PNCG1, PNCG2) solvers for N[phi] = f.
//
// Each iteration preconditions the residual, g = L^{-1}(f - N[phi]), builds a
// search direction from g and minimizes the convex objective exactly along it
// (the derivative along the line is a cubic with closed-form coefficients).
//
//   PSD    d = g
//   PNCG1  d = g + max(0, beta_PR) d_prev
//   PNCG2  d = g + max(0, min(beta_FR, beta_PR)) d_prev
//
// with beta_FR = <g+, g+>/<g, g> and beta_PR = <g+, g+ - g>/<g, g>.

#ifndef SSFILM_SOLVERS_HPP
#define SSFILM_SOLVERS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "ssfilm/energy.hpp"
#include "ssfilm/grid.hpp"
#include "ssfilm/precond.hpp"

namespace ssfilm {

enum class SolverKind { PSD, PNCG1, PNCG2 };
enum class LineSearchKind { ExactCubic, Secant };

/// How the beta inner products pair vectors: the literal <g, g> on
/// preconditioned residuals, or the preconditioned-CG pairing <r, g>.
enum class BetaPairing { Preconditioned, ResidualPreconditioned };

const char* to_string(SolverKind kind);
/// Accepts "psd", "pncg1", "pncg2" (case-insensitive). Throws std::invalid_argument.
SolverKind parse_solver_kind(const std::string& name);

struct SolverConfig {
  SolverKind kind = SolverKind::PSD;
  double rel_tol = 1e-9;
  double abs_tol = 1e-13;
  int max_iter = 500;
  LineSearchKind line_search = LineSearchKind::ExactCubic;
  double secant_tol = 1e-12;
  int secant_max = 50;
  BetaPairing pairing = BetaPairing::Preconditioned;

  void validate() const;
};

struct SolveStats {
  int iterations = 0;
  double final_rel_residual = 0.0;
  /// ||f - N[phi^n]||_2 / ||f||_2 for n = 0..iterations
  std::vector<double> residual_history;
  std::vector<double> alphas;
  std::vector<double> betas;
  /// Times a PNCG direction failed the descent test and was reset to g.
  int restarts = 0;
  bool converged = false;
};

struct SolveResult {
  CellField phi;
  SolveStats stats;
};

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LineSearchResult {
  double alpha = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Root of the strictly increasing cubic q. Throws std::invalid_argument for a
/// zero direction (all coefficients zero) or a non-increasing cubic.
/// Secant mode reports converged = false with its best iterate when it runs
/// out of iterations.
LineSearchResult line_search(const CubicCoeffs& q, const SolverConfig& config);

struct BetaPair {
  double fletcher_reeves;
  double polak_ribiere;
};
/// beta_FR, beta_PR from the new and previous preconditioned residuals.
BetaPair conjugate_betas(double new_dot_new, double new_dot_old, double old_dot_old);
/// Variant-specific beta (0 for PSD).
double select_beta(SolverKind kind, const BetaPair& b);

/// Solve sys from the supplied initial iterate. Non-convergence within
/// max_iter returns the last iterate with stats.converged = false; NaN/Inf
/// in the residual throws SolverFailure.
SolveResult solve(const ImplicitSystem& sys, CellField phi_init, const PrecondSymbol& symbol,
                  const SolverConfig& config);

}  // namespace ssfilm

#endif  // SSFILM_SOLVERS_HPP
