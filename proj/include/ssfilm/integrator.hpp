// SPDX-License-Identifier: Apache-2.0
//
// BDF2 time stepping for the slope-selection thin-film equation
//
//   (3 phi^{k+1} - 4 phi^k + phi^{k-1}) / (2s)
//     = div_v(|grad_v phi^{k+1}|^2 grad_v phi^{k+1}) - Lap_v(2 phi^k - phi^{k-1})
//       - A s Lap^2 (phi^{k+1} - phi^k) - eps^2 Lap^2 phi^{k+1}
//
// The second history level is produced by one first-order convex-splitting
// step (implicit 4-Laplacian and surface diffusion, explicit skew Laplacian).

#ifndef SSFILM_INTEGRATOR_HPP
#define SSFILM_INTEGRATOR_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ssfilm/energy.hpp"
#include "ssfilm/grid.hpp"
#include "ssfilm/precond.hpp"
#include "ssfilm/solvers.hpp"

namespace ssfilm {

struct StepRecord {
  int k = 0;
  double t = 0.0;
  double energy = 0.0;           // F_h(phi^k)
  double modified_energy = 0.0;  // F~_h(phi^k, phi^{k-1})
  double mass = 0.0;             // mean(phi^k)
  double roughness = 0.0;
  double h2_norm = 0.0;
  int iterations = 0;
  double wall_ms = 0.0;
};

struct StepperState {
  CellField current;   // phi^k
  CellField previous;  // phi^{k-1}
  int k = 0;
  double t = 0.0;
  double energy = 0.0;           // F_h(current)
  double modified_energy = 0.0;  // F~_h(current, previous)
};

class StabilityFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AssertMode { Abort, Warn };

struct IntegratorOptions {
  /// Allowed increase of F~_h per step, relative to |F~_h|, in units of the
  /// solver rel_tol.
  double energy_slack = 10.0;
  double mean_tol = 1e-11;
  AssertMode on_violation = AssertMode::Abort;
  /// Treat an unconverged implicit solve as a failure.
  bool require_convergence = true;
};

class TimeIntegrator {
 public:
  using Observer = std::function<void(const StepperState&, const StepRecord&)>;

  TimeIntegrator(const GridSpec& grid, const SchemeParams& params, const SolverConfig& solver,
                 IntegratorOptions options = {});

  const GridSpec& grid() const { return grid_; }
  const SchemeParams& params() const { return params_; }
  const SolverConfig& solver_config() const { return solver_; }

  /// Centers phi0 and takes one first-order step to obtain phi^1.
  std::pair<StepperState, StepRecord> bootstrap(CellField phi0);
  /// Uses a caller-supplied second level instead of the first-order step.
  std::pair<StepperState, StepRecord> from_history(CellField phi0, CellField phi1);

  /// One BDF2 step, warm-started at 2 phi^k - phi^{k-1}. Throws
  /// SolverFailure, or StabilityFailure when the energy-decay or mass check
  /// fails in Abort mode.
  std::pair<StepperState, StepRecord> step(const StepperState& state);

  /// Bootstrap followed by floor(T/s) - 1 steps; records at t = s, 2s, ...
  std::vector<StepRecord> run(CellField phi0, double final_time,
                              const Observer& observer = nullptr);

  /// Statistics of the most recent implicit solve.
  const SolveStats& last_solve() const { return last_solve_; }
  /// Number of steps that tripped a check in Warn mode.
  int violations() const { return violations_; }

 private:
  void update_energies(StepperState& s) const;
  StepRecord make_record(const StepperState& s, int iterations, double wall_ms) const;
  SolveResult checked_solve(const ImplicitSystem& sys, CellField init, const PrecondSymbol& sym);
  void report(const std::string& message);

  GridSpec grid_;
  SchemeParams params_;
  SolverConfig solver_;
  IntegratorOptions options_;
  PrecondSymbol bdf2_symbol_;
  std::optional<PrecondSymbol> bdf1_symbol_;
  SolveStats last_solve_;
  int violations_ = 0;
};

/// Number of records produced by run(): floor(T/s), tolerant of rounding in T/s.
long long step_count(double final_time, double dt);

}  // namespace ssfilm

#endif  // SSFILM_INTEGRATOR_HPP
