// SPDX-License-Identifier: Apache-2.0

#include "ssfilm/integrator.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "ssfilm/diagnostics.hpp"
#include "ssfilm/operators.hpp"

namespace ssfilm {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

long long step_count(double final_time, double dt) {
  if (!(final_time > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("final time and time step must be positive");
  }
  return static_cast<long long>(std::floor(final_time / dt * (1.0 + 1e-12)));
}

TimeIntegrator::TimeIntegrator(const GridSpec& grid, const SchemeParams& params,
                               const SolverConfig& solver, IntegratorOptions options)
    : grid_(grid),
      params_(params),
      solver_(solver),
      options_(options),
      bdf2_symbol_((params.validate(), solver.validate(), build_symbol(grid, params))) {}

void TimeIntegrator::report(const std::string& message) {
  if (options_.on_violation == AssertMode::Abort) throw StabilityFailure(message);
  ++violations_;
  std::cerr << "warning: " << message << '\n';
}

SolveResult TimeIntegrator::checked_solve(const ImplicitSystem& sys, CellField init,
                                          const PrecondSymbol& sym) {
  SolveResult result = solve(sys, std::move(init), sym, solver_);
  if (!result.stats.converged && options_.require_convergence) {
    std::ostringstream msg;
    msg << "solver (" << to_string(solver_.kind) << ") did not converge in "
        << result.stats.iterations << " iterations, relative residual "
        << result.stats.final_rel_residual;
    throw SolverFailure(msg.str());
  }
  last_solve_ = result.stats;
  return result;
}

void TimeIntegrator::update_energies(StepperState& s) const {
  s.energy = energy(s.current, params_);
  s.modified_energy = s.energy + history_penalty(s.current, s.previous, params_);
}

StepRecord TimeIntegrator::make_record(const StepperState& s, int iterations,
                                       double wall_ms) const {
  StepRecord rec;
  rec.k = s.k;
  rec.t = s.t;
  rec.energy = s.energy;
  rec.modified_energy = s.modified_energy;
  rec.mass = mean(s.current);
  rec.roughness = roughness(s.current);
  rec.h2_norm = h2_norm(s.current);
  rec.iterations = iterations;
  rec.wall_ms = wall_ms;
  return rec;
}

std::pair<StepperState, StepRecord> TimeIntegrator::bootstrap(CellField phi0) {
  require_same_grid(grid_, phi0.grid(), "bootstrap");
  const auto start = std::chrono::steady_clock::now();
  const double m0 = mean(phi0);
  for (double& v : phi0.values()) v -= m0;

  if (!bdf1_symbol_) bdf1_symbol_.emplace(grid_, OperatorWeights::bdf1(params_));
  const ImplicitSystem sys = make_bdf1_system(phi0, params_);
  SolveResult result = checked_solve(sys, phi0, *bdf1_symbol_);

  StepperState state{std::move(result.phi), std::move(phi0), 1, params_.dt};
  update_energies(state);
  StepRecord rec = make_record(state, result.stats.iterations, elapsed_ms(start));
  return {std::move(state), rec};
}

std::pair<StepperState, StepRecord> TimeIntegrator::from_history(CellField phi0, CellField phi1) {
  require_same_grid(grid_, phi0.grid(), "from_history");
  require_same_grid(grid_, phi1.grid(), "from_history");
  StepperState state{std::move(phi1), std::move(phi0), 1, params_.dt};
  update_energies(state);
  last_solve_ = SolveStats{};
  return {state, make_record(state, 0, 0.0)};
}

std::pair<StepperState, StepRecord> TimeIntegrator::step(const StepperState& state) {
  require_same_grid(grid_, state.current.grid(), "step");
  const auto start = std::chrono::steady_clock::now();

  const ImplicitSystem sys = make_bdf2_system(state.current, state.previous, params_);
  CellField guess = 2.0 * state.current;
  guess -= state.previous;
  SolveResult result = checked_solve(sys, std::move(guess), bdf2_symbol_);

  StepperState next{std::move(result.phi), state.current, state.k + 1,
                    (state.k + 1) * params_.dt};
  update_energies(next);

  const double slack =
      options_.energy_slack * solver_.rel_tol * std::abs(state.modified_energy);
  if (next.modified_energy > state.modified_energy + slack) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "modified energy increased at step " << next.k << ": " << state.modified_energy
        << " -> " << next.modified_energy;
    report(msg.str());
  }
  const double mass = mean(next.current);
  if (std::abs(mass) > options_.mean_tol) {
    std::ostringstream msg;
    msg << "mass drift at step " << next.k << ": mean = " << mass;
    report(msg.str());
  }

  StepRecord rec = make_record(next, result.stats.iterations, elapsed_ms(start));
  return {std::move(next), rec};
}

std::vector<StepRecord> TimeIntegrator::run(CellField phi0, double final_time,
                                            const Observer& observer) {
  const long long total = step_count(final_time, params_.dt);
  if (total < 1) throw std::invalid_argument("run: final time must be at least one time step");
  std::vector<StepRecord> records;
  records.reserve(static_cast<std::size_t>(total));

  auto [state, rec] = bootstrap(std::move(phi0));
  records.push_back(rec);
  if (observer) observer(state, rec);
  for (long long k = 1; k < total; ++k) {
    auto [next, next_rec] = step(state);
    state = std::move(next);
    records.push_back(next_rec);
    if (observer) observer(state, next_rec);
  }
  return records;
}

}  // namespace ssfilm
