// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>

#include "ssfilm/diagnostics.hpp"
#include "ssfilm/integrator.hpp"
#include "ssfilm/operators.hpp"
#include "support.hpp"

using namespace ssfilm;
using Catch::Approx;

namespace {

SchemeParams params(double eps = 0.1, double dt = 1e-3) {
  SchemeParams p;
  p.epsilon = eps;
  p.dt = dt;
  return p;
}

// Dense Gaussian elimination with partial pivoting.
template <std::size_t N>
std::array<double, N> dense_solve(std::array<std::array<double, N>, N> a, std::array<double, N> b) {
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < N; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < N; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < N; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::array<double, N> x{};
  for (std::size_t c = N; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < N; ++k) s -= a[c][k] * x[k];
    x[c] = s / a[c][c];
  }
  return x;
}

}  // namespace

TEST_CASE("step count tolerates rounding in T/s") {
  CHECK(step_count(0.3, 0.1) == 3);
  CHECK(step_count(0.32, 0.01 * 3.2 / 256) == 2560);
  CHECK(step_count(1e-3, 1e-3) == 1);
  CHECK(step_count(0.0105, 1e-3) == 10);
  CHECK_THROWS_AS(step_count(0.0, 1e-3), std::invalid_argument);
}

TEST_CASE("zero data stays zero") {
  const GridSpec g(16, 3.2);
  TimeIntegrator ti(g, params(), SolverConfig{});
  const auto recs = ti.run(CellField(g), 5e-3);
  REQUIRE(recs.size() == 5);
  for (std::size_t k = 0; k < recs.size(); ++k) {
    CHECK(recs[k].k == static_cast<int>(k) + 1);
    CHECK(recs[k].t == Approx((k + 1) * 1e-3));
    CHECK(recs[k].energy == 0.0);
    CHECK(recs[k].mass == 0.0);
  }
}

TEST_CASE("T = s gives only the bootstrap record") {
  const GridSpec g(8, 3.2);
  TimeIntegrator ti(g, params(), SolverConfig{});
  CHECK(ti.run(init_sinusoidal(g), 1e-3).size() == 1);
  CHECK_THROWS_AS(ti.run(init_sinusoidal(g), 1e-4), std::invalid_argument);
}

TEST_CASE("constant history is a steady state") {
  const GridSpec g(8, 3.2);
  IntegratorOptions opts;
  opts.mean_tol = 1.0;  // a constant state has nonzero mean by construction
  TimeIntegrator ti(g, params(), SolverConfig{}, opts);
  auto [state, rec] = ti.from_history(CellField(g, 0.25), CellField(g, 0.25));
  CHECK(rec.iterations == 0);
  auto [next, rec2] = ti.step(state);
  for (double v : next.current.values()) CHECK(v == Approx(0.25).epsilon(1e-13));
  CHECK(rec2.k == 2);
}

TEST_CASE("bootstrap from a checkerboard matches a dense linear solve") {
  // The skew gradient of a checkerboard vanishes, so the first-order step
  // reduces to (I + s eps^2 Lap^2) phi1 = phi0 on 16 unknowns.
  const GridSpec g(4, 3.2);
  const SchemeParams sp = params(0.3, 0.05);
  CellField phi0(g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) phi0(i, j) = ((i + j) % 2 ? -0.1 : 0.1);

  std::array<std::array<double, 16>, 16> a{};
  std::array<double, 16> b{};
  const double w = sp.dt * sp.epsilon * sp.epsilon;
  for (int k = 0; k < 16; ++k) {
    CellField e(g);
    e.values()[k] = 1.0;
    const CellField col = biharmonic(e);
    for (int r = 0; r < 16; ++r) a[r][k] = (r == k ? 1.0 : 0.0) + w * col.values()[r];
    b[k] = phi0.values()[k];
  }
  const auto x = dense_solve(a, b);

  SolverConfig sc;
  sc.rel_tol = 1e-13;
  TimeIntegrator ti(g, sp, sc);
  auto [state, rec] = ti.bootstrap(phi0);
  CHECK(state.previous == phi0);
  for (int k = 0; k < 16; ++k) CHECK(state.current.values()[k] == Approx(x[k]).epsilon(1e-11));
  CHECK(rec.t == sp.dt);
}

TEST_CASE("bootstrap step is first order in s") {
  const GridSpec g(32, 3.2);
  const CellField phi0 = init_sinusoidal(g);
  std::vector<double> d;
  for (double s : {1e-2, 5e-3, 2.5e-3}) {
    TimeIntegrator ti(g, params(0.1, s), SolverConfig{});
    auto [state, rec] = ti.bootstrap(phi0);
    d.push_back(norm(state.current - state.previous, 2));
  }
  CHECK(std::log2(d[0] / d[1]) >= 0.9);
  CHECK(std::log2(d[1] / d[2]) >= 0.9);
}

TEST_CASE("bootstrap centers the initial data") {
  const GridSpec g(16, 3.2);
  CellField phi0 = init_sinusoidal(g);
  for (double& v : phi0.values()) v += 0.5;
  TimeIntegrator ti(g, params(), SolverConfig{});
  auto [state, rec] = ti.bootstrap(phi0);
  CHECK(std::abs(mean(state.previous)) <= 1e-15);
  CHECK(std::abs(rec.mass) <= 1e-14);
}

TEST_CASE("records carry consistent diagnostics") {
  const GridSpec g(32, 3.2);
  const SchemeParams sp = params(0.1, 1e-3);
  TimeIntegrator ti(g, sp, SolverConfig{});
  int calls = 0;
  const auto recs = ti.run(init_sinusoidal(g), 0.01, [&](const StepperState& s, const StepRecord& r) {
    ++calls;
    CHECK(r.energy == Approx(energy(s.current, sp)).epsilon(1e-14));
    CHECK(r.modified_energy == Approx(modified_energy(s.current, s.previous, sp)).epsilon(1e-14));
    CHECK(r.roughness == Approx(roughness(s.current)).epsilon(1e-14));
    CHECK(r.h2_norm == Approx(h2_norm(s.current)).epsilon(1e-14));
    CHECK(r.k == s.k);
  });
  CHECK(calls == 10);
  for (std::size_t k = 1; k < recs.size(); ++k) {
    CHECK(recs[k].t > recs[k - 1].t);
    CHECK(recs[k].modified_energy <= recs[k - 1].modified_energy);
    CHECK(std::abs(recs[k].mass) <= 1e-11);
    CHECK(recs[k].iterations >= 1);
  }
  CHECK(ti.last_solve().converged);
  CHECK(ti.last_solve().residual_history.size() == static_cast<std::size_t>(recs.back().iterations) + 1);
}

TEST_CASE("violations abort or are counted") {
  const GridSpec g(16, 3.2);
  IntegratorOptions strict;
  strict.energy_slack = -1e12;  // demands an impossible energy drop
  TimeIntegrator abort_ti(g, params(), SolverConfig{}, strict);
  CHECK_THROWS_AS(abort_ti.run(init_sinusoidal(g), 3e-3), StabilityFailure);

  strict.on_violation = AssertMode::Warn;
  TimeIntegrator warn_ti(g, params(), SolverConfig{}, strict);
  CHECK(warn_ti.run(init_sinusoidal(g), 3e-3).size() == 3);
  CHECK(warn_ti.violations() == 2);
}

TEST_CASE("unconverged solves are reported") {
  const GridSpec g(16, 3.2);
  SolverConfig sc;
  sc.max_iter = 1;
  TimeIntegrator ti(g, params(), sc);
  CHECK_THROWS_AS(ti.run(init_random(g, 3), 3e-3), SolverFailure);
  IntegratorOptions lenient;
  lenient.require_convergence = false;
  TimeIntegrator ti2(g, params(), sc, lenient);
  CHECK_NOTHROW(ti2.run(init_random(g, 3), 3e-3));
}

TEST_CASE("runs are deterministic") {
  const GridSpec g(32, 12.8);
  TimeIntegrator a(g, params(0.03), SolverConfig{});
  TimeIntegrator b(g, params(0.03), SolverConfig{});
  const auto ra = a.run(init_random(g, 9), 5e-3);
  const auto rb = b.run(init_random(g, 9), 5e-3);
  REQUIRE(ra.size() == rb.size());
  for (std::size_t k = 0; k < ra.size(); ++k) {
    CHECK(ra[k].energy == rb[k].energy);
    CHECK(ra[k].roughness == rb[k].roughness);
    CHECK(ra[k].iterations == rb[k].iterations);
  }
}
