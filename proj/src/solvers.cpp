// SPDX-License-Identifier: Apache-2.0

#include "ssfilm/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace ssfilm {

const char* to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::PSD:
      return "psd";
    case SolverKind::PNCG1:
      return "pncg1";
    case SolverKind::PNCG2:
      return "pncg2";
  }
  return "unknown";
}

SolverKind parse_solver_kind(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "psd") return SolverKind::PSD;
  if (s == "pncg1") return SolverKind::PNCG1;
  if (s == "pncg2") return SolverKind::PNCG2;
  throw std::invalid_argument("unknown solver '" + name + "' (expected psd, pncg1 or pncg2)");
}

void SolverConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("solver: tolerances must be positive");
  }
  if (max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
  if (!(secant_tol > 0.0) || secant_max < 1) {
    throw std::invalid_argument("solver: secant settings must be positive");
  }
}

namespace {

LineSearchResult newton_bracketed(const CubicCoeffs& q) {
  LineSearchResult out;
  if (q.a0 == 0.0) {
    out.converged = true;
    return out;
  }
  // Bracket the root starting from the Newton step taken at zero.
  double guess = q.a1 > 0.0 ? -q.a0 / q.a1 : std::cbrt(-q.a0 / q.a3);
  double lo = 0.0;
  double hi = 0.0;
  double step = std::max(std::abs(guess), std::numeric_limits<double>::min());
  if (q.a0 < 0.0) {
    hi = step;
    while (q(hi) < 0.0) {
      lo = hi;
      hi *= 2.0;
    }
  } else {
    lo = -step;
    while (q(lo) > 0.0) {
      hi = lo;
      lo *= 2.0;
    }
  }

  double x = std::clamp(guess, lo, hi);
  for (int it = 0; it < 200; ++it) {
    out.iterations = it + 1;
    const double qx = q(x);
    if (qx == 0.0) break;
    if (qx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double dq = q.derivative(x);
    double next = dq > 0.0 ? x - qx / dq : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
    const bool done = std::abs(next - x) <= tol || (hi - lo) <= tol;
    x = next;
    if (done) break;
  }
  out.alpha = x;
  out.converged = true;
  return out;
}

LineSearchResult secant(const CubicCoeffs& q, const SolverConfig& config) {
  LineSearchResult out;
  const double target = config.secant_tol * std::abs(q.a0);
  double x0 = 0.0;
  double q0 = q.a0;
  if (std::abs(q0) <= target || q0 == 0.0) {
    out.converged = true;
    return out;
  }
  double x1 = q.a1 > 0.0 ? -q.a0 / q.a1 : std::cbrt(-q.a0 / q.a3);
  double q1 = q(x1);
  double best = x1;
  double best_q = std::abs(q1);
  for (int it = 0; it < config.secant_max; ++it) {
    out.iterations = it + 1;
    if (std::abs(q1) <= target) {
      out.alpha = x1;
      out.converged = true;
      return out;
    }
    if (q1 == q0) break;
    const double x2 = x1 - q1 * (x1 - x0) / (q1 - q0);
    x0 = x1;
    q0 = q1;
    x1 = x2;
    q1 = q(x1);
    if (std::abs(q1) < best_q) {
      best = x1;
      best_q = std::abs(q1);
    }
  }
  out.alpha = best;
  out.converged = best_q <= target;
  return out;
}

}  // namespace

LineSearchResult line_search(const CubicCoeffs& q, const SolverConfig& config) {
  if (q.a0 == 0.0 && q.a1 == 0.0 && q.a2 == 0.0 && q.a3 == 0.0) {
    throw std::invalid_argument("line_search: zero search direction");
  }
  const bool increasing =
      (q.a1 > 0.0 && q.a3 >= 0.0 && q.a2 * q.a2 <= 3.0 * q.a1 * q.a3 * (1.0 + 1e-12)) ||
      (q.a1 > 0.0 && q.a3 == 0.0 && q.a2 == 0.0) || (q.a1 == 0.0 && q.a2 == 0.0 && q.a3 > 0.0);
  if (!increasing) {
    throw std::invalid_argument("line_search: cubic is not strictly increasing");
  }
  return config.line_search == LineSearchKind::Secant ? secant(q, config) : newton_bracketed(q);
}

BetaPair conjugate_betas(double new_dot_new, double new_dot_old, double old_dot_old) {
  if (!(old_dot_old > 0.0)) return {0.0, 0.0};
  return {new_dot_new / old_dot_old, (new_dot_new - new_dot_old) / old_dot_old};
}

double select_beta(SolverKind kind, const BetaPair& b) {
  switch (kind) {
    case SolverKind::PSD:
      return 0.0;
    case SolverKind::PNCG1:
      return std::max(0.0, b.polak_ribiere);
    case SolverKind::PNCG2:
      return std::max(0.0, std::min(b.fletcher_reeves, b.polak_ribiere));
  }
  return 0.0;
}

namespace {

void require_finite(double value, int iteration) {
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "solver: non-finite residual norm at iteration " << iteration;
    throw SolverFailure(msg.str());
  }
}

}  // namespace

SolveResult solve(const ImplicitSystem& sys, CellField phi, const PrecondSymbol& symbol,
                  const SolverConfig& config) {
  config.validate();
  require_same_grid(sys.f.grid(), phi.grid(), "solve");
  require_same_grid(sys.f.grid(), symbol.grid(), "solve");

  const GridSpec& grid = phi.grid();
  Workspace ws(grid);
  CellField r(grid);
  CellField g(grid);
  CellField g_prev(grid);
  CellField d(grid);

  SolveStats stats;
  const double f_norm = norm(sys.f, 2.0);
  const double scale = f_norm > 0.0 ? f_norm : 1.0;
  const double tol = config.rel_tol * f_norm + config.abs_tol;

  residual(phi, sys, r, ws);
  double res = norm(r, 2.0);
  require_finite(res, 0);
  stats.residual_history.push_back(res / scale);

  const bool conjugate = config.kind != SolverKind::PSD;
  double old_old = 0.0;
  int it = 0;
  while (res > tol && it < config.max_iter) {
    symbol.solve(r, g);

    double beta = 0.0;
    if (conjugate && it > 0) {
      BetaPair b{};
      if (config.pairing == BetaPairing::Preconditioned) {
        b = conjugate_betas(inner(g, g), inner(g, g_prev), old_old);
      } else {
        b = conjugate_betas(inner(r, g), inner(r, g_prev), old_old);
      }
      beta = select_beta(config.kind, b);
    }
    if (beta != 0.0) {
      // d = g + beta d_prev
      double* dv = d.data();
      const double* gv = g.data();
      for (std::size_t n = 0; n < d.size(); ++n) dv[n] = gv[n] + beta * dv[n];
      if (inner(d, r) <= 0.0) {
        d = g;
        beta = 0.0;
        ++stats.restarts;
      }
    } else {
      d = g;
    }
    stats.betas.push_back(beta);

    if (conjugate) {
      old_old = config.pairing == BetaPairing::Preconditioned ? inner(g, g) : inner(r, g);
      std::swap(g, g_prev);
    }

    const CubicCoeffs coeffs = line_coeffs(phi, d, r, sys.weights, ws);
    const LineSearchResult ls = line_search(coeffs, config);
    stats.alphas.push_back(ls.alpha);
    phi.axpy(ls.alpha, d);

    residual(phi, sys, r, ws);
    res = norm(r, 2.0);
    ++it;
    require_finite(res, it);
    stats.residual_history.push_back(res / scale);
  }

  stats.iterations = it;
  stats.final_rel_residual = res / scale;
  stats.converged = res <= tol;
  return {std::move(phi), std::move(stats)};
}

}  // namespace ssfilm
