// SPDX-License-Identifier: Apache-2.0

#include "ssfilm/energy.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "ssfilm/operators.hpp"

namespace ssfilm {

void SchemeParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("scheme: epsilon must be positive");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("scheme: time step must be positive");
  }
  if (!(A >= 0.0) || !std::isfinite(A)) {
    throw std::invalid_argument("scheme: stabilization A must be non-negative");
  }
  if (A < 1.0 / 16.0) {
    if (!allow_small_A) {
      throw std::invalid_argument("scheme: A < 1/16 voids the energy-decay guarantee "
                                  "(set allow_small_A to override)");
    }
    std::cerr << "warning: stabilization A = " << A << " is below 1/16\n";
  }
}

OperatorWeights OperatorWeights::bdf2(const SchemeParams& p) {
  return {1.5, p.dt, p.A * p.dt * p.dt + p.dt * p.epsilon * p.epsilon};
}

OperatorWeights OperatorWeights::bdf1(const SchemeParams& p) {
  return {1.0, p.dt, p.dt * p.epsilon * p.epsilon};
}

Workspace::Workspace(const GridSpec& grid) : g(grid), e(grid), a(grid), b(grid) {}

double energy(const CellField& phi, const SchemeParams& params) {
  const StencilSums s = stencil_sums(phi);
  const double h2 = phi.grid().h() * phi.grid().h();
  const double eps2 = params.epsilon * params.epsilon;
  return h2 * (0.25 * s.skew_4th - 0.5 * s.skew_sq + 0.5 * eps2 * s.lap_sq);
}

double history_penalty(const CellField& phi, const CellField& psi, const SchemeParams& params) {
  require_same_grid(phi.grid(), psi.grid(), "history_penalty");
  const int m = phi.m();
  const double* a = phi.data();
  const double* b = psi.data();
  double diff_sq = 0.0;
  double grad_sq = 0.0;  // h^2 ||grad_h (phi - psi)||^2 / h^2 = sum of squared differences
  for (int i = 0; i < m; ++i) {
    const std::size_t r0 = static_cast<std::size_t>(i) * m;
    const std::size_t r1 = static_cast<std::size_t>(i + 1 == m ? 0 : i + 1) * m;
    auto point = [&](int j, int jp) {
      const double w = a[r0 + j] - b[r0 + j];
      const double dx = a[r1 + j] - b[r1 + j] - w;
      const double dy = a[r0 + jp] - b[r0 + jp] - w;
      diff_sq += w * w;
      grad_sq += dx * dx + dy * dy;
    };
    for (int j = 0; j < m - 1; ++j) point(j, j + 1);
    point(m - 1, 0);
  }
  const double h2 = phi.grid().h() * phi.grid().h();
  return h2 * diff_sq / (4.0 * params.dt) + 0.5 * grad_sq;
}

double modified_energy(const CellField& phi, const CellField& psi, const SchemeParams& params) {
  return energy(phi, params) + history_penalty(phi, psi, params);
}

void apply_nonlinear(const CellField& phi, const OperatorWeights& w, CellField& out,
                     Workspace& ws) {
  p_laplacian4(phi, ws.a, ws.g);
  laplacian(phi, ws.b);
  // Second Laplacian fused with the weighted sum.
  const int m = phi.m();
  const double c_bi = w.biharmonic / (phi.grid().h() * phi.grid().h());
  const double* u = phi.data();
  const double* pl = ws.a.data();
  const double* l = ws.b.data();
  double* o = out.data();
  for (int i = 0; i < m; ++i) {
    const std::size_t r0 = static_cast<std::size_t>(i) * m;
    const std::size_t rp = static_cast<std::size_t>(i + 1 == m ? 0 : i + 1) * m;
    const std::size_t rm = static_cast<std::size_t>(i == 0 ? m - 1 : i - 1) * m;
    auto point = [&](int j, int jm, int jp) {
      const double bih = l[rp + j] + l[rm + j] + l[r0 + jp] + l[r0 + jm] - 4.0 * l[r0 + j];
      o[r0 + j] = w.identity * u[r0 + j] - w.p_laplacian * pl[r0 + j] + c_bi * bih;
    };
    point(0, m - 1, 1);
    for (int j = 1; j < m - 1; ++j) point(j, j - 1, j + 1);
    point(m - 1, m - 2, 0);
  }
}

CellField apply_nonlinear(const CellField& phi, const OperatorWeights& w) {
  Workspace ws(phi.grid());
  CellField out(phi.grid());
  apply_nonlinear(phi, w, out, ws);
  return out;
}

CellField apply_N(const CellField& phi, const SchemeParams& params) {
  return apply_nonlinear(phi, OperatorWeights::bdf2(params));
}

CellField assemble_rhs(const CellField& phi_k, const CellField& phi_km1,
                       const SchemeParams& params) {
  require_same_grid(phi_k.grid(), phi_km1.grid(), "assemble_rhs");
  const int m = phi_k.m();
  const double s = params.dt;
  const double h2 = phi_k.grid().h() * phi_k.grid().h();
  const double c_skew = -s / (2.0 * h2);
  const double c_bih = params.A * s * s / h2;
  const CellField lap = laplacian(phi_k);
  const double* u = phi_k.data();
  const double* v = phi_km1.data();
  const double* l = lap.data();
  CellField f(phi_k.grid());
  double* o = f.data();
  for (int i = 0; i < m; ++i) {
    const std::size_t r0 = static_cast<std::size_t>(i) * m;
    const std::size_t rp = static_cast<std::size_t>(i + 1 == m ? 0 : i + 1) * m;
    const std::size_t rm = static_cast<std::size_t>(i == 0 ? m - 1 : i - 1) * m;
    auto point = [&](int j, int jm, int jp) {
      // skew Laplacian of the extrapolation 2 phi^k - phi^{k-1}
      auto x = [&](std::size_t n) { return 2.0 * u[n] - v[n]; };
      const double skew =
          x(rp + jp) + x(rm + jp) + x(rp + jm) + x(rm + jm) - 4.0 * x(r0 + j);
      const double bih = l[rp + j] + l[rm + j] + l[r0 + jp] + l[r0 + jm] - 4.0 * l[r0 + j];
      o[r0 + j] = 0.5 * (4.0 * u[r0 + j] - v[r0 + j]) + c_skew * skew + c_bih * bih;
    };
    point(0, m - 1, 1);
    for (int j = 1; j < m - 1; ++j) point(j, j - 1, j + 1);
    point(m - 1, m - 2, 0);
  }
  return f;
}

ImplicitSystem make_bdf2_system(const CellField& phi_k, const CellField& phi_km1,
                                const SchemeParams& params) {
  return {OperatorWeights::bdf2(params), assemble_rhs(phi_k, phi_km1, params)};
}

ImplicitSystem make_bdf1_system(const CellField& phi0, const SchemeParams& params) {
  CellField f = phi0;
  f.axpy(-params.dt, skew_laplacian(phi0));
  return {OperatorWeights::bdf1(params), std::move(f)};
}

void residual(const CellField& phi, const ImplicitSystem& sys, CellField& out, Workspace& ws) {
  require_same_grid(phi.grid(), sys.f.grid(), "residual");
  apply_nonlinear(phi, sys.weights, out, ws);
  const double* f = sys.f.data();
  double* o = out.data();
  for (std::size_t n = 0; n < out.size(); ++n) o[n] = f[n] - o[n];
}

CellField residual(const CellField& phi, const ImplicitSystem& sys) {
  Workspace ws(phi.grid());
  CellField out(phi.grid());
  residual(phi, sys, out, ws);
  return out;
}

double objective(const CellField& phi, const ImplicitSystem& sys) {
  require_same_grid(phi.grid(), sys.f.grid(), "objective");
  const OperatorWeights& w = sys.weights;
  const double g4 = skew_grad_norm(phi, 4.0);
  const CellField lap = laplacian(phi);
  return 0.5 * w.identity * inner(phi, phi) + 0.25 * w.p_laplacian * (g4 * g4) * (g4 * g4) +
         0.5 * w.biharmonic * inner(lap, lap) - inner(sys.f, phi);
}

CubicCoeffs line_coeffs(const CellField& phi, const CellField& d, const CellField& r,
                        const OperatorWeights& w, Workspace&) {
  require_same_grid(phi.grid(), d.grid(), "line_coeffs");
  require_same_grid(phi.grid(), r.grid(), "line_coeffs");
  const int m = phi.m();
  const double h = phi.grid().h();
  const double inv_2h = 1.0 / (2.0 * h);
  const double inv_h2 = 1.0 / (h * h);

  // One sweep: skew gradients g of phi and e of d at vertex (i,j), the
  // Laplacian of d at cell (i,j), and the cell inner products.
  double g2e2 = 0.0;   // sum |g|^2 |e|^2
  double ge_sq = 0.0;  // sum (g.e)^2
  double ge_e2 = 0.0;  // sum (g.e) |e|^2
  double e4 = 0.0;     // sum |e|^4
  double dd = 0.0;
  double rd = 0.0;
  double lap2 = 0.0;
  const double* u = phi.data();
  const double* v = d.data();
  const double* rv = r.data();
  for (int i = 0; i < m; ++i) {
    const std::size_t r0 = static_cast<std::size_t>(i) * m;
    const std::size_t r1 = static_cast<std::size_t>(i + 1 == m ? 0 : i + 1) * m;
    const std::size_t rm = static_cast<std::size_t>(i == 0 ? m - 1 : i - 1) * m;
    auto point = [&](int j, int jm, int jp) {
      const double gx = (u[r1 + jp] - u[r0 + jp] + u[r1 + j] - u[r0 + j]) * inv_2h;
      const double gy = (u[r1 + jp] - u[r1 + j] + u[r0 + jp] - u[r0 + j]) * inv_2h;
      const double ex = (v[r1 + jp] - v[r0 + jp] + v[r1 + j] - v[r0 + j]) * inv_2h;
      const double ey = (v[r1 + jp] - v[r1 + j] + v[r0 + jp] - v[r0 + j]) * inv_2h;
      const double lap =
          (v[r1 + j] + v[rm + j] + v[r0 + jp] + v[r0 + jm] - 4.0 * v[r0 + j]) * inv_h2;
      const double g2 = gx * gx + gy * gy;
      const double e2 = ex * ex + ey * ey;
      const double ge = gx * ex + gy * ey;
      g2e2 += g2 * e2;
      ge_sq += ge * ge;
      ge_e2 += ge * e2;
      e4 += e2 * e2;
      dd += v[r0 + j] * v[r0 + j];
      rd += rv[r0 + j] * v[r0 + j];
      lap2 += lap * lap;
    };
    point(0, m - 1, 1);
    for (int j = 1; j < m - 1; ++j) point(j, j - 1, j + 1);
    point(m - 1, m - 2, 0);
  }
  const double h2 = h * h;

  CubicCoeffs c;
  c.a0 = -h2 * rd;
  c.a1 = w.identity * h2 * dd + w.p_laplacian * h2 * (g2e2 + 2.0 * ge_sq) +
         w.biharmonic * h2 * lap2;
  c.a2 = 3.0 * w.p_laplacian * h2 * ge_e2;
  c.a3 = w.p_laplacian * h2 * e4;
  return c;
}

CubicCoeffs line_coeffs(const CellField& phi, const CellField& d, const ImplicitSystem& sys) {
  Workspace ws(phi.grid());
  CellField r(phi.grid());
  residual(phi, sys, r, ws);
  return line_coeffs(phi, d, r, sys.weights, ws);
}

}  // namespace ssfilm
