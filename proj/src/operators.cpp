// SPDX-License-Identifier: Apache-2.0

#include "ssfilm/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ssfilm {

namespace {

inline int next(int i, int m) { return i + 1 == m ? 0 : i + 1; }
inline int prev(int i, int m) { return i == 0 ? m - 1 : i - 1; }

// Calls f(j, j-1, j+1) along a periodic row with the wrap peeled off, so the
// interior loop has affine indices and vectorizes.
template <class F>
inline void row_sweep(int m, F&& f) {
  f(0, m - 1, 1);
  for (int j = 1; j < m - 1; ++j) f(j, j - 1, j + 1);
  f(m - 1, m - 2, 0);
}

template <class A, class B>
void check_out(const A& in, B& out, const char* what) {
  require_same_grid(in.grid(), out.grid(), what);
  if (static_cast<const void*>(in.data()) == static_cast<const void*>(out.data())) {
    throw std::invalid_argument(std::string(what) + ": output aliases input");
  }
}

}  // namespace

void laplacian(const CellField& phi, CellField& out) {
  check_out(phi, out, "laplacian");
  const int m = phi.m();
  const double inv_h2 = 1.0 / (phi.grid().h() * phi.grid().h());
  const double* u = phi.data();
  double* o = out.data();
  for (int i = 0; i < m; ++i) {
    const double* row = u + static_cast<std::size_t>(i) * m;
    const double* up = u + static_cast<std::size_t>(next(i, m)) * m;
    const double* dn = u + static_cast<std::size_t>(prev(i, m)) * m;
    double* orow = o + static_cast<std::size_t>(i) * m;
    row_sweep(m, [&](int j, int jm, int jp) {
      orow[j] = (up[j] + dn[j] + row[jp] + row[jm] - 4.0 * row[j]) * inv_h2;
    });
  }
}

CellField laplacian(const CellField& phi) {
  CellField out(phi.grid());
  laplacian(phi, out);
  return out;
}

void biharmonic(const CellField& phi, CellField& out, CellField& scratch) {
  laplacian(phi, scratch);
  laplacian(scratch, out);
}

CellField biharmonic(const CellField& phi) {
  CellField scratch(phi.grid());
  CellField out(phi.grid());
  biharmonic(phi, out, scratch);
  return out;
}

void skew_laplacian(const CellField& phi, CellField& out) {
  check_out(phi, out, "skew_laplacian");
  const int m = phi.m();
  const double scale = 1.0 / (2.0 * phi.grid().h() * phi.grid().h());
  const double* u = phi.data();
  double* o = out.data();
  for (int i = 0; i < m; ++i) {
    const double* row = u + static_cast<std::size_t>(i) * m;
    const double* up = u + static_cast<std::size_t>(next(i, m)) * m;
    const double* dn = u + static_cast<std::size_t>(prev(i, m)) * m;
    double* orow = o + static_cast<std::size_t>(i) * m;
    row_sweep(m, [&](int j, int jm, int jp) {
      orow[j] = (up[jp] + dn[jp] + up[jm] + dn[jm] - 4.0 * row[j]) * scale;
    });
  }
}

CellField skew_laplacian(const CellField& phi) {
  CellField out(phi.grid());
  skew_laplacian(phi, out);
  return out;
}

void skew_grad(const CellField& phi, VertexVectorField& out) {
  require_same_grid(phi.grid(), out.grid(), "skew_grad");
  const int m = phi.m();
  const double scale = 1.0 / (2.0 * phi.grid().h());
  const double* u = phi.data();
  double* gx = out.x.data();
  double* gy = out.y.data();
  for (int i = 0; i < m; ++i) {
    const double* r0 = u + static_cast<std::size_t>(i) * m;
    const double* r1 = u + static_cast<std::size_t>(next(i, m)) * m;
    const std::size_t base = static_cast<std::size_t>(i) * m;
    row_sweep(m, [&](int j, int, int jp) {
      // a=(i,j) b=(i+1,j) c=(i,j+1) d=(i+1,j+1)
      const double a = r0[j];
      const double b = r1[j];
      const double c = r0[jp];
      const double d = r1[jp];
      gx[base + j] = (d - c + b - a) * scale;
      gy[base + j] = (d - b + c - a) * scale;
    });
  }
}

VertexVectorField skew_grad(const CellField& phi) {
  VertexVectorField out(phi.grid());
  skew_grad(phi, out);
  return out;
}

void skew_div(const VertexVectorField& flux, CellField& out) {
  require_same_grid(flux.grid(), out.grid(), "skew_div");
  const int m = out.m();
  const double scale = 1.0 / (2.0 * out.grid().h());
  const double* fx = flux.x.data();
  const double* fy = flux.y.data();
  double* o = out.data();
  for (int i = 0; i < m; ++i) {
    const std::size_t r0 = static_cast<std::size_t>(i) * m;
    const std::size_t rm = static_cast<std::size_t>(prev(i, m)) * m;
    double* orow = o + r0;
    row_sweep(m, [&](int j, int jm, int) {
      // vertices around cell (i,j): (i,j) (i-1,j) (i,j-1) (i-1,j-1)
      const double dx = fx[r0 + j] - fx[rm + j] + fx[r0 + jm] - fx[rm + jm];
      const double dy = fy[r0 + j] - fy[r0 + jm] + fy[rm + j] - fy[rm + jm];
      orow[j] = (dx + dy) * scale;
    });
  }
}

CellField skew_div(const VertexVectorField& flux) {
  CellField out(flux.grid());
  skew_div(flux, out);
  return out;
}

CellField vertex_to_center_avg(const VertexField& v) {
  const int m = v.m();
  CellField out(v.grid());
  const double* a = v.data();
  double* o = out.data();
  for (int i = 0; i < m; ++i) {
    const std::size_t r0 = static_cast<std::size_t>(i) * m;
    const std::size_t rm = static_cast<std::size_t>(prev(i, m)) * m;
    for (int j = 0; j < m; ++j) {
      const int jm = prev(j, m);
      o[r0 + j] = 0.25 * (a[r0 + j] + a[rm + j] + a[r0 + jm] + a[rm + jm]);
    }
  }
  return out;
}

VertexField grad_magnitude_sq(const VertexVectorField& g) {
  VertexField r(g.grid());
  const double* gx = g.x.data();
  const double* gy = g.y.data();
  double* rv = r.data();
  for (std::size_t n = 0; n < r.size(); ++n) rv[n] = gx[n] * gx[n] + gy[n] * gy[n];
  return r;
}

void p_laplacian4(const CellField& phi, CellField& out, VertexVectorField& scratch) {
  check_out(phi, out, "p_laplacian4");
  require_same_grid(phi.grid(), scratch.grid(), "p_laplacian4");
  // Flux |g|^2 g at vertices, built in the same sweep as g.
  const int m = phi.m();
  const double scale = 1.0 / (2.0 * phi.grid().h());
  const double* u = phi.data();
  double* fx = scratch.x.data();
  double* fy = scratch.y.data();
  for (int i = 0; i < m; ++i) {
    const double* r0 = u + static_cast<std::size_t>(i) * m;
    const double* r1 = u + static_cast<std::size_t>(next(i, m)) * m;
    const std::size_t base = static_cast<std::size_t>(i) * m;
    row_sweep(m, [&](int j, int, int jp) {
      const double gx = (r1[jp] - r0[jp] + r1[j] - r0[j]) * scale;
      const double gy = (r1[jp] - r1[j] + r0[jp] - r0[j]) * scale;
      const double r = gx * gx + gy * gy;
      fx[base + j] = r * gx;
      fy[base + j] = r * gy;
    });
  }
  skew_div(scratch, out);
}

CellField p_laplacian4(const CellField& phi) {
  VertexVectorField scratch(phi.grid());
  CellField out(phi.grid());
  p_laplacian4(phi, out, scratch);
  return out;
}

EdgeFieldEW edge_diff_x(const CellField& phi) {
  const int m = phi.m();
  const double inv_h = 1.0 / phi.grid().h();
  EdgeFieldEW out(phi.grid());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) out(i, j) = (phi(i + 1, j) - phi(i, j)) * inv_h;
  }
  return out;
}

EdgeFieldNS edge_diff_y(const CellField& phi) {
  const int m = phi.m();
  const double inv_h = 1.0 / phi.grid().h();
  EdgeFieldNS out(phi.grid());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) out(i, j) = (phi(i, j + 1) - phi(i, j)) * inv_h;
  }
  return out;
}

double skew_grad_norm(const CellField& phi, double p) {
  if (p != 2.0 && p != 4.0) {
    throw std::invalid_argument("skew_grad_norm: p must be 2 or 4");
  }
  const VertexField r = grad_magnitude_sq(skew_grad(phi));
  const double h2 = phi.grid().h() * phi.grid().h();
  double sum = 0.0;
  if (p == 2.0) {
    for (double v : r.values()) sum += v;
    return std::sqrt(h2 * sum);
  }
  for (double v : r.values()) sum += v * v;
  return std::sqrt(std::sqrt(h2 * sum));
}

double grad_norm(const CellField& phi) {
  // h^2 sum ((u_{i+1,j} - u_ij)/h)^2 + ((u_{i,j+1} - u_ij)/h)^2, the h^2 cancels.
  const int m = phi.m();
  const double* u = phi.data();
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    const double* row = u + static_cast<std::size_t>(i) * m;
    const double* up = u + static_cast<std::size_t>(next(i, m)) * m;
    row_sweep(m, [&](int j, int, int jp) {
      const double dx = up[j] - row[j];
      const double dy = row[jp] - row[j];
      sum += dx * dx + dy * dy;
    });
  }
  return std::sqrt(sum);
}

StencilSums stencil_sums(const CellField& phi) {
  const int m = phi.m();
  const double h = phi.grid().h();
  const double inv_2h = 1.0 / (2.0 * h);
  const double inv_h2 = 1.0 / (h * h);
  const double* u = phi.data();
  StencilSums s;
  for (int i = 0; i < m; ++i) {
    const double* row = u + static_cast<std::size_t>(i) * m;
    const double* up = u + static_cast<std::size_t>(next(i, m)) * m;
    const double* dn = u + static_cast<std::size_t>(prev(i, m)) * m;
    row_sweep(m, [&](int j, int jm, int jp) {
      const double gx = (up[jp] - row[jp] + up[j] - row[j]) * inv_2h;
      const double gy = (up[jp] - up[j] + row[jp] - row[j]) * inv_2h;
      const double r = gx * gx + gy * gy;
      const double dx = up[j] - row[j];
      const double dy = row[jp] - row[j];
      const double lap = (up[j] + dn[j] + row[jp] + row[jm] - 4.0 * row[j]) * inv_h2;
      s.value_sq += row[j] * row[j];
      s.skew_sq += r;
      s.skew_4th += r * r;
      s.edge_sq += (dx * dx + dy * dy) * inv_h2;
      s.lap_sq += lap * lap;
    });
  }
  return s;
}

double h1_norm(const CellField& phi) {
  const double l2 = norm(phi, 2.0);
  const double g = grad_norm(phi);
  return std::sqrt(l2 * l2 + g * g);
}

double h2_norm(const CellField& phi) {
  const StencilSums s = stencil_sums(phi);
  const double h2 = phi.grid().h() * phi.grid().h();
  return std::sqrt(h2 * (s.value_sq + s.edge_sq + s.lap_sq));
}

}  // namespace ssfilm
