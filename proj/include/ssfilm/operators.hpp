// SPDX-License-Identifier: Apache-2.0
//
// Difference and average operators on the periodic staggered grid.
//
// Every operator has a value-returning form and an `out`-parameter form; the
// latter reuses caller storage inside solver loops. `out` must not alias the
// input.

#ifndef SSFILM_OPERATORS_HPP
#define SSFILM_OPERATORS_HPP

#include "ssfilm/grid.hpp"

namespace ssfilm {

/// Standard 5-point Laplacian.
CellField laplacian(const CellField& phi);
void laplacian(const CellField& phi, CellField& out);

/// Laplacian applied twice.
CellField biharmonic(const CellField& phi);
void biharmonic(const CellField& phi, CellField& out, CellField& scratch);

/// Skew (diagonal) Laplacian, equal to skew_div(skew_grad(phi)).
CellField skew_laplacian(const CellField& phi);
void skew_laplacian(const CellField& phi, CellField& out);

/// Center-to-vertex gradient (Dx, Dy), both components collocated at vertices.
VertexVectorField skew_grad(const CellField& phi);
void skew_grad(const CellField& phi, VertexVectorField& out);

/// Vertex-to-center divergence dx(F.x) + dy(F.y).
CellField skew_div(const VertexVectorField& flux);
void skew_div(const VertexVectorField& flux, CellField& out);

/// Quarter-weighted average of the four vertices around each cell.
CellField vertex_to_center_avg(const VertexField& v);

/// Squared vertex gradient magnitude |grad_v phi|^2, the `r` weight of the
/// 4-Laplacian.
VertexField grad_magnitude_sq(const VertexVectorField& g);

/// Discrete 4-Laplacian div_v(|grad_v phi|^2 grad_v phi).
CellField p_laplacian4(const CellField& phi);
void p_laplacian4(const CellField& phi, CellField& out, VertexVectorField& scratch);

/// Forward differences onto edges: Dx phi on east-west edges, Dy phi on
/// north-south edges.
EdgeFieldEW edge_diff_x(const CellField& phi);
EdgeFieldNS edge_diff_y(const CellField& phi);

/// Unweighted sums gathered in a single sweep (multiply by h^2 for the grid
/// inner products).
struct StencilSums {
  double value_sq = 0.0;  // sum phi^2
  double skew_sq = 0.0;   // sum |grad_v phi|^2 over vertices
  double skew_4th = 0.0;  // sum |grad_v phi|^4 over vertices
  double edge_sq = 0.0;   // sum of squared forward differences over both edge families
  double lap_sq = 0.0;    // sum (Lap_h phi)^2
};
StencilSums stencil_sums(const CellField& phi);

/// ||grad_v phi||_p for p in {2, 4} (vertex inner product of |grad_v phi|^p).
double skew_grad_norm(const CellField& phi, double p);

/// ||grad_h phi||_2 built from the edge differences.
double grad_norm(const CellField& phi);

/// (||phi||_2^2 + ||grad_h phi||_2^2)^(1/2)
double h1_norm(const CellField& phi);
/// (||phi||_H1^2 + ||Lap_h phi||_2^2)^(1/2)
double h2_norm(const CellField& phi);

}  // namespace ssfilm

#endif  // SSFILM_OPERATORS_HPP
