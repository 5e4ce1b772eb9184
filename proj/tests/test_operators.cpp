// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ssfilm/operators.hpp"
#include "support.hpp"

using namespace ssfilm;
using Catch::Approx;

namespace {

double max_diff(const CellField& a, const CellField& b) {
  double d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d = std::max(d, std::abs(a.values()[k] - b.values()[k]));
  }
  return d;
}

}  // namespace

TEST_CASE("stencils agree with brute-force references") {
  std::mt19937_64 rng(1);
  for (int m : {4, 6, 16}) {
    const GridSpec g(m, 1.7);
    const CellField p = test::random_cell(g, rng);
    const CellField lap = laplacian(p);
    const CellField slap = skew_laplacian(p);
    const VertexVectorField grad = skew_grad(p);
    const EdgeFieldEW ex = edge_diff_x(p);
    const EdgeFieldNS ey = edge_diff_y(p);
    const double h = g.h();
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double scale = 1.0 / (h * h);
        CHECK(lap(i, j) == Approx(test::ref_laplacian(p, i, j)).margin(1e-13 * scale));
        CHECK(slap(i, j) == Approx(test::ref_skew_laplacian(p, i, j)).margin(1e-13 * scale));
        CHECK(grad.x(i, j) == Approx(test::ref_skew_dx(p, i, j)).margin(1e-13 / h));
        CHECK(grad.y(i, j) == Approx(test::ref_skew_dy(p, i, j)).margin(1e-13 / h));
        CHECK(ex(i, j) == Approx((p(i + 1, j) - p(i, j)) / h).margin(1e-13 / h));
        CHECK(ey(i, j) == Approx((p(i, j + 1) - p(i, j)) / h).margin(1e-13 / h));
      }
    }
  }
}

TEST_CASE("skew divergence averages the vertex flux around each cell") {
  std::mt19937_64 rng(2);
  const GridSpec g(8, 1.0);
  const VertexVectorField F(test::random_vertex(g, rng), test::random_vertex(g, rng));
  const CellField div = skew_div(F);
  const double h = g.h();
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double dx =
          (F.x(i, j) + F.x(i, j - 1) - F.x(i - 1, j) - F.x(i - 1, j - 1)) / (2 * h);
      const double dy =
          (F.y(i, j) + F.y(i - 1, j) - F.y(i, j - 1) - F.y(i - 1, j - 1)) / (2 * h);
      CHECK(div(i, j) == Approx(dx + dy).margin(1e-12));
    }
  }
}

TEST_CASE("composite operators are built from their parts") {
  std::mt19937_64 rng(3);
  const GridSpec g(16, 3.2);
  const CellField p = test::random_cell(g, rng);
  const double big = max_abs(biharmonic(p));
  CHECK(max_diff(skew_laplacian(p), skew_div(skew_grad(p))) <= 1e-12 * max_abs(skew_laplacian(p)));
  CHECK(max_diff(biharmonic(p), laplacian(laplacian(p))) <= 1e-12 * big);

  const VertexVectorField gr = skew_grad(p);
  const VertexField r = grad_magnitude_sq(gr);
  VertexVectorField flux(g);
  for (std::size_t k = 0; k < r.size(); ++k) {
    flux.x.values()[k] = r.values()[k] * gr.x.values()[k];
    flux.y.values()[k] = r.values()[k] * gr.y.values()[k];
  }
  const CellField ref = skew_div(flux);
  CHECK(max_diff(p_laplacian4(p), ref) <= 1e-12 * max_abs(ref));
}

TEST_CASE("out-parameter forms match value forms") {
  std::mt19937_64 rng(4);
  const GridSpec g(10, 1.0);
  const CellField p = test::random_cell(g, rng);
  CellField out(g), scratch(g);
  laplacian(p, out);
  CHECK(out == laplacian(p));
  biharmonic(p, out, scratch);
  CHECK(out == biharmonic(p));
  skew_laplacian(p, out);
  CHECK(out == skew_laplacian(p));
  VertexVectorField vs(g);
  p_laplacian4(p, out, vs);
  CHECK(out == p_laplacian4(p));
}

TEST_CASE("vertex-to-center average") {
  const GridSpec g(4, 1.0);
  VertexField v(g);
  v(0, 0) = 4.0;
  const CellField c = vertex_to_center_avg(v);
  // vertex (0,0) touches cells (0,0), (1,0), (0,1), (1,1)
  CHECK(c(0, 0) == 1.0);
  CHECK(c(1, 0) == 1.0);
  CHECK(c(0, 1) == 1.0);
  CHECK(c(1, 1) == 1.0);
  CHECK(c(2, 2) == 0.0);
}

TEST_CASE("operators annihilate constants and have zero mean output") {
  std::mt19937_64 rng(5);
  const GridSpec g(12, 2.0);
  const CellField c(g, 3.7);
  CHECK(max_abs(laplacian(c)) == 0.0);
  CHECK(max_abs(skew_laplacian(c)) == 0.0);
  CHECK(max_abs(p_laplacian4(c)) == 0.0);
  const CellField p = test::random_cell(g, rng);
  CHECK(std::abs(mean(laplacian(p))) <= 1e-12 * max_abs(laplacian(p)));
  CHECK(std::abs(mean(p_laplacian4(p))) <= 1e-12 * max_abs(p_laplacian4(p)));
}

TEST_CASE("laplacian is second-order accurate on a smooth mode") {
  const double two_pi = 2 * std::acos(-1.0);
  double prev = 0;
  for (int m : {16, 32, 64}) {
    const GridSpec g(m, 1.0);
    const CellField p = test::smooth_cell(g, 1, 1);
    const CellField lap = laplacian(p);
    CellField exact = p;
    exact *= -2 * two_pi * two_pi;
    const double err = max_abs(lap - exact);
    if (prev > 0) CHECK(std::log2(prev / err) == Approx(2.0).margin(0.05));
    prev = err;
  }
}

TEST_CASE("norm helpers agree with the stencil sums") {
  std::mt19937_64 rng(6);
  const GridSpec g(8, 1.3);
  const CellField p = test::random_cell(g, rng);
  const double h2 = g.h() * g.h();
  const StencilSums s = stencil_sums(p);

  double skew_sq = 0, skew_4th = 0, edge = 0, lap_sq = 0;
  const VertexVectorField gr = skew_grad(p);
  const EdgeFieldEW ex = edge_diff_x(p);
  const EdgeFieldNS ey = edge_diff_y(p);
  const CellField lap = laplacian(p);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double r = gr.x.values()[k] * gr.x.values()[k] + gr.y.values()[k] * gr.y.values()[k];
    skew_sq += r;
    skew_4th += r * r;
    edge += ex.values()[k] * ex.values()[k] + ey.values()[k] * ey.values()[k];
    lap_sq += lap.values()[k] * lap.values()[k];
  }
  CHECK(s.skew_sq == Approx(skew_sq).epsilon(1e-13));
  CHECK(s.skew_4th == Approx(skew_4th).epsilon(1e-13));
  CHECK(s.edge_sq == Approx(edge).epsilon(1e-13));
  CHECK(s.lap_sq == Approx(lap_sq).epsilon(1e-13));
  CHECK(skew_grad_norm(p, 2) == Approx(std::sqrt(h2 * skew_sq)).epsilon(1e-13));
  CHECK(skew_grad_norm(p, 4) == Approx(std::pow(h2 * skew_4th, 0.25)).epsilon(1e-13));
  CHECK(grad_norm(p) == Approx(std::sqrt(h2 * edge)).epsilon(1e-13));
  const double l2 = norm(p, 2);
  CHECK(h1_norm(p) == Approx(std::sqrt(l2 * l2 + h2 * edge)).epsilon(1e-13));
  CHECK(h2_norm(p) == Approx(std::sqrt(l2 * l2 + h2 * edge + h2 * lap_sq)).epsilon(1e-13));
  CHECK_THROWS_AS(skew_grad_norm(p, 3), std::invalid_argument);
}

TEST_CASE("periodic shifts commute with the operators") {
  std::mt19937_64 rng(8);
  const GridSpec g(8, 1.0);
  const CellField p = test::random_cell(g, rng);
  CellField shifted(g);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) shifted(i, j) = p(i + 3, j - 2);
  const CellField a = p_laplacian4(p);
  const CellField b = p_laplacian4(shifted);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(b(i, j) == Approx(a(i + 3, j - 2)).margin(1e-12));
}
