// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the test binaries: seeded random fields and
// brute-force reference stencils written directly from the index formulas.

#ifndef SSFILM_TESTS_SUPPORT_HPP
#define SSFILM_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "ssfilm/grid.hpp"

namespace ssfilm::test {

inline CellField random_cell(const GridSpec& grid, std::mt19937_64& rng, double amp = 1.0) {
  std::uniform_real_distribution<double> u(-amp, amp);
  CellField f(grid);
  for (double& v : f.values()) v = u(rng);
  return f;
}

inline VertexField random_vertex(const GridSpec& grid, std::mt19937_64& rng, double amp = 1.0) {
  std::uniform_real_distribution<double> u(-amp, amp);
  VertexField f(grid);
  for (double& v : f.values()) v = u(rng);
  return f;
}

inline CellField smooth_cell(const GridSpec& grid, int kx, int ky, double phase = 0.0) {
  const double two_pi = 2.0 * std::acos(-1.0);
  const double h = grid.h();
  const double L = grid.length();
  CellField f(grid);
  for (int i = 0; i < grid.m(); ++i) {
    for (int j = 0; j < grid.m(); ++j) {
      const double x = (i + 0.5) * h;
      const double y = (j + 0.5) * h;
      f(i, j) = std::sin(two_pi * kx * x / L + phase) * std::cos(two_pi * ky * y / L);
    }
  }
  return f;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// Brute-force reference stencils, one point at a time through periodic access.
inline double ref_laplacian(const CellField& p, int i, int j) {
  const double h = p.grid().h();
  return (p(i + 1, j) + p(i - 1, j) + p(i, j + 1) + p(i, j - 1) - 4.0 * p(i, j)) / (h * h);
}

inline double ref_skew_dx(const CellField& p, int i, int j) {
  const double h = p.grid().h();
  return (p(i + 1, j + 1) - p(i, j + 1) + p(i + 1, j) - p(i, j)) / (2.0 * h);
}

inline double ref_skew_dy(const CellField& p, int i, int j) {
  const double h = p.grid().h();
  return (p(i + 1, j + 1) - p(i + 1, j) + p(i, j + 1) - p(i, j)) / (2.0 * h);
}

inline double ref_skew_laplacian(const CellField& p, int i, int j) {
  const double h = p.grid().h();
  return (p(i + 1, j + 1) + p(i + 1, j - 1) + p(i - 1, j + 1) + p(i - 1, j - 1) - 4.0 * p(i, j)) /
         (2.0 * h * h);
}

}  // namespace ssfilm::test

#endif  // SSFILM_TESTS_SUPPORT_HPP
