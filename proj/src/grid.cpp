// SPDX-License-Identifier: Apache-2.0

#include "ssfilm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ssfilm {

GridSpec::GridSpec(int m, double length) : m_(m), length_(length) {
  if (m < 4 || m % 2 != 0) {
    throw std::invalid_argument("grid: m must be even and >= 4, got " + std::to_string(m));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("grid: domain length must be positive and finite");
  }
}

template <class Location>
GridFunction<Location>::GridFunction(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(values.begin(), values.end()) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("grid function: expected " + std::to_string(grid_.size()) +
                                " values, got " + std::to_string(values_.size()));
  }
}

template <class Location>
GridFunction<Location>& GridFunction<Location>::operator+=(const GridFunction& other) {
  require_same_grid(grid_, other.grid_, "operator+=");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += other.values_[n];
  return *this;
}

template <class Location>
GridFunction<Location>& GridFunction<Location>::operator-=(const GridFunction& other) {
  require_same_grid(grid_, other.grid_, "operator-=");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= other.values_[n];
  return *this;
}

template <class Location>
GridFunction<Location>& GridFunction<Location>::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

template <class Location>
GridFunction<Location>& GridFunction<Location>::axpy(double a, const GridFunction& x) {
  require_same_grid(grid_, x.grid_, "axpy");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += a * x.values_[n];
  return *this;
}

template <class Location>
void GridFunction<Location>::fill(double v) {
  std::fill(values_.begin(), values_.end(), v);
}

template class GridFunction<CellCentered>;
template class GridFunction<VertexCentered>;
template class GridFunction<EastWestEdge>;
template class GridFunction<NorthSouthEdge>;

VertexVectorField::VertexVectorField(VertexField xc, VertexField yc)
    : x(std::move(xc)), y(std::move(yc)) {
  require_same_grid(x.grid(), y.grid(), "vertex vector field");
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": grid mismatch (m=" + std::to_string(a.m()) +
                                " vs m=" + std::to_string(b.m()) + ")");
  }
}

namespace {

// Four interleaved partial sums: breaks the serial add dependency and is
// deterministic for a given length.
template <class F>
double blocked_sum(std::size_t n, F term) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += term(k);
    s1 += term(k + 1);
    s2 += term(k + 2);
    s3 += term(k + 3);
  }
  for (; k < n; ++k) s0 += term(k);
  return (s0 + s1) + (s2 + s3);
}

template <class Location>
double weighted_dot(const GridFunction<Location>& u, const GridFunction<Location>& v,
                    const char* what) {
  require_same_grid(u.grid(), v.grid(), what);
  const double* a = u.data();
  const double* b = v.data();
  const double sum = blocked_sum(u.size(), [&](std::size_t n) { return a[n] * b[n]; });
  const double h = u.grid().h();
  return h * h * sum;
}

}  // namespace

double inner(const CellField& u, const CellField& v) { return weighted_dot(u, v, "inner(cell)"); }

double inner(const VertexField& u, const VertexField& v) {
  return weighted_dot(u, v, "inner(vertex)");
}

double inner(const VertexVectorField& u, const VertexVectorField& v) {
  return inner(u.x, v.x) + inner(u.y, v.y);
}

double inner(const EdgeFieldEW& u, const EdgeFieldEW& v) { return weighted_dot(u, v, "inner(ew)"); }

double inner(const EdgeFieldNS& u, const EdgeFieldNS& v) { return weighted_dot(u, v, "inner(ns)"); }

double mean(const CellField& u) {
  const double* a = u.data();
  const double sum = blocked_sum(u.size(), [&](std::size_t n) { return a[n]; });
  return sum / static_cast<double>(u.size());
}

double max_abs(const CellField& u) {
  double mx = 0.0;
  for (double v : u.values()) mx = std::max(mx, std::abs(v));
  return mx;
}

double norm(const CellField& u, double p) {
  if (std::isinf(p) && p > 0) return max_abs(u);
  const double h2 = u.grid().h() * u.grid().h();
  const double* a = u.data();
  if (p == 2.0) {
    const double sum = blocked_sum(u.size(), [&](std::size_t n) { return a[n] * a[n]; });
    return std::sqrt(h2 * sum);
  }
  if (p == 4.0) {
    const double sum = blocked_sum(u.size(), [&](std::size_t n) {
      const double v2 = a[n] * a[n];
      return v2 * v2;
    });
    return std::sqrt(std::sqrt(h2 * sum));
  }
  if (p == 6.0) {
    const double sum = blocked_sum(u.size(), [&](std::size_t n) {
      const double v2 = a[n] * a[n];
      return v2 * v2 * v2;
    });
    return std::cbrt(std::sqrt(h2 * sum));
  }
  throw std::invalid_argument("norm: unsupported p = " + std::to_string(p) +
                              " (expected 2, 4, 6 or inf)");
}

}  // namespace ssfilm
