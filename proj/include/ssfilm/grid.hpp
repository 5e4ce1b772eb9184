// SPDX-License-Identifier: Apache-2.0
//
// Periodic grid and grid functions for the square domain (0,L)^2.
//
// Index conventions (0-based, all arithmetic modulo m):
//   cell (i,j)      center at ((i+1/2)h, (j+1/2)h)
//   vertex (i,j)    at ((i+1)h, (j+1)h), the corner shared by cells i,i+1 / j,j+1
//   EW edge (i,j)   at ((i+1)h, (j+1/2)h)
//   NS edge (i,j)   at ((i+1/2)h, (j+1)h)
// Storage is row-major with the x index i selecting the row: values[i*m + j].

#ifndef SSFILM_GRID_HPP
#define SSFILM_GRID_HPP

#include <cstddef>
#include <new>
#include <span>
#include <vector>

namespace ssfilm {

/// 64-byte aligned storage so grid data can be handed to SIMD transforms.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t alignment{64};

  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), alignment)); }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, alignment); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

class GridSpec {
 public:
  GridSpec(int m, double length);

  int m() const { return m_; }
  double length() const { return length_; }
  double h() const { return length_ / m_; }
  double area() const { return length_ * length_; }
  std::size_t size() const { return static_cast<std::size_t>(m_) * m_; }

  int wrap(int i) const {
    i %= m_;
    return i < 0 ? i + m_ : i;
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(wrap(i)) * m_ + wrap(j);
  }

  bool operator==(const GridSpec&) const = default;

 private:
  int m_;
  double length_;
};

struct CellCentered {};
struct VertexCentered {};
struct EastWestEdge {};
struct NorthSouthEdge {};

/// Periodic m x m grid function living on one family of grid locations.
/// The location tag keeps cell and vertex data from being mixed up.
template <class Location>
class GridFunction {
 public:
  explicit GridFunction(const GridSpec& grid, double fill = 0.0)
      : grid_(grid), values_(grid.size(), fill) {}
  GridFunction(const GridSpec& grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  int m() const { return grid_.m(); }
  std::size_t size() const { return values_.size(); }

  // Periodic access; any integer index is valid.
  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double a);
  /// this += a * x
  GridFunction& axpy(double a, const GridFunction& x);
  void fill(double v);

  bool operator==(const GridFunction&) const = default;

 private:
  GridSpec grid_;
  std::vector<double, AlignedAllocator<double>> values_;
};

using CellField = GridFunction<CellCentered>;
using VertexField = GridFunction<VertexCentered>;
using EdgeFieldEW = GridFunction<EastWestEdge>;
using EdgeFieldNS = GridFunction<NorthSouthEdge>;

/// Collocated 2-vector at each vertex.
struct VertexVectorField {
  VertexField x;
  VertexField y;

  explicit VertexVectorField(const GridSpec& grid) : x(grid), y(grid) {}
  VertexVectorField(VertexField xc, VertexField yc);
  const GridSpec& grid() const { return x.grid(); }
};

template <class Location>
GridFunction<Location> operator+(GridFunction<Location> a, const GridFunction<Location>& b) {
  return a += b;
}
template <class Location>
GridFunction<Location> operator-(GridFunction<Location> a, const GridFunction<Location>& b) {
  return a -= b;
}
template <class Location>
GridFunction<Location> operator*(double s, GridFunction<Location> a) {
  return a *= s;
}

/// Throws std::invalid_argument when the two grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

// Inner products. Vertex and edge products are defined through an average
// onto cell centers; under periodicity the averaging weights sum to one per
// point, so all four reduce to h^2 * sum(u*v).
double inner(const CellField& u, const CellField& v);
double inner(const VertexField& u, const VertexField& v);
double inner(const VertexVectorField& u, const VertexVectorField& v);
double inner(const EdgeFieldEW& u, const EdgeFieldEW& v);
double inner(const EdgeFieldNS& u, const EdgeFieldNS& v);

/// (h^2/L^2) * sum(u)
double mean(const CellField& u);

/// Discrete l^p norm with h^2 weighting, p in {2, 4, 6, inf}.
double norm(const CellField& u, double p);
double max_abs(const CellField& u);

}  // namespace ssfilm

#endif  // SSFILM_GRID_HPP
