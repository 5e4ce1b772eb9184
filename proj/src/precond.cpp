// SPDX-License-Identifier: Apache-2.0

#include "ssfilm/precond.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "ssfilm/operators.hpp"

namespace ssfilm {

namespace {

// The FFTW planner is not thread-safe; new-array execution is.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : p(fftw_alloc_real(n)) {
    if (!p) throw std::bad_alloc();
  }
  ~RealBuffer() { fftw_free(p); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* p;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : p(fftw_alloc_complex(n)) {
    if (!p) throw std::bad_alloc();
  }
  ~ComplexBuffer() { fftw_free(p); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* p;
};

// Per-thread spectral buffer, grown on demand.
struct ScratchBuffers {
  std::size_t spec_size = 0;
  std::unique_ptr<ComplexBuffer> spec;

  void reserve(std::size_t n_spec) {
    if (n_spec > spec_size) {
      spec = std::make_unique<ComplexBuffer>(n_spec);
      spec_size = n_spec;
    }
  }
};

ScratchBuffers& scratch_buffers() {
  thread_local ScratchBuffers buffers;
  return buffers;
}

}  // namespace

struct PrecondSymbol::Plans {
  explicit Plans(int m) : half(static_cast<std::size_t>(m) * (m / 2 + 1)) {
    RealBuffer real(static_cast<std::size_t>(m) * m);
    ComplexBuffer spec(half);
    std::lock_guard<std::mutex> lock(planner_mutex());
    // ESTIMATE keeps the chosen algorithm, and therefore the rounding,
    // identical across runs.
    forward = fftw_plan_dft_r2c_2d(m, m, real.p, spec.p, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_2d(m, m, spec.p, real.p, FFTW_ESTIMATE);
    alignment = fftw_alignment_of(real.p);
    if (!forward || !backward) throw std::runtime_error("fftw: plan creation failed");
  }
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;

  std::size_t half;
  int alignment = 0;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

double laplacian_symbol(const GridSpec& grid, int l, int q) {
  const double sl = std::sin(std::numbers::pi * l / grid.m());
  const double sq = std::sin(std::numbers::pi * q / grid.m());
  return -4.0 / (grid.h() * grid.h()) * (sl * sl + sq * sq);
}

PrecondSymbol::PrecondSymbol(const GridSpec& grid, const OperatorWeights& weights)
    : grid_(grid), weights_(weights), lambda_(grid.size()) {
  if (!(weights.identity > 0.0) || weights.p_laplacian < 0.0 || weights.biharmonic < 0.0) {
    throw std::invalid_argument("preconditioner: weights must give a positive operator");
  }
  const int m = grid.m();
  for (int l = 0; l < m; ++l) {
    for (int q = 0; q < m; ++q) {
      const double sigma = laplacian_symbol(grid, l, q);
      lambda_[static_cast<std::size_t>(l) * m + q] =
          weights.identity - weights.p_laplacian * sigma + weights.biharmonic * sigma * sigma;
    }
  }
  const int mh = m / 2 + 1;
  const double scale = 1.0 / static_cast<double>(grid.size());
  inv_half_.resize(static_cast<std::size_t>(m) * mh);
  for (int l = 0; l < m; ++l) {
    for (int q = 0; q < mh; ++q) {
      inv_half_[static_cast<std::size_t>(l) * mh + q] =
          scale / lambda_[static_cast<std::size_t>(l) * m + q];
    }
  }
  plans_ = std::make_shared<const Plans>(m);
}

double PrecondSymbol::min_value() const { return *std::min_element(lambda_.begin(), lambda_.end()); }

void PrecondSymbol::solve(const CellField& r, CellField& out) const {
  require_same_grid(grid_, r.grid(), "solve_L");
  require_same_grid(grid_, out.grid(), "solve_L");

  // Field storage is 64-byte aligned, matching the planning buffers, so the
  // transforms run in place on it. The r2c transform leaves its input intact;
  // the const_cast only satisfies FFTW's signature.
  if (fftw_alignment_of(const_cast<double*>(r.data())) != plans_->alignment ||
      fftw_alignment_of(out.data()) != plans_->alignment) {
    throw std::logic_error("solve_L: field storage is not aligned for the transform plan");
  }
  ScratchBuffers& buf = scratch_buffers();
  buf.reserve(plans_->half);
  fftw_complex* spec = buf.spec->p;
  fftw_execute_dft_r2c(plans_->forward, const_cast<double*>(r.data()), spec);

  // r2c keeps q = 0..m/2 along the last (j) dimension.
  for (std::size_t k = 0; k < plans_->half; ++k) {
    spec[k][0] *= inv_half_[k];
    spec[k][1] *= inv_half_[k];
  }
  fftw_execute_dft_c2r(plans_->backward, spec, out.data());
}

CellField PrecondSymbol::solve(const CellField& r) const {
  CellField out(grid_);
  solve(r, out);
  return out;
}

PrecondSymbol build_symbol(const GridSpec& grid, const SchemeParams& params) {
  return PrecondSymbol(grid, OperatorWeights::bdf2(params));
}

CellField apply_linear(const CellField& psi, const OperatorWeights& w) {
  const CellField lap = laplacian(psi);
  const CellField bih = laplacian(lap);
  CellField out(psi.grid());
  for (std::size_t n = 0; n < out.size(); ++n) {
    out.data()[n] =
        w.identity * psi.data()[n] - w.p_laplacian * lap.data()[n] + w.biharmonic * bih.data()[n];
  }
  return out;
}

CellField apply_L(const CellField& psi, const SchemeParams& params) {
  return apply_linear(psi, OperatorWeights::bdf2(params));
}

}  // namespace ssfilm
