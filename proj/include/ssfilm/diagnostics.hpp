// SPDX-License-Identifier: Apache-2.0
//
// Initial data, coarsening diagnostics, and the Cauchy convergence harness.

#ifndef SSFILM_DIAGNOSTICS_HPP
#define SSFILM_DIAGNOSTICS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ssfilm/energy.hpp"
#include "ssfilm/grid.hpp"
#include "ssfilm/solvers.hpp"

namespace ssfilm {

/// 0.1 sin^2(2 pi x/L) sin(4 pi (y - 1.4)/L) - 0.1 cos(2 pi (x - 2)/L) sin(2 pi y/L)
/// evaluated at a point.
double sinusoidal_profile(double x, double y, double length);

/// The profile above sampled at cell centers and centered to mean zero.
/// Designed for L = 3.2; other lengths print a warning.
CellField init_sinusoidal(const GridSpec& grid);

/// 0.05 (2 r - 1) with r uniform on [0, 1) from a seeded 64-bit generator,
/// centered afterwards. Deterministic per seed.
CellField init_random(const GridSpec& grid, std::uint64_t seed);

/// sqrt(h^2/(m*m) * sum (phi - mean)^2)
double roughness(const CellField& phi);

/// Energy shifted by |Omega|/4, i.e. the discrete counterpart of
/// int 1/4 (|grad phi|^2 - 1)^2 + eps^2/2 (Lap phi)^2. Positive, which makes
/// it usable in log-log fits.
double shifted_energy(double energy, const GridSpec& grid);

struct PowerLawFit {
  double a = 0.0;  // intercept of log y = a + b log t (natural log)
  double b = 0.0;  // exponent
  std::size_t points = 0;
};

/// Least-squares fit of log y = a + b log t over t in [t_min, t_max].
/// Throws std::invalid_argument with fewer than 3 points in the window or
/// non-positive values inside it.
PowerLawFit loglog_fit(const std::vector<std::pair<double, double>>& series, double t_min,
                       double t_max);

enum class Interpolation { NearestNeighbor, Bilinear };
Interpolation parse_interpolation(const std::string& name);
const char* to_string(Interpolation mode);

/// Coarse (m) to fine (2m) cell-centered interpolation on the same domain.
CellField prolong(const CellField& coarse, Interpolation mode = Interpolation::NearestNeighbor);
/// 2x2 block average, fine (2m) to coarse (m).
CellField restrict_average(const CellField& fine);

struct CauchySetup {
  double length = 3.2;
  double epsilon = 0.1;
  double A = 1.0 / 16.0;
  double dt_per_h = 0.01;  // refinement path s = C h
  double final_time = 0.32;
  SolverConfig solver;
  Interpolation interpolation = Interpolation::NearestNeighbor;
};

struct CauchyLevel {
  int m = 0;
  double dt = 0.0;
  long long steps = 0;
  double avg_iterations = 0.0;  // per BDF2 step
  double cpu_per_step_s = 0.0;
  CellField final_field;
};

struct CauchyRow {
  int m_coarse = 0;
  int m_fine = 0;
  double h_coarse = 0.0;
  double h_fine = 0.0;
  double error = 0.0;         // ||phi_f - I(phi_c)||_2
  double rate = 0.0;          // log2(previous error / error); NaN on the first row
  double avg_iterations = 0.0;  // of the fine level
  double cpu_per_step_s = 0.0;
};

/// Runs one level of the Cauchy test: initial data sampled on m cells, BDF2 to T.
CauchyLevel run_cauchy_level(int m, const CauchySetup& setup);

/// Consecutive levels must double m. Rows are produced for each adjacent pair.
std::vector<CauchyRow> cauchy_table(const std::vector<int>& levels, const CauchySetup& setup);
/// Same, reusing already computed levels (sorted by m).
std::vector<CauchyRow> cauchy_table(const std::vector<CauchyLevel>& levels,
                                    Interpolation interpolation);

}  // namespace ssfilm

#endif  // SSFILM_DIAGNOSTICS_HPP
