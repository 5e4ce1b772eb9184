// SPDX-License-Identifier: Apache-2.0

#include "ssfilm/diagnostics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ssfilm/integrator.hpp"

namespace ssfilm {

double sinusoidal_profile(double x, double y, double length) {
  constexpr double pi = std::numbers::pi;
  const double s = std::sin(2.0 * pi * x / length);
  return 0.1 * s * s * std::sin(4.0 * pi * (y - 1.4) / length) -
         0.1 * std::cos(2.0 * pi * (x - 2.0) / length) * std::sin(2.0 * pi * y / length);
}

namespace {

void center(CellField& phi) {
  const double mu = mean(phi);
  for (double& v : phi.values()) v -= mu;
}

}  // namespace

CellField init_sinusoidal(const GridSpec& grid) {
  if (std::abs(grid.length() - 3.2) > 1e-12) {
    std::cerr << "warning: sinusoidal initial data is defined for L = 3.2, got L = "
              << grid.length() << '\n';
  }
  CellField phi(grid);
  const double h = grid.h();
  for (int i = 0; i < grid.m(); ++i) {
    for (int j = 0; j < grid.m(); ++j) {
      phi(i, j) = sinusoidal_profile((i + 0.5) * h, (j + 0.5) * h, grid.length());
    }
  }
  center(phi);
  return phi;
}

CellField init_random(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  CellField phi(grid);
  // Top 53 bits of each draw -> uniform on [0, 1); independent of the
  // standard library's distribution implementation.
  for (double& v : phi.values()) {
    const double r = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    v = 0.05 * (2.0 * r - 1.0);
  }
  center(phi);
  return phi;
}

double roughness(const CellField& phi) {
  const double mu = mean(phi);
  double sum = 0.0;
  for (double v : phi.values()) sum += (v - mu) * (v - mu);
  const double h = phi.grid().h();
  const double mn = static_cast<double>(phi.size());
  return std::sqrt(h * h / mn * sum);
}

double shifted_energy(double energy, const GridSpec& grid) { return energy + 0.25 * grid.area(); }

PowerLawFit loglog_fit(const std::vector<std::pair<double, double>>& series, double t_min,
                       double t_max) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (const auto& [t, y] : series) {
    if (t < t_min || t > t_max) continue;
    if (!(t > 0.0) || !(y > 0.0)) {
      throw std::invalid_argument("loglog_fit: non-positive value in window");
    }
    const double lx = std::log(t);
    const double ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 3) throw std::invalid_argument("loglog_fit: fewer than 3 points in window");
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (!(denom > 0.0)) throw std::invalid_argument("loglog_fit: degenerate time window");
  PowerLawFit fit;
  fit.b = (dn * sxy - sx * sy) / denom;
  fit.a = (sy - fit.b * sx) / dn;
  fit.points = n;
  return fit;
}

Interpolation parse_interpolation(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "nearest") return Interpolation::NearestNeighbor;
  if (s == "bilinear") return Interpolation::Bilinear;
  throw std::invalid_argument("unknown interpolation '" + name + "' (expected nearest or bilinear)");
}

const char* to_string(Interpolation mode) {
  return mode == Interpolation::Bilinear ? "bilinear" : "nearest";
}

CellField prolong(const CellField& coarse, Interpolation mode) {
  const int mc = coarse.m();
  const GridSpec fine_grid(2 * mc, coarse.grid().length());
  CellField fine(fine_grid);
  for (int i = 0; i < mc; ++i) {
    for (int j = 0; j < mc; ++j) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          double v = coarse(i, j);
          if (mode == Interpolation::Bilinear) {
            // Fine centers sit a quarter coarse cell from the coarse center.
            const int ni = a == 0 ? i - 1 : i + 1;
            const int nj = b == 0 ? j - 1 : j + 1;
            v = (9.0 * coarse(i, j) + 3.0 * coarse(ni, j) + 3.0 * coarse(i, nj) +
                 coarse(ni, nj)) /
                16.0;
          }
          fine(2 * i + a, 2 * j + b) = v;
        }
      }
    }
  }
  return fine;
}

CellField restrict_average(const CellField& fine) {
  if (fine.m() % 4 != 0) {
    throw std::invalid_argument("restrict_average: coarse grid would have odd or < 4 cells");
  }
  const int mc = fine.m() / 2;
  CellField coarse(GridSpec(mc, fine.grid().length()));
  for (int i = 0; i < mc; ++i) {
    for (int j = 0; j < mc; ++j) {
      coarse(i, j) = 0.25 * (fine(2 * i, 2 * j) + fine(2 * i + 1, 2 * j) + fine(2 * i, 2 * j + 1) +
                             fine(2 * i + 1, 2 * j + 1));
    }
  }
  return coarse;
}

CauchyLevel run_cauchy_level(int m, const CauchySetup& setup) {
  const GridSpec grid(m, setup.length);
  SchemeParams params;
  params.epsilon = setup.epsilon;
  params.A = setup.A;
  params.dt = setup.dt_per_h * grid.h();
  params.allow_small_A = setup.A < 1.0 / 16.0;

  TimeIntegrator integrator(grid, params, setup.solver);
  CellField last(grid);
  double iters = 0.0;
  double wall = 0.0;
  long long bdf2_steps = 0;
  const auto records =
      integrator.run(init_sinusoidal(grid), setup.final_time,
                     [&](const StepperState& state, const StepRecord& rec) {
                       if (rec.k >= 2) {
                         iters += rec.iterations;
                         wall += rec.wall_ms;
                         ++bdf2_steps;
                       }
                       last = state.current;
                     });

  const double per_step = bdf2_steps > 0 ? 1.0 / static_cast<double>(bdf2_steps) : 0.0;
  return CauchyLevel{m, params.dt, static_cast<long long>(records.size()), iters * per_step,
                     wall / 1000.0 * per_step, std::move(last)};
}

std::vector<CauchyRow> cauchy_table(const std::vector<CauchyLevel>& levels,
                                    Interpolation interpolation) {
  std::vector<CauchyRow> rows;
  for (std::size_t n = 1; n < levels.size(); ++n) {
    const CauchyLevel& c = levels[n - 1];
    const CauchyLevel& f = levels[n];
    if (f.m != 2 * c.m) throw std::invalid_argument("cauchy_table: levels must double m");
    const CellField delta = f.final_field - prolong(c.final_field, interpolation);
    CauchyRow row;
    row.m_coarse = c.m;
    row.m_fine = f.m;
    row.h_coarse = c.final_field.grid().h();
    row.h_fine = f.final_field.grid().h();
    row.error = norm(delta, 2.0);
    row.rate = rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                            : std::log2(rows.back().error / row.error);
    row.avg_iterations = f.avg_iterations;
    row.cpu_per_step_s = f.cpu_per_step_s;
    rows.push_back(row);
  }
  return rows;
}

std::vector<CauchyRow> cauchy_table(const std::vector<int>& levels, const CauchySetup& setup) {
  for (std::size_t n = 1; n < levels.size(); ++n) {
    if (levels[n] != 2 * levels[n - 1]) {
      throw std::invalid_argument("cauchy_table: consecutive levels must double m");
    }
  }
  std::vector<CauchyLevel> runs;
  runs.reserve(levels.size());
  for (int m : levels) runs.push_back(run_cauchy_level(m, setup));
  return cauchy_table(runs, setup.interpolation);
}

}  // namespace ssfilm
