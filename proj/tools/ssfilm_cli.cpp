// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver. Uses only the C interface of libssfilm.
//
// Exit codes: 0 success, 1 configuration or input error, 2 solver failure,
// 3 stability-assertion failure.

#include <ssfilm/ssfilm.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitStability = 3;

struct FieldDeleter {
  void operator()(ssf_field* f) const { ssf_field_destroy(f); }
};
struct StepperDeleter {
  void operator()(ssf_stepper* s) const { ssf_stepper_destroy(s); }
};
struct ConfigDeleter {
  void operator()(ssf_run_config* c) const { ssf_run_config_destroy(c); }
};
struct LogDeleter {
  void operator()(ssf_record_log* l) const { ssf_record_log_close(l); }
};
using Field = std::unique_ptr<ssf_field, FieldDeleter>;
using Stepper = std::unique_ptr<ssf_stepper, StepperDeleter>;
using RunConfig = std::unique_ptr<ssf_run_config, ConfigDeleter>;
using RecordLog = std::unique_ptr<ssf_record_log, LogDeleter>;

// Carries a failed status up to main, which maps it to an exit code.
struct Failure {
  ssf_status status;
  std::string message;
};

void check(ssf_status status, const std::string& context) {
  if (status != SSF_OK) throw Failure{status, context + ": " + ssf_last_error()};
}

int exit_code(ssf_status status) {
  switch (status) {
    case SSF_OK:
      return kExitOk;
    case SSF_ERR_SOLVER:
      return kExitSolver;
    case SSF_ERR_STABILITY:
      return kExitStability;
    default:
      return kExitConfig;
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream out;
  for (std::size_t k = 0; k < v.size(); ++k) out << (k ? "," : "") << v[k];
  return out.str();
}

RecordLog open_log(const std::string& path, const std::vector<std::string>& provenance) {
  std::vector<const char*> lines;
  for (const auto& l : provenance) lines.push_back(l.c_str());
  ssf_record_log* log = nullptr;
  check(ssf_record_log_open(path.c_str(), lines.data(), lines.size(), &log), "open " + path);
  return RecordLog(log);
}

std::ofstream open_text(const std::string& path, const std::vector<std::string>& provenance) {
  std::ofstream out(path);
  if (!out) throw Failure{SSF_ERR_IO, "cannot open '" + path + "' for writing"};
  out << "# " << ssf_version() << '\n';
  for (const auto& l : provenance) out << "# " << l << '\n';
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Failure{SSF_ERR_IO, "cannot create directory '" + dir + "': " + ec.message()};
}

ssf_solver_kind parse_solver(const std::string& name) {
  ssf_solver_kind kind{};
  check(ssf_solver_parse(name.c_str(), &kind), "--solver");
  return kind;
}

struct Timer {
  double ms = 0.0;
  int steps = 0;
  double iterations = 0.0;
};

// Runs phi0 to final_time. `on_record` sees every record including the
// bootstrap step; iteration averages cover the BDF2 steps only.
template <class OnRecord>
Timer integrate(const ssf_field* phi0, const ssf_scheme& scheme, const ssf_solver_opts& opts,
                double final_time, bool warn_only, OnRecord&& on_record,
                Stepper* keep = nullptr) {
  long long total = 0;
  check(ssf_step_count(final_time, scheme.dt, &total), "step count");
  if (total < 1) throw Failure{SSF_ERR_CONFIG, "final time is shorter than one time step"};
  ssf_stepper* raw = nullptr;
  ssf_record rec{};
  check(ssf_stepper_create(phi0, &scheme, &opts, warn_only ? 1 : 0, &raw, &rec), "bootstrap");
  Stepper stepper(raw);
  on_record(stepper.get(), rec);
  Timer timer;
  for (long long k = 1; k < total; ++k) {
    check(ssf_stepper_advance(stepper.get(), &rec), "step " + std::to_string(k + 1));
    timer.ms += rec.wall_ms;
    timer.iterations += rec.iterations;
    ++timer.steps;
    on_record(stepper.get(), rec);
  }
  if (keep) *keep = std::move(stepper);
  return timer;
}

// ---- run -------------------------------------------------------------------

int cmd_run(const std::string& config_path, bool warn_only) {
  ssf_run_config* raw = nullptr;
  check(ssf_run_config_load(config_path.c_str(), &raw), config_path);
  RunConfig cfg(raw);

  ssf_scheme scheme{};
  ssf_solver_opts opts{};
  ssf_run_config_scheme(cfg.get(), &scheme);
  ssf_run_config_solver(cfg.get(), &opts);
  const std::string out_dir = ssf_run_config_out_dir(cfg.get());
  ensure_dir(out_dir);

  std::vector<std::string> provenance;
  provenance.push_back("config = " + config_path);
  for (std::size_t k = 0; k < ssf_run_config_echo_count(cfg.get()); ++k) {
    provenance.emplace_back(ssf_run_config_echo_line(cfg.get(), k));
  }
  std::vector<double> snaps;
  for (std::size_t k = 0; k < ssf_run_config_snapshot_count(cfg.get()); ++k) {
    snaps.push_back(ssf_run_config_snapshot_time(cfg.get(), k));
  }

  ssf_field* phi0_raw = nullptr;
  check(ssf_run_config_initial_field(cfg.get(), &phi0_raw), "initial data");
  Field phi0(phi0_raw);

  const std::string csv = (std::filesystem::path(out_dir) / "records.csv").string();
  RecordLog log = open_log(csv, provenance);

  std::size_t next_snap = 0;
  auto snapshot = [&](const ssf_field* f, double t) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_t%.6f.txt", t);
    const std::string path = (std::filesystem::path(out_dir) / name).string();
    check(ssf_snapshot_write(f, t, path.c_str()), "snapshot");
  };
  const double half_step = 0.5 * scheme.dt;
  while (next_snap < snaps.size() && snaps[next_snap] < half_step) {
    snapshot(phi0.get(), 0.0);
    ++next_snap;
  }

  int violations = 0;
  const Timer timer = integrate(
      phi0.get(), scheme, opts, ssf_run_config_final_time(cfg.get()), warn_only,
      [&](ssf_stepper* s, const ssf_record& rec) {
        check(ssf_record_log_append(log.get(), &rec), "write record");
        bool taken = false;
        while (next_snap < snaps.size() && snaps[next_snap] < rec.t + half_step) {
          if (!taken) {
            ssf_field* f = nullptr;
            check(ssf_stepper_field(s, &f), "snapshot");
            Field owned(f);
            snapshot(owned.get(), rec.t);
            taken = true;
          }
          ++next_snap;
        }
        violations = ssf_stepper_violations(s);
      });
  check(ssf_record_log_close(log.release()), "close " + csv);

  std::cout << "wrote " << csv << " (" << timer.steps + 1 << " records";
  if (timer.steps > 0) std::cout << ", " << timer.iterations / timer.steps << " iterations/step";
  std::cout << ")\n";
  if (violations > 0) std::cout << "stability warnings: " << violations << '\n';
  return kExitOk;
}

// ---- converge --------------------------------------------------------------

int cmd_converge(const std::vector<int>& levels, const std::string& solver,
                 const std::string& interp, double epsilon, double A, double dt_per_h,
                 double final_time, const std::string& out) {
  ssf_solver_opts opts{};
  ssf_solver_defaults(&opts);
  opts.kind = parse_solver(solver);
  ssf_interp mode{};
  check(ssf_interp_parse(interp.c_str(), &mode), "--interp");
  if (levels.size() < 2) throw Failure{SSF_ERR_CONFIG, "--levels needs at least two entries"};

  std::vector<ssf_cauchy_row> rows(levels.size() - 1);
  check(ssf_cauchy_table(levels.data(), levels.size(), epsilon, A, dt_per_h, final_time, &opts,
                         mode, rows.data()),
        "cauchy table");

  std::printf("%-8s %-8s %-12s %-6s %-8s %s\n", "m_c", "m_f", "error", "rate", "iters",
              "cpu/step(s)");
  for (const auto& r : rows) {
    std::printf("%-8d %-8d %-12.4e %-6.2f %-8.2f %.4g\n", r.m_coarse, r.m_fine, r.error, r.rate,
                r.avg_iterations, r.cpu_per_step_s);
  }
  if (!out.empty()) {
    std::ofstream csv = open_text(
        out, {"command = converge", "levels = " + join(levels), "solver = " + solver,
              "interpolation = " + interp, "epsilon = " + fmt(epsilon), "A = " + fmt(A),
              "dt_per_h = " + fmt(dt_per_h), "T = " + fmt(final_time)});
    csv << "h_c,h_f,error,rate,avg_iters,cpu_per_step_s\n";
    for (const auto& r : rows) {
      csv << fmt(r.h_coarse) << ',' << fmt(r.h_fine) << ',' << fmt(r.error) << ','
          << fmt(r.rate) << ',' << fmt(r.avg_iterations) << ',' << fmt(r.cpu_per_step_s)
          << '\n';
    }
  }
  return kExitOk;
}

// ---- complexity ------------------------------------------------------------

int cmd_complexity(const std::vector<int>& ms, const std::vector<double>& epsilons,
                   const std::vector<std::string>& solvers, double length, double dt,
                   double final_time, const std::string& out) {
  std::ofstream csv = open_text(
      out, {"command = complexity", "m = " + join(ms), "epsilon = " + join(epsilons),
            "solvers = " + join(solvers), "L = " + fmt(length), "dt = " + fmt(dt),
            "T = " + fmt(final_time), "init = sinusoidal"});
  csv << "solver,m,epsilon,iteration,rel_residual\n";
  std::printf("%-7s %-6s %-8s %s\n", "solver", "m", "epsilon", "avg_iters");
  for (const auto& name : solvers) {
    ssf_solver_opts opts{};
    ssf_solver_defaults(&opts);
    opts.kind = parse_solver(name);
    for (int m : ms) {
      for (double eps : epsilons) {
        ssf_scheme scheme{};
        ssf_scheme_defaults(&scheme);
        scheme.epsilon = eps;
        scheme.dt = dt;
        ssf_field* raw = nullptr;
        check(ssf_field_init(m, length, SSF_INIT_SINUSOIDAL, 0, &raw), "initial data");
        Field phi0(raw);
        Stepper last;
        const Timer t = integrate(
            phi0.get(), scheme, opts, final_time, false, [](ssf_stepper*, const ssf_record&) {},
            &last);
        // Residual history of the solve at the final time.
        std::size_t count = 0;
        check(ssf_stepper_last_residuals(last.get(), nullptr, 0, &count), "residuals");
        std::vector<double> hist(count);
        check(ssf_stepper_last_residuals(last.get(), hist.data(), hist.size(), &count),
              "residuals");
        for (std::size_t k = 0; k < hist.size(); ++k) {
          csv << ssf_solver_name(opts.kind) << ',' << m << ',' << fmt(eps) << ',' << k << ','
              << fmt(hist[k]) << '\n';
        }
        std::printf("%-7s %-6d %-8g %.2f\n", ssf_solver_name(opts.kind), m, eps,
                    t.steps ? t.iterations / t.steps : 0.0);
      }
    }
  }
  return kExitOk;
}

// ---- compare-solvers -------------------------------------------------------

int cmd_compare(int m, double length, double epsilon, double dt, double final_time,
                std::uint64_t seed, const std::string& out) {
  std::vector<std::string> provenance = {
      "command = compare-solvers", "m = " + std::to_string(m), "L = " + fmt(length),
      "epsilon = " + fmt(epsilon),  "dt = " + fmt(dt),         "T = " + fmt(final_time),
      "init = random",              "seed = " + std::to_string(seed)};
  std::ofstream csv;
  if (!out.empty()) {
    csv = open_text(out, provenance);
    csv << "solver,avg_iters,total_cpu_s\n";
  }
  std::printf("%-7s %-10s %s\n", "solver", "avg_iters", "total_cpu(s)");
  double psd_iters = 0.0;
  for (ssf_solver_kind kind : {SSF_SOLVER_PSD, SSF_SOLVER_PNCG1, SSF_SOLVER_PNCG2}) {
    ssf_scheme scheme{};
    ssf_scheme_defaults(&scheme);
    scheme.epsilon = epsilon;
    scheme.dt = dt;
    ssf_solver_opts opts{};
    ssf_solver_defaults(&opts);
    opts.kind = kind;
    ssf_field* raw = nullptr;
    check(ssf_field_init(m, length, SSF_INIT_RANDOM, seed, &raw), "initial data");
    Field phi0(raw);
    double total_ms = 0.0;
    const Timer t = integrate(phi0.get(), scheme, opts, final_time, false,
                              [&](ssf_stepper*, const ssf_record& r) { total_ms += r.wall_ms; });
    const double avg = t.steps ? t.iterations / t.steps : 0.0;
    if (kind == SSF_SOLVER_PSD) psd_iters = avg;
    std::printf("%-7s %-10.3f %.3f", ssf_solver_name(kind), avg, total_ms / 1000.0);
    if (kind != SSF_SOLVER_PSD && avg > 0.0) std::printf("   PSD/%s = %.3f", ssf_solver_name(kind), psd_iters / avg);
    std::printf("\n");
    if (csv.is_open()) {
      csv << ssf_solver_name(kind) << ',' << fmt(avg) << ',' << fmt(total_ms / 1000.0) << '\n';
    }
  }
  return kExitOk;
}

// ---- coarsen ---------------------------------------------------------------

int cmd_coarsen(int m, double length, double epsilon, double dt, double final_time,
                std::uint64_t seed, const std::string& solver, std::vector<double> window,
                int stride, const std::string& out_dir) {
  if (window.empty()) window = {10.0, std::min(final_time, 3000.0)};
  if (window.size() != 2 || !(window[0] < window[1])) {
    throw Failure{SSF_ERR_CONFIG, "--window expects two increasing times"};
  }
  if (stride < 1) throw Failure{SSF_ERR_CONFIG, "--stride must be >= 1"};
  ensure_dir(out_dir);
  ssf_scheme scheme{};
  ssf_scheme_defaults(&scheme);
  scheme.epsilon = epsilon;
  scheme.dt = dt;
  ssf_solver_opts opts{};
  ssf_solver_defaults(&opts);
  opts.kind = parse_solver(solver);

  const std::vector<std::string> provenance = {
      "command = coarsen",       "m = " + std::to_string(m),      "L = " + fmt(length),
      "epsilon = " + fmt(epsilon), "dt = " + fmt(dt),              "T = " + fmt(final_time),
      "solver = " + solver,      "init = random",                 "seed = " + std::to_string(seed),
      "stride = " + std::to_string(stride)};
  const std::string csv = (std::filesystem::path(out_dir) / "records.csv").string();
  RecordLog log = open_log(csv, provenance);

  ssf_field* raw = nullptr;
  check(ssf_field_init(m, length, SSF_INIT_RANDOM, seed, &raw), "initial data");
  Field phi0(raw);

  // Fits use exactly the records written to the CSV.
  std::vector<double> ts, rough, shifted;
  const double quarter_area = 0.25 * length * length;
  integrate(phi0.get(), scheme, opts, final_time, false,
            [&](ssf_stepper*, const ssf_record& r) {
              if (r.k % stride != 0) return;
              check(ssf_record_log_append(log.get(), &r), "write record");
              ts.push_back(r.t);
              rough.push_back(r.roughness);
              shifted.push_back(r.energy + quarter_area);
            });
  check(ssf_record_log_close(log.release()), "close " + csv);

  double ar = 0, br = 0, ae = 0, be = 0;
  check(ssf_loglog_fit(ts.data(), rough.data(), ts.size(), window[0], window[1], &ar, &br),
        "roughness fit");
  check(ssf_loglog_fit(ts.data(), shifted.data(), ts.size(), window[0], window[1], &ae, &be),
        "energy fit");
  std::ofstream fits = open_text((std::filesystem::path(out_dir) / "fits.txt").string(),
                                 provenance);
  fits << "window = " << fmt(window[0]) << "," << fmt(window[1]) << '\n';
  fits << "roughness a = " << fmt(ar) << " b = " << fmt(br) << '\n';
  fits << "energy_shifted a = " << fmt(ae) << " b = " << fmt(be) << '\n';
  std::printf("roughness: log W = %.5f + %.5f log t\n", ar, br);
  std::printf("energy:    log(F_h + |Omega|/4) = %.5f + %.5f log t\n", ae, be);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slope-selection thin-film simulator"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(ssf_version()));

  bool warn_only = false;
  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a simulation described by a key = value config file");
  run->add_option("config", config_path, "Config file")->required();
  run->add_flag("--warn-only", warn_only, "Count energy/mass violations instead of aborting");

  std::vector<int> levels = {16, 32, 64, 128, 256};
  std::string solver = "psd";
  std::string interp = "nearest";
  double epsilon = 0.1, A = 1.0 / 16.0, dt_per_h = 0.01, conv_T = 0.32;
  std::string out;
  auto* conv = app.add_subcommand("converge", "Cauchy convergence table (sinusoidal data, L = 3.2)");
  conv->add_option("--levels", levels, "Grid sizes, each double the previous")->delimiter(',');
  conv->add_option("--solver", solver, "psd, pncg1 or pncg2");
  conv->add_option("--interp", interp, "Coarse-to-fine interpolation: nearest or bilinear");
  conv->add_option("--epsilon", epsilon, "Epsilon");
  conv->add_option("-A", A, "Stabilization parameter");
  conv->add_option("--dt-per-h", dt_per_h, "Refinement path s = C h");
  conv->add_option("-T,--final-time", conv_T, "Final time");
  conv->add_option("-o,--out", out, "Optional CSV output");

  std::vector<int> cx_m = {64, 128, 256};
  std::vector<double> cx_eps = {0.1, 0.05, 0.03};
  std::vector<std::string> cx_solvers = {"psd", "pncg1", "pncg2"};
  double cx_L = 3.2, cx_dt = 1e-3, cx_T = 0.02;
  std::string cx_out = "complexity.csv";
  auto* cx = app.add_subcommand("complexity", "Residual-vs-iteration histories over h and epsilon");
  cx->add_option("--m", cx_m, "Grid sizes")->delimiter(',');
  cx->add_option("--epsilon", cx_eps, "Epsilon values")->delimiter(',');
  cx->add_option("--solvers", cx_solvers, "Solvers to compare")->delimiter(',');
  cx->add_option("-L,--length", cx_L, "Domain side length");
  cx->add_option("--dt", cx_dt, "Time step");
  cx->add_option("-T,--final-time", cx_T, "Final time; histories are from the last step");
  cx->add_option("-o,--out", cx_out, "CSV output");

  int cmp_m = 256;
  double cmp_L = 12.8, cmp_eps = 0.03, cmp_dt = 1e-3, cmp_T = 0.05;
  std::uint64_t cmp_seed = 1;
  std::string cmp_out;
  auto* cmp = app.add_subcommand("compare-solvers", "Average iterations and CPU time of PSD, PNCG1, PNCG2");
  cmp->add_option("--m", cmp_m, "Grid size");
  cmp->add_option("-L,--length", cmp_L, "Domain side length");
  cmp->add_option("--epsilon", cmp_eps, "Epsilon");
  cmp->add_option("--dt", cmp_dt, "Time step");
  cmp->add_option("-T,--final-time", cmp_T, "Final time");
  cmp->add_option("--seed", cmp_seed, "Seed of the random initial data");
  cmp->add_option("-o,--out", cmp_out, "Optional CSV output");

  int co_m = 256;
  double co_L = 12.8, co_eps = 0.03, co_dt = 1e-3, co_T = 400.0;
  std::uint64_t co_seed = 1;
  std::string co_solver = "pncg2";
  std::vector<double> co_window;
  int co_stride = 10;
  std::string co_dir = "coarsen_out";
  auto* co = app.add_subcommand("coarsen", "Long coarsening run with power-law fits");
  co->add_option("--m", co_m, "Grid size");
  co->add_option("-L,--length", co_L, "Domain side length");
  co->add_option("--epsilon", co_eps, "Epsilon");
  co->add_option("--dt", co_dt, "Time step");
  co->add_option("-T,--final-time", co_T, "Final time");
  co->add_option("--seed", co_seed, "Seed of the random initial data");
  co->add_option("--solver", co_solver, "psd, pncg1 or pncg2");
  co->add_option("--window", co_window, "Fit window t_min,t_max (default 10,min(T,3000))")
      ->delimiter(',')
      ->default_str("");
  co->add_option("--stride", co_stride, "Record every n-th step");
  co->add_option("-o,--out-dir", co_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, warn_only);
    if (*conv) return cmd_converge(levels, solver, interp, epsilon, A, dt_per_h, conv_T, out);
    if (*cx) return cmd_complexity(cx_m, cx_eps, cx_solvers, cx_L, cx_dt, cx_T, cx_out);
    if (*cmp) return cmd_compare(cmp_m, cmp_L, cmp_eps, cmp_dt, cmp_T, cmp_seed, cmp_out);
    if (*co) {
      return cmd_coarsen(co_m, co_L, co_eps, co_dt, co_T, co_seed, co_solver, co_window,
                         co_stride, co_dir);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
