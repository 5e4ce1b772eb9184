// SPDX-License-Identifier: Apache-2.0

#include "ssfilm/ssfilm.h"

#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssfilm/diagnostics.hpp"
#include "ssfilm/energy.hpp"
#include "ssfilm/integrator.hpp"
#include "ssfilm/io.hpp"
#include "ssfilm/solvers.hpp"

struct ssf_field {
  ssfilm::CellField field;
};

struct ssf_stepper {
  ssfilm::TimeIntegrator integrator;
  std::optional<ssfilm::StepperState> state;
};

struct ssf_run_config {
  ssfilm::RunConfig config;
  std::vector<std::string> echo;
};

struct ssf_record_log {
  ssfilm::RecordCsvWriter writer;
};

namespace {

thread_local std::string last_error;

ssf_status fail(ssf_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Maps the active exception onto a status code.
ssf_status translate() {
  try {
    throw;
  } catch (const ssfilm::StabilityFailure& e) {
    return fail(SSF_ERR_STABILITY, e.what());
  } catch (const ssfilm::SolverFailure& e) {
    return fail(SSF_ERR_SOLVER, e.what());
  } catch (const ssfilm::ConfigError& e) {
    return fail(SSF_ERR_CONFIG, e.what());
  } catch (const ssfilm::FormatError& e) {
    return fail(SSF_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SSF_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SSF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SSF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SSF_ERR_INTERNAL, "unknown error");
  }
}

template <class F>
ssf_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return SSF_OK;
  } catch (...) {
    return translate();
  }
}

#define SSF_REQUIRE(cond, what) \
  if (!(cond)) return fail(SSF_ERR_INVALID_ARGUMENT, what)

ssfilm::SchemeParams to_params(const ssf_scheme& s) {
  ssfilm::SchemeParams p;
  p.epsilon = s.epsilon;
  p.A = s.A;
  p.dt = s.dt;
  p.allow_small_A = s.allow_small_A != 0;
  return p;
}

ssfilm::SolverKind to_kind(ssf_solver_kind k) {
  switch (k) {
    case SSF_SOLVER_PSD:
      return ssfilm::SolverKind::PSD;
    case SSF_SOLVER_PNCG1:
      return ssfilm::SolverKind::PNCG1;
    case SSF_SOLVER_PNCG2:
      return ssfilm::SolverKind::PNCG2;
  }
  throw std::invalid_argument("unknown solver kind");
}

ssf_solver_kind from_kind(ssfilm::SolverKind k) {
  switch (k) {
    case ssfilm::SolverKind::PNCG1:
      return SSF_SOLVER_PNCG1;
    case ssfilm::SolverKind::PNCG2:
      return SSF_SOLVER_PNCG2;
    case ssfilm::SolverKind::PSD:
      break;
  }
  return SSF_SOLVER_PSD;
}

ssfilm::SolverConfig to_config(const ssf_solver_opts& o) {
  ssfilm::SolverConfig c;
  c.kind = to_kind(o.kind);
  c.rel_tol = o.rel_tol;
  c.abs_tol = o.abs_tol;
  c.max_iter = o.max_iter;
  if (o.line_search == SSF_LINE_SEARCH_SECANT) {
    c.line_search = ssfilm::LineSearchKind::Secant;
  } else if (o.line_search == SSF_LINE_SEARCH_EXACT) {
    c.line_search = ssfilm::LineSearchKind::ExactCubic;
  } else {
    throw std::invalid_argument("unknown line search kind");
  }
  return c;
}

ssfilm::Interpolation to_interp(ssf_interp mode) {
  if (mode == SSF_INTERP_BILINEAR) return ssfilm::Interpolation::Bilinear;
  if (mode == SSF_INTERP_NEAREST) return ssfilm::Interpolation::NearestNeighbor;
  throw std::invalid_argument("unknown interpolation mode");
}

ssf_record to_record(const ssfilm::StepRecord& r) {
  return {r.k, r.t, r.energy, r.modified_energy, r.mass, r.roughness, r.h2_norm, r.iterations,
          r.wall_ms};
}

ssfilm::IntegratorOptions integrator_options(int warn_only) {
  ssfilm::IntegratorOptions o;
  o.on_violation = warn_only ? ssfilm::AssertMode::Warn : ssfilm::AssertMode::Abort;
  return o;
}

}  // namespace

extern "C" {

const char* ssf_version(void) { return ssfilm::version_string(); }

const char* ssf_last_error(void) { return last_error.c_str(); }

const char* ssf_status_name(ssf_status status) {
  switch (status) {
    case SSF_OK:
      return "ok";
    case SSF_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case SSF_ERR_CONFIG:
      return "configuration error";
    case SSF_ERR_IO:
      return "i/o or format error";
    case SSF_ERR_SOLVER:
      return "solver failure";
    case SSF_ERR_STABILITY:
      return "stability assertion failure";
    case SSF_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void ssf_scheme_defaults(ssf_scheme* scheme) {
  if (!scheme) return;
  const ssfilm::SchemeParams p;
  *scheme = {p.epsilon, p.A, p.dt, 0};
}

void ssf_solver_defaults(ssf_solver_opts* opts) {
  if (!opts) return;
  const ssfilm::SolverConfig c;
  *opts = {from_kind(c.kind), c.rel_tol, c.abs_tol, c.max_iter, SSF_LINE_SEARCH_EXACT};
}

const char* ssf_solver_name(ssf_solver_kind kind) {
  try {
    return ssfilm::to_string(to_kind(kind));
  } catch (...) {
    return "unknown";
  }
}

ssf_status ssf_solver_parse(const char* name, ssf_solver_kind* out) {
  SSF_REQUIRE(name && out, "ssf_solver_parse: null argument");
  return guarded([&] { *out = from_kind(ssfilm::parse_solver_kind(name)); });
}

ssf_status ssf_interp_parse(const char* name, ssf_interp* out) {
  SSF_REQUIRE(name && out, "ssf_interp_parse: null argument");
  return guarded([&] {
    *out = ssfilm::parse_interpolation(name) == ssfilm::Interpolation::Bilinear
               ? SSF_INTERP_BILINEAR
               : SSF_INTERP_NEAREST;
  });
}

ssf_status ssf_field_create(int m, double length, ssf_field** out) {
  SSF_REQUIRE(out, "ssf_field_create: null output");
  return guarded([&] { *out = new ssf_field{ssfilm::CellField(ssfilm::GridSpec(m, length))}; });
}

ssf_status ssf_field_from_values(int m, double length, const double* values, ssf_field** out) {
  SSF_REQUIRE(values && out, "ssf_field_from_values: null argument");
  return guarded([&] {
    const ssfilm::GridSpec grid(m, length);
    std::vector<double> v(values, values + grid.size());
    for (double x : v) {
      if (!std::isfinite(x)) throw std::invalid_argument("ssf_field_from_values: non-finite value");
    }
    *out = new ssf_field{ssfilm::CellField(grid, std::move(v))};
  });
}

ssf_status ssf_field_init(int m, double length, ssf_init_kind kind, uint64_t seed,
                          ssf_field** out) {
  SSF_REQUIRE(out, "ssf_field_init: null output");
  return guarded([&] {
    const ssfilm::GridSpec grid(m, length);
    ssfilm::InitKind k;
    switch (kind) {
      case SSF_INIT_ZERO:
        k = ssfilm::InitKind::Zero;
        break;
      case SSF_INIT_SINUSOIDAL:
        k = ssfilm::InitKind::Sinusoidal;
        break;
      case SSF_INIT_RANDOM:
        k = ssfilm::InitKind::Random;
        break;
      default:
        throw std::invalid_argument("ssf_field_init: unknown init kind");
    }
    *out = new ssf_field{ssfilm::make_initial_field(grid, k, seed)};
  });
}

void ssf_field_destroy(ssf_field* field) { delete field; }

int ssf_field_m(const ssf_field* field) { return field ? field->field.m() : 0; }

double ssf_field_length(const ssf_field* field) {
  return field ? field->field.grid().length() : 0.0;
}

ssf_status ssf_field_copy_values(const ssf_field* field, double* out, size_t count) {
  SSF_REQUIRE(field && out, "ssf_field_copy_values: null argument");
  SSF_REQUIRE(count >= field->field.size(), "ssf_field_copy_values: buffer too small");
  const auto v = field->field.values();
  std::copy(v.begin(), v.end(), out);
  return SSF_OK;
}

ssf_status ssf_field_mean(const ssf_field* field, double* out) {
  SSF_REQUIRE(field && out, "ssf_field_mean: null argument");
  return guarded([&] { *out = ssfilm::mean(field->field); });
}

ssf_status ssf_field_norm2(const ssf_field* field, double* out) {
  SSF_REQUIRE(field && out, "ssf_field_norm2: null argument");
  return guarded([&] { *out = ssfilm::norm(field->field, 2.0); });
}

ssf_status ssf_field_roughness(const ssf_field* field, double* out) {
  SSF_REQUIRE(field && out, "ssf_field_roughness: null argument");
  return guarded([&] { *out = ssfilm::roughness(field->field); });
}

ssf_status ssf_field_energy(const ssf_field* field, double epsilon, double* out) {
  SSF_REQUIRE(field && out, "ssf_field_energy: null argument");
  return guarded([&] {
    ssfilm::SchemeParams p;
    p.epsilon = epsilon;
    p.validate();
    *out = ssfilm::energy(field->field, p);
  });
}

ssf_status ssf_field_distance(const ssf_field* a, const ssf_field* b, double* out) {
  SSF_REQUIRE(a && b && out, "ssf_field_distance: null argument");
  return guarded([&] { *out = ssfilm::norm(a->field - b->field, 2.0); });
}

ssf_status ssf_field_prolong(const ssf_field* coarse, ssf_interp mode, ssf_field** out) {
  SSF_REQUIRE(coarse && out, "ssf_field_prolong: null argument");
  return guarded([&] { *out = new ssf_field{ssfilm::prolong(coarse->field, to_interp(mode))}; });
}

ssf_status ssf_snapshot_write(const ssf_field* field, double t, const char* path) {
  SSF_REQUIRE(field && path, "ssf_snapshot_write: null argument");
  return guarded([&] { ssfilm::write_snapshot(field->field, t, path); });
}

ssf_status ssf_snapshot_read(const char* path, ssf_field** out, double* t) {
  SSF_REQUIRE(path && out, "ssf_snapshot_read: null argument");
  return guarded([&] {
    ssfilm::Snapshot snap = ssfilm::read_snapshot(path);
    if (t) *t = snap.t;
    *out = new ssf_field{std::move(snap.field)};
  });
}

ssf_status ssf_stepper_create(const ssf_field* phi0, const ssf_scheme* scheme,
                              const ssf_solver_opts* opts, int warn_only, ssf_stepper** out,
                              ssf_record* first) {
  SSF_REQUIRE(phi0 && scheme && opts && out, "ssf_stepper_create: null argument");
  return guarded([&] {
    auto s = std::make_unique<ssf_stepper>(ssf_stepper{
        ssfilm::TimeIntegrator(phi0->field.grid(), to_params(*scheme), to_config(*opts),
                               integrator_options(warn_only)),
        std::nullopt});
    auto [state, rec] = s->integrator.bootstrap(phi0->field);
    s->state.emplace(std::move(state));
    if (first) *first = to_record(rec);
    *out = s.release();
  });
}

ssf_status ssf_stepper_create_with_history(const ssf_field* phi0, const ssf_field* phi1,
                                           const ssf_scheme* scheme, const ssf_solver_opts* opts,
                                           int warn_only, ssf_stepper** out, ssf_record* first) {
  SSF_REQUIRE(phi0 && phi1 && scheme && opts && out,
              "ssf_stepper_create_with_history: null argument");
  return guarded([&] {
    auto s = std::make_unique<ssf_stepper>(ssf_stepper{
        ssfilm::TimeIntegrator(phi0->field.grid(), to_params(*scheme), to_config(*opts),
                               integrator_options(warn_only)),
        std::nullopt});
    auto [state, rec] = s->integrator.from_history(phi0->field, phi1->field);
    s->state.emplace(std::move(state));
    if (first) *first = to_record(rec);
    *out = s.release();
  });
}

ssf_status ssf_stepper_advance(ssf_stepper* stepper, ssf_record* out) {
  SSF_REQUIRE(stepper && stepper->state, "ssf_stepper_advance: null stepper");
  return guarded([&] {
    auto [next, rec] = stepper->integrator.step(*stepper->state);
    *stepper->state = std::move(next);
    if (out) *out = to_record(rec);
  });
}

ssf_status ssf_stepper_field(const ssf_stepper* stepper, ssf_field** out) {
  SSF_REQUIRE(stepper && stepper->state && out, "ssf_stepper_field: null argument");
  return guarded([&] { *out = new ssf_field{stepper->state->current}; });
}

ssf_status ssf_stepper_last_residuals(const ssf_stepper* stepper, double* out, size_t capacity,
                                      size_t* count) {
  SSF_REQUIRE(stepper && count, "ssf_stepper_last_residuals: null argument");
  SSF_REQUIRE(out || capacity == 0, "ssf_stepper_last_residuals: null buffer");
  const auto& hist = stepper->integrator.last_solve().residual_history;
  *count = hist.size();
  const size_t n = std::min(capacity, hist.size());
  std::copy(hist.begin(), hist.begin() + static_cast<std::ptrdiff_t>(n), out);
  return SSF_OK;
}

int ssf_stepper_violations(const ssf_stepper* stepper) {
  return stepper ? stepper->integrator.violations() : 0;
}

void ssf_stepper_destroy(ssf_stepper* stepper) { delete stepper; }

ssf_status ssf_step_count(double final_time, double dt, long long* out) {
  SSF_REQUIRE(out, "ssf_step_count: null output");
  return guarded([&] { *out = ssfilm::step_count(final_time, dt); });
}

ssf_status ssf_loglog_fit(const double* t, const double* y, size_t n, double t_min, double t_max,
                          double* a, double* b) {
  SSF_REQUIRE(t && y && a && b, "ssf_loglog_fit: null argument");
  return guarded([&] {
    std::vector<std::pair<double, double>> series(n);
    for (size_t k = 0; k < n; ++k) series[k] = {t[k], y[k]};
    const ssfilm::PowerLawFit fit = ssfilm::loglog_fit(series, t_min, t_max);
    *a = fit.a;
    *b = fit.b;
  });
}

ssf_status ssf_cauchy_table(const int* levels, size_t n_levels, double epsilon, double A,
                            double dt_per_h, double final_time, const ssf_solver_opts* opts,
                            ssf_interp mode, ssf_cauchy_row* rows) {
  SSF_REQUIRE(levels && opts && rows, "ssf_cauchy_table: null argument");
  SSF_REQUIRE(n_levels >= 2, "ssf_cauchy_table: need at least two levels");
  return guarded([&] {
    ssfilm::CauchySetup setup;
    setup.epsilon = epsilon;
    setup.A = A;
    setup.dt_per_h = dt_per_h;
    setup.final_time = final_time;
    setup.solver = to_config(*opts);
    setup.interpolation = to_interp(mode);
    const auto table = ssfilm::cauchy_table(std::vector<int>(levels, levels + n_levels), setup);
    for (size_t k = 0; k < table.size(); ++k) {
      const auto& r = table[k];
      rows[k] = {r.m_coarse, r.m_fine, r.h_coarse,       r.h_fine,
                 r.error,    r.rate,   r.avg_iterations, r.cpu_per_step_s};
    }
  });
}

ssf_status ssf_run_config_load(const char* path, ssf_run_config** out) {
  SSF_REQUIRE(path && out, "ssf_run_config_load: null argument");
  return guarded([&] {
    ssfilm::RunConfig cfg = ssfilm::load_run_config(path);
    auto echo = cfg.echo();
    *out = new ssf_run_config{std::move(cfg), std::move(echo)};
  });
}

ssf_status ssf_run_config_parse(const char* text, ssf_run_config** out) {
  SSF_REQUIRE(text && out, "ssf_run_config_parse: null argument");
  return guarded([&] {
    ssfilm::RunConfig cfg = ssfilm::parse_run_config(text);
    auto echo = cfg.echo();
    *out = new ssf_run_config{std::move(cfg), std::move(echo)};
  });
}

void ssf_run_config_destroy(ssf_run_config* config) { delete config; }

int ssf_run_config_m(const ssf_run_config* config) { return config ? config->config.m : 0; }

double ssf_run_config_length(const ssf_run_config* config) {
  return config ? config->config.L : 0.0;
}

double ssf_run_config_final_time(const ssf_run_config* config) {
  return config ? config->config.T : 0.0;
}

uint64_t ssf_run_config_seed(const ssf_run_config* config) {
  return config ? config->config.seed : 0;
}

void ssf_run_config_scheme(const ssf_run_config* config, ssf_scheme* out) {
  if (!config || !out) return;
  const auto& p = config->config.scheme;
  *out = {p.epsilon, p.A, p.dt, p.allow_small_A ? 1 : 0};
}

void ssf_run_config_solver(const ssf_run_config* config, ssf_solver_opts* out) {
  if (!config || !out) return;
  const auto& c = config->config.solver;
  *out = {from_kind(c.kind), c.rel_tol, c.abs_tol, c.max_iter,
          c.line_search == ssfilm::LineSearchKind::Secant ? SSF_LINE_SEARCH_SECANT
                                                          : SSF_LINE_SEARCH_EXACT};
}

const char* ssf_run_config_out_dir(const ssf_run_config* config) {
  return config ? config->config.out_dir.c_str() : "";
}

size_t ssf_run_config_snapshot_count(const ssf_run_config* config) {
  return config ? config->config.snapshot_times.size() : 0;
}

double ssf_run_config_snapshot_time(const ssf_run_config* config, size_t index) {
  if (!config || index >= config->config.snapshot_times.size()) return std::nan("");
  return config->config.snapshot_times[index];
}

size_t ssf_run_config_echo_count(const ssf_run_config* config) {
  return config ? config->echo.size() : 0;
}

const char* ssf_run_config_echo_line(const ssf_run_config* config, size_t index) {
  if (!config || index >= config->echo.size()) return nullptr;
  return config->echo[index].c_str();
}

ssf_status ssf_run_config_initial_field(const ssf_run_config* config, ssf_field** out) {
  SSF_REQUIRE(config && out, "ssf_run_config_initial_field: null argument");
  return guarded([&] {
    const auto& c = config->config;
    *out = new ssf_field{ssfilm::make_initial_field(ssfilm::GridSpec(c.m, c.L), c.init, c.seed)};
  });
}

ssf_status ssf_record_log_open(const char* path, const char* const* provenance, size_t n_lines,
                               ssf_record_log** out) {
  SSF_REQUIRE(path && out, "ssf_record_log_open: null argument");
  SSF_REQUIRE(provenance || n_lines == 0, "ssf_record_log_open: null provenance");
  return guarded([&] {
    std::vector<std::string> lines;
    for (size_t k = 0; k < n_lines; ++k) lines.emplace_back(provenance[k] ? provenance[k] : "");
    *out = new ssf_record_log{ssfilm::RecordCsvWriter(path, lines)};
  });
}

ssf_status ssf_record_log_append(ssf_record_log* log, const ssf_record* record) {
  SSF_REQUIRE(log && record, "ssf_record_log_append: null argument");
  return guarded([&] {
    ssfilm::StepRecord r;
    r.k = record->k;
    r.t = record->t;
    r.energy = record->energy;
    r.modified_energy = record->modified_energy;
    r.mass = record->mass;
    r.roughness = record->roughness;
    r.h2_norm = record->h2_norm;
    r.iterations = record->iterations;
    r.wall_ms = record->wall_ms;
    log->writer.append(r);
  });
}

ssf_status ssf_record_log_close(ssf_record_log* log) {
  if (!log) return SSF_OK;
  const ssf_status status = guarded([&] { log->writer.flush(); });
  delete log;
  return status;
}

}  // extern "C"
