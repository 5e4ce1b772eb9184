// SPDX-License-Identifier: Apache-2.0
//
// File formats: field snapshots, run configuration, step-record CSV logs.

#ifndef SSFILM_IO_HPP
#define SSFILM_IO_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssfilm/energy.hpp"
#include "ssfilm/grid.hpp"
#include "ssfilm/integrator.hpp"
#include "ssfilm/solvers.hpp"

namespace ssfilm {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Snapshot {
  CellField field;
  double t = 0.0;
};

/// Header line "ssfield v1 m=<m> L=<L> t=<t>" then m lines of m values
/// (line i holds x-index i), 17 significant digits. Reading back is bit-exact.
void write_snapshot(const CellField& phi, double t, const std::string& path);
Snapshot read_snapshot(const std::string& path);
std::string format_snapshot(const CellField& phi, double t);
Snapshot parse_snapshot(const std::string& text);

enum class InitKind { Zero, Sinusoidal, Random };
InitKind parse_init_kind(const std::string& name);
const char* to_string(InitKind kind);

struct RunConfig {
  int m = 0;
  double L = 0.0;
  SchemeParams scheme;
  double T = 0.0;
  SolverConfig solver;
  InitKind init = InitKind::Zero;
  std::uint64_t seed = 0;
  std::vector<double> snapshot_times;
  std::string out_dir = ".";

  /// key = value echo of every setting, one per line, in a fixed order.
  std::vector<std::string> echo() const;
};

/// Flat `key = value` text; '#' starts a comment. Required keys: m, L,
/// epsilon, dt, T, init. Unknown keys and missing required keys throw
/// ConfigError naming the key.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

CellField make_initial_field(const GridSpec& grid, InitKind kind, std::uint64_t seed);

/// Writes "# ..." provenance lines, then the column header
/// t,F_h,F_tilde,mass,roughness,iters,wall_ms, then one row per record.
class RecordCsvWriter {
 public:
  RecordCsvWriter(const std::string& path, const std::vector<std::string>& provenance);
  void append(const StepRecord& rec);
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

std::string format_record_row(const StepRecord& rec);
const char* version_string();

}  // namespace ssfilm

#endif  // SSFILM_IO_HPP
