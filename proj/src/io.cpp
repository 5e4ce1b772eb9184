// SPDX-License-Identifier: Apache-2.0

#include "ssfilm/io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "ssfilm/diagnostics.hpp"

namespace ssfilm {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& token, double& out) {
  if (token.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(token.c_str(), &end);
  return end == token.c_str() + token.size() && errno != ERANGE;
}

bool parse_int(const std::string& token, long long& out) {
  if (token.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtoll(token.c_str(), &end, 10);
  return end == token.c_str() + token.size() && errno != ERANGE;
}

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(std::string(what) + ": cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string format_snapshot(const CellField& phi, double t) {
  std::string out = "ssfield v1 m=" + std::to_string(phi.m()) + " L=" +
                    fmt17(phi.grid().length()) + " t=" + fmt17(t) + "\n";
  out.reserve(out.size() + phi.size() * 25);
  for (int i = 0; i < phi.m(); ++i) {
    for (int j = 0; j < phi.m(); ++j) {
      if (j) out += ' ';
      out += fmt17(phi(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_snapshot(const CellField& phi, double t, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("snapshot: cannot open '" + path + "' for writing");
  out << format_snapshot(phi, t);
  if (!out) throw FormatError("snapshot: write to '" + path + "' failed");
}

Snapshot parse_snapshot(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) throw FormatError("snapshot: empty input");
  std::istringstream hs(header);
  std::string magic, version, mtok, ltok, ttok, extra;
  hs >> magic >> version >> mtok >> ltok >> ttok;
  if (magic != "ssfield" || version != "v1" || mtok.rfind("m=", 0) != 0 ||
      ltok.rfind("L=", 0) != 0 || ttok.rfind("t=", 0) != 0 || (hs >> extra)) {
    throw FormatError("snapshot: malformed header '" + header + "'");
  }
  long long m = 0;
  double length = 0.0;
  double t = 0.0;
  if (!parse_int(mtok.substr(2), m) || !parse_double(ltok.substr(2), length) ||
      !parse_double(ttok.substr(2), t) || m < 4 || m > (1 << 15)) {
    throw FormatError("snapshot: malformed header '" + header + "'");
  }
  if (m % 2 != 0 || !(length > 0.0) || !std::isfinite(length)) {
    throw FormatError("snapshot: malformed header '" + header + "'");
  }
  const GridSpec grid(static_cast<int>(m), length);

  std::vector<double> values;
  values.reserve(grid.size());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++rows;
    std::istringstream ls(line);
    std::string tok;
    int count = 0;
    while (ls >> tok) {
      double v = 0.0;
      if (!parse_double(tok, v)) throw FormatError("snapshot: bad value '" + tok + "'");
      if (!std::isfinite(v)) throw FormatError("snapshot: non-finite value on row " +
                                               std::to_string(rows));
      values.push_back(v);
      ++count;
    }
    if (count != m) {
      throw FormatError("snapshot: row " + std::to_string(rows) + " has " +
                        std::to_string(count) + " values, expected " + std::to_string(m));
    }
  }
  if (rows != m) {
    throw FormatError("snapshot: found " + std::to_string(rows) + " rows, expected " +
                      std::to_string(m));
  }
  return {CellField(grid, std::move(values)), t};
}

Snapshot read_snapshot(const std::string& path) {
  return parse_snapshot(read_file(path, "snapshot"));
}

InitKind parse_init_kind(const std::string& name) {
  if (name == "zero") return InitKind::Zero;
  if (name == "sinusoidal") return InitKind::Sinusoidal;
  if (name == "random") return InitKind::Random;
  throw ConfigError("config: init must be zero, sinusoidal or random (got '" + name + "')");
}

const char* to_string(InitKind kind) {
  switch (kind) {
    case InitKind::Zero:
      return "zero";
    case InitKind::Sinusoidal:
      return "sinusoidal";
    case InitKind::Random:
      return "random";
  }
  return "zero";
}

std::vector<std::string> RunConfig::echo() const {
  std::string times;
  for (std::size_t n = 0; n < snapshot_times.size(); ++n) {
    if (n) times += ',';
    times += fmt17(snapshot_times[n]);
  }
  return {
      "m = " + std::to_string(m),
      "L = " + fmt17(L),
      "epsilon = " + fmt17(scheme.epsilon),
      "A = " + fmt17(scheme.A),
      "dt = " + fmt17(scheme.dt),
      "T = " + fmt17(T),
      std::string("solver = ") + to_string(solver.kind),
      "rel_tol = " + fmt17(solver.rel_tol),
      "max_iter = " + std::to_string(solver.max_iter),
      std::string("init = ") + to_string(init),
      "seed = " + std::to_string(seed),
      "snapshot_times = " + times,
      "out_dir = " + out_dir,
  };
}

RunConfig parse_run_config(const std::string& text) {
  static const std::set<std::string> known = {"m",       "L",        "epsilon", "A",
                                              "dt",      "T",        "solver",  "rel_tol",
                                              "max_iter", "init",    "seed",    "snapshot_times",
                                              "out_dir"};
  static const std::vector<std::string> required = {"m", "L", "epsilon", "dt", "T", "init"};

  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
    if (kv.count(key)) throw ConfigError("config: duplicate key '" + key + "'");
    kv[key] = value;
  }
  std::vector<std::string> missing;
  for (const auto& key : required) {
    if (!kv.count(key)) missing.push_back(key);
  }
  if (!missing.empty()) {
    std::string msg = "config: missing required key";
    msg += missing.size() > 1 ? "s: " : ": ";
    for (std::size_t n = 0; n < missing.size(); ++n) msg += (n ? ", " : "") + missing[n];
    throw ConfigError(msg);
  }

  auto number = [&](const std::string& key) {
    double v = 0.0;
    if (!parse_double(kv.at(key), v) || !std::isfinite(v)) {
      throw ConfigError("config: '" + key + "' is not a number: '" + kv.at(key) + "'");
    }
    return v;
  };
  auto integer = [&](const std::string& key) {
    long long v = 0;
    if (!parse_int(kv.at(key), v)) {
      throw ConfigError("config: '" + key + "' is not an integer: '" + kv.at(key) + "'");
    }
    return v;
  };

  RunConfig cfg;
  const long long m = integer("m");
  if (m < 4 || m % 2 != 0 || m > (1 << 14)) {
    throw ConfigError("config: 'm' must be an even integer >= 4");
  }
  cfg.m = static_cast<int>(m);
  cfg.L = number("L");
  cfg.scheme.epsilon = number("epsilon");
  cfg.scheme.dt = number("dt");
  if (kv.count("A")) cfg.scheme.A = number("A");
  cfg.T = number("T");
  if (kv.count("solver")) {
    try {
      cfg.solver.kind = parse_solver_kind(kv.at("solver"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  if (kv.count("rel_tol")) cfg.solver.rel_tol = number("rel_tol");
  if (kv.count("max_iter")) {
    const long long it = integer("max_iter");
    if (it < 1 || it > 1000000) throw ConfigError("config: 'max_iter' must be >= 1");
    cfg.solver.max_iter = static_cast<int>(it);
  }
  cfg.init = parse_init_kind(kv.at("init"));
  if (kv.count("seed")) {
    const long long s = integer("seed");
    if (s < 0) throw ConfigError("config: 'seed' must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (kv.count("snapshot_times")) {
    std::string list = kv.at("snapshot_times");
    std::replace(list.begin(), list.end(), ',', ' ');
    std::istringstream ls(list);
    std::string tok;
    while (ls >> tok) {
      double v = 0.0;
      if (!parse_double(tok, v) || !(v >= 0.0)) {
        throw ConfigError("config: bad snapshot time '" + tok + "'");
      }
      cfg.snapshot_times.push_back(v);
    }
    std::sort(cfg.snapshot_times.begin(), cfg.snapshot_times.end());
  }
  if (kv.count("out_dir")) cfg.out_dir = kv.at("out_dir");

  if (!(cfg.L > 0.0)) throw ConfigError("config: 'L' must be positive");
  if (!(cfg.T > 0.0)) throw ConfigError("config: 'T' must be positive");
  if (cfg.T < cfg.scheme.dt) throw ConfigError("config: 'T' must be at least 'dt'");
  try {
    cfg.scheme.validate();
    cfg.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

CellField make_initial_field(const GridSpec& grid, InitKind kind, std::uint64_t seed) {
  switch (kind) {
    case InitKind::Sinusoidal:
      return init_sinusoidal(grid);
    case InitKind::Random:
      return init_random(grid, seed);
    case InitKind::Zero:
      break;
  }
  return CellField(grid);
}

const char* version_string() { return "ssfilm 1.0.0"; }

std::string format_record_row(const StepRecord& rec) {
  return fmt17(rec.t) + ',' + fmt17(rec.energy) + ',' + fmt17(rec.modified_energy) + ',' +
         fmt17(rec.mass) + ',' + fmt17(rec.roughness) + ',' + std::to_string(rec.iterations) +
         ',' + fmt17(rec.wall_ms);
}

RecordCsvWriter::RecordCsvWriter(const std::string& path,
                                 const std::vector<std::string>& provenance)
    : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw FormatError("csv: cannot open '" + path + "' for writing");
  out_ << "# " << version_string() << '\n';
  for (const auto& line : provenance) out_ << "# " << line << '\n';
  out_ << "t,F_h,F_tilde,mass,roughness,iters,wall_ms\n";
}

void RecordCsvWriter::append(const StepRecord& rec) {
  out_ << format_record_row(rec) << '\n';
  if (!out_) throw FormatError("csv: write failed");
}

}  // namespace ssfilm
