// SPDX-License-Identifier: Apache-2.0
//
// Exercises the C interface only; no C++ library headers are included.

#include <catch2/catch_amalgamated.hpp>

#include <ssfilm/ssfilm.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using Catch::Approx;

namespace {

std::string scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "ssfilm_test_capi";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(ssf_version()) == "ssfilm 1.0.0");
  CHECK(std::string(ssf_status_name(SSF_OK)) != "");
  CHECK(std::string(ssf_status_name(SSF_ERR_STABILITY)) != std::string(ssf_status_name(SSF_ERR_SOLVER)));
}

TEST_CASE("defaults and name parsing") {
  ssf_scheme s;
  ssf_scheme_defaults(&s);
  CHECK(s.A == 0.0625);
  CHECK(s.allow_small_A == 0);
  ssf_solver_opts o;
  ssf_solver_defaults(&o);
  CHECK(o.kind == SSF_SOLVER_PSD);
  CHECK(o.rel_tol == 1e-9);
  CHECK(o.max_iter == 500);

  ssf_solver_kind k;
  CHECK(ssf_solver_parse("pncg1", &k) == SSF_OK);
  CHECK(k == SSF_SOLVER_PNCG1);
  CHECK(std::string(ssf_solver_name(k)) == "pncg1");
  CHECK(ssf_solver_parse("lbfgs", &k) == SSF_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ssf_last_error()).find("lbfgs") != std::string::npos);
  ssf_interp mode;
  CHECK(ssf_interp_parse("bilinear", &mode) == SSF_OK);
  CHECK(mode == SSF_INTERP_BILINEAR);
  CHECK(ssf_solver_parse(nullptr, &k) == SSF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("field lifecycle") {
  ssf_field* f = nullptr;
  CHECK(ssf_field_create(3, 1.0, &f) == SSF_ERR_INVALID_ARGUMENT);
  CHECK(f == nullptr);
  REQUIRE(ssf_field_create(8, 2.0, &f) == SSF_OK);
  CHECK(ssf_field_m(f) == 8);
  CHECK(ssf_field_length(f) == 2.0);
  double n = -1;
  CHECK(ssf_field_norm2(f, &n) == SSF_OK);
  CHECK(n == 0.0);
  ssf_field_destroy(f);
  ssf_field_destroy(nullptr);

  std::vector<double> v(16);
  for (int k = 0; k < 16; ++k) v[k] = ((k / 4 + k % 4) % 2) ? -0.5 : 0.5;  // checkerboard
  ssf_field* c = nullptr;
  REQUIRE(ssf_field_from_values(4, 1.0, v.data(), &c) == SSF_OK);
  double mean = 1, rough = 0;
  CHECK(ssf_field_mean(c, &mean) == SSF_OK);
  CHECK(mean == 0.0);
  CHECK(ssf_field_roughness(c, &rough) == SSF_OK);
  CHECK(rough == Approx(0.5 * 0.25));
  std::vector<double> back(16);
  CHECK(ssf_field_copy_values(c, back.data(), back.size()) == SSF_OK);
  CHECK(back == v);
  CHECK(ssf_field_copy_values(c, back.data(), 3) == SSF_ERR_INVALID_ARGUMENT);

  ssf_field* fine = nullptr;
  REQUIRE(ssf_field_prolong(c, SSF_INTERP_NEAREST, &fine) == SSF_OK);
  CHECK(ssf_field_m(fine) == 8);
  double d = 0;
  CHECK(ssf_field_distance(c, fine, &d) == SSF_ERR_INVALID_ARGUMENT);
  ssf_field_destroy(fine);
  ssf_field_destroy(c);
}

TEST_CASE("initial data and energy") {
  ssf_field* a = nullptr;
  ssf_field* b = nullptr;
  REQUIRE(ssf_field_init(32, 12.8, SSF_INIT_RANDOM, 4, &a) == SSF_OK);
  REQUIRE(ssf_field_init(32, 12.8, SSF_INIT_RANDOM, 4, &b) == SSF_OK);
  double d = 1;
  CHECK(ssf_field_distance(a, b, &d) == SSF_OK);
  CHECK(d == 0.0);
  double e = 0;
  CHECK(ssf_field_energy(a, 0.03, &e) == SSF_OK);
  CHECK(e < 0.0);
  CHECK(ssf_field_energy(a, -1.0, &e) == SSF_ERR_INVALID_ARGUMENT);
  ssf_field_destroy(a);
  ssf_field_destroy(b);
}

TEST_CASE("snapshot through the C interface") {
  ssf_field* a = nullptr;
  REQUIRE(ssf_field_init(16, 3.2, SSF_INIT_SINUSOIDAL, 0, &a) == SSF_OK);
  const std::string path = scratch("snap.txt");
  CHECK(ssf_snapshot_write(a, 0.75, path.c_str()) == SSF_OK);
  ssf_field* b = nullptr;
  double t = 0;
  REQUIRE(ssf_snapshot_read(path.c_str(), &b, &t) == SSF_OK);
  CHECK(t == 0.75);
  double d = 1;
  CHECK(ssf_field_distance(a, b, &d) == SSF_OK);
  CHECK(d == 0.0);
  ssf_field_destroy(b);
  ssf_field_destroy(a);

  std::ofstream(scratch("bad.txt")) << "not a snapshot\n";
  ssf_field* c = nullptr;
  CHECK(ssf_snapshot_read(scratch("bad.txt").c_str(), &c, &t) == SSF_ERR_IO);
  CHECK(c == nullptr);
}

TEST_CASE("stepping through the C interface") {
  ssf_field* phi0 = nullptr;
  REQUIRE(ssf_field_init(32, 3.2, SSF_INIT_SINUSOIDAL, 0, &phi0) == SSF_OK);
  ssf_scheme s;
  ssf_scheme_defaults(&s);
  ssf_solver_opts o;
  ssf_solver_defaults(&o);
  o.kind = SSF_SOLVER_PNCG2;

  ssf_stepper* st = nullptr;
  ssf_record rec{};
  REQUIRE(ssf_stepper_create(phi0, &s, &o, 0, &st, &rec) == SSF_OK);
  CHECK(rec.k == 1);
  CHECK(rec.t == s.dt);
  double prev = rec.modified_energy;
  for (int k = 2; k <= 10; ++k) {
    REQUIRE(ssf_stepper_advance(st, &rec) == SSF_OK);
    CHECK(rec.k == k);
    CHECK(rec.modified_energy <= prev);
    CHECK(std::abs(rec.mass) <= 1e-11);
    prev = rec.modified_energy;
  }
  size_t count = 0;
  CHECK(ssf_stepper_last_residuals(st, nullptr, 0, &count) == SSF_OK);
  CHECK(count == static_cast<size_t>(rec.iterations) + 1);
  std::vector<double> hist(count);
  CHECK(ssf_stepper_last_residuals(st, hist.data(), hist.size(), &count) == SSF_OK);
  CHECK(hist.back() <= 1e-9 + 1e-12);
  CHECK(ssf_stepper_violations(st) == 0);

  ssf_field* cur = nullptr;
  REQUIRE(ssf_stepper_field(st, &cur) == SSF_OK);
  double e = 0;
  CHECK(ssf_field_energy(cur, s.epsilon, &e) == SSF_OK);
  CHECK(e == Approx(rec.energy).epsilon(1e-14));
  ssf_field_destroy(cur);
  ssf_stepper_destroy(st);

  ssf_stepper* hist_st = nullptr;
  REQUIRE(ssf_stepper_create_with_history(phi0, phi0, &s, &o, 0, &hist_st, &rec) == SSF_OK);
  CHECK(rec.iterations == 0);
  ssf_stepper_destroy(hist_st);

  s.A = 0.01;
  CHECK(ssf_stepper_create(phi0, &s, &o, 0, &st, &rec) == SSF_ERR_INVALID_ARGUMENT);
  s.allow_small_A = 1;
  CHECK(ssf_stepper_create(phi0, &s, &o, 0, &st, &rec) == SSF_OK);
  ssf_stepper_destroy(st);
  ssf_field_destroy(phi0);
}

TEST_CASE("non-finite values are rejected") {
  std::vector<double> v(64, 0.0);
  v[5] = NAN;
  ssf_field* f = nullptr;
  CHECK(ssf_field_from_values(8, 1.0, v.data(), &f) == SSF_ERR_INVALID_ARGUMENT);
  CHECK(f == nullptr);
}

TEST_CASE("an unconverged solve is a solver failure") {
  ssf_field* f = nullptr;
  REQUIRE(ssf_field_init(16, 12.8, SSF_INIT_RANDOM, 2, &f) == SSF_OK);
  ssf_scheme s;
  ssf_scheme_defaults(&s);
  s.epsilon = 0.03;
  ssf_solver_opts o;
  ssf_solver_defaults(&o);
  o.max_iter = 1;
  ssf_stepper* st = nullptr;
  ssf_record rec{};
  CHECK(ssf_stepper_create(f, &s, &o, 0, &st, &rec) == SSF_ERR_SOLVER);
  CHECK(st == nullptr);
  CHECK(std::string(ssf_last_error()).find("converge") != std::string::npos);
  ssf_field_destroy(f);
}

TEST_CASE("utility functions") {
  long long n = 0;
  CHECK(ssf_step_count(0.32, 0.01 * 0.1, &n) == SSF_OK);
  CHECK(n == 320);
  CHECK(ssf_step_count(-1, 1, &n) == SSF_ERR_INVALID_ARGUMENT);

  const double t[] = {1, 10, 100};
  const double y[] = {1, std::cbrt(10.0), std::cbrt(100.0)};
  double a = 1, b = 0;
  CHECK(ssf_loglog_fit(t, y, 3, 1, 100, &a, &b) == SSF_OK);
  CHECK(b == Approx(1.0 / 3.0));
  CHECK(a == Approx(0.0).margin(1e-12));
  CHECK(ssf_loglog_fit(t, y, 3, 2, 100, &a, &b) == SSF_ERR_INVALID_ARGUMENT);

  const int levels[] = {16, 32, 64};
  ssf_cauchy_row rows[2];
  ssf_solver_opts o;
  ssf_solver_defaults(&o);
  CHECK(ssf_cauchy_table(levels, 3, 0.1, 0.0625, 0.01, 0.01, &o, SSF_INTERP_BILINEAR, rows) ==
        SSF_OK);
  CHECK(rows[0].m_coarse == 16);
  CHECK(std::isnan(rows[0].rate));
  CHECK(rows[1].error < rows[0].error);
  const int bad[] = {16, 48};
  CHECK(ssf_cauchy_table(bad, 2, 0.1, 0.0625, 0.01, 0.01, &o, SSF_INTERP_NEAREST, rows) ==
        SSF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("run configuration") {
  ssf_run_config* c = nullptr;
  CHECK(ssf_run_config_parse("m = 16\nL = 3.2\nbogus = 1\n", &c) == SSF_ERR_CONFIG);
  CHECK(std::string(ssf_last_error()).find("bogus") != std::string::npos);
  CHECK(ssf_run_config_load(scratch("absent.cfg").c_str(), &c) == SSF_ERR_CONFIG);
  REQUIRE(ssf_run_config_parse("m = 16\nL = 3.2\nepsilon = 0.05\ndt = 1e-3\nT = 0.02\n"
                               "init = random\nseed = 9\nsolver = pncg1\n"
                               "snapshot_times = 0.01\nout_dir = here\n",
                               &c) == SSF_OK);
  CHECK(ssf_run_config_m(c) == 16);
  CHECK(ssf_run_config_length(c) == 3.2);
  CHECK(ssf_run_config_final_time(c) == 0.02);
  CHECK(ssf_run_config_seed(c) == 9);
  ssf_scheme s;
  ssf_run_config_scheme(c, &s);
  CHECK(s.epsilon == 0.05);
  ssf_solver_opts o;
  ssf_run_config_solver(c, &o);
  CHECK(o.kind == SSF_SOLVER_PNCG1);
  CHECK(std::string(ssf_run_config_out_dir(c)) == "here");
  CHECK(ssf_run_config_snapshot_count(c) == 1);
  CHECK(ssf_run_config_snapshot_time(c, 0) == 0.01);
  CHECK(ssf_run_config_echo_count(c) > 5);
  CHECK(std::string(ssf_run_config_echo_line(c, 0)) == "m = 16");
  ssf_field* f = nullptr;
  REQUIRE(ssf_run_config_initial_field(c, &f) == SSF_OK);
  ssf_field* g = nullptr;
  REQUIRE(ssf_field_init(16, 3.2, SSF_INIT_RANDOM, 9, &g) == SSF_OK);
  double d = 1;
  CHECK(ssf_field_distance(f, g, &d) == SSF_OK);
  CHECK(d == 0.0);
  ssf_field_destroy(f);
  ssf_field_destroy(g);
  ssf_run_config_destroy(c);
}

TEST_CASE("record log") {
  const std::string path = scratch("log.csv");
  const char* prov[] = {"seed = 1"};
  ssf_record_log* log = nullptr;
  REQUIRE(ssf_record_log_open(path.c_str(), prov, 1, &log) == SSF_OK);
  ssf_record r{};
  r.t = 1;
  r.iterations = 3;
  CHECK(ssf_record_log_append(log, &r) == SSF_OK);
  CHECK(ssf_record_log_close(log) == SSF_OK);
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "# ssfilm 1.0.0");
  CHECK(lines[1] == "# seed = 1");
  CHECK(lines[2] == "t,F_h,F_tilde,mass,roughness,iters,wall_ms");
  CHECK(lines[3] == "1,0,0,0,0,3,0");
  CHECK(ssf_record_log_open((scratch("x") + "/no/dir/log.csv").c_str(), nullptr, 0, &log) ==
        SSF_ERR_IO);
}
