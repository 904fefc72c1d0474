// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "dbrinterp/problem.hpp"

namespace {

using dbrinterp::InputError;
using dbrinterp::Json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot write file");
  out << text;
}

std::pair<int, int> parse_grid(const std::string& s) {
  const auto x = s.find_first_of("xX");
  int nr = 0, nt = 0;
  std::size_t a = 0, b = 0;
  try {
    if (x == std::string::npos) throw InputError("");
    nr = std::stoi(s.substr(0, x), &a);
    nt = std::stoi(s.substr(x + 1), &b);
  } catch (const std::exception&) {
    throw InputError("--grid: expected NRxNTHETA, got \"" + s + "\"");
  }
  if (a != x || b != s.size() - x - 1 || nr < 1 || nt < 1) {
    throw InputError("--grid: expected NRxNTHETA, got \"" + s + "\"");
  }
  return {nr, nt};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norm-constrained interpolation in de Branges-Rovnyak and Hardy spaces", "dbrinterp"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<double> tol_rank, tol_psd, tol_residual, tol_verify;
  app.add_option("--config", config_path, "tolerance config file (default: $DBRINTERP_CONFIG)");
  app.add_option("--tol-rank", tol_rank, "relative rank cutoff");
  app.add_option("--tol-psd", tol_psd, "PSD eigenvalue tolerance");
  app.add_option("--tol-residual", tol_residual, "relative residual tolerance");
  app.add_option("--tol-verify", tol_verify, "threshold for verification residuals");

  std::string spec_path, out_path, param_path, result_path, grid = "8x16";
  double r_max = 0.95;
  bool central = false;

  CLI::App* check = app.add_subcommand("check", "report admissibility and solvability of a spec");
  check->add_option("spec", spec_path, "spec JSON file")->required();
  check->add_option("--out", out_path, "report file (default: stdout)");

  CLI::App* solve = app.add_subcommand("solve", "solve a spec and write the result JSON");
  solve->add_option("spec", spec_path, "spec or result JSON file")->required();
  auto* param_opt = solve->add_option("--param", param_path, "free parameter h as {\"schema\": 1, \"h\": function}");
  auto* central_opt = solve->add_flag("--central", central, "minimal-norm solution (default)");
  param_opt->excludes(central_opt);
  solve->add_option("--out", out_path, "result file (default: stdout)");

  CLI::App* eval = app.add_subcommand("eval", "sample a result's f on a polar grid as CSV");
  eval->add_option("result", result_path, "result JSON file")->required();
  eval->add_option("--grid", grid, "radii x angles, e.g. 8x16");
  eval->add_option("--rmax", r_max, "largest sampled radius");
  eval->add_option("--out", out_path, "CSV file (default: stdout)");

  CLI::App* version = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : dbrinterp::kExitInput;
  }

  if (version->parsed()) {
    std::printf("dbrinterp %s\n", DBRINTERP_VERSION);
    return 0;
  }

  try {
    dbrinterp::RunConfig cfg;
    if (config_path.empty()) {
      if (const char* env = std::getenv("DBRINTERP_CONFIG"); env && *env) config_path = env;
    }
    if (!config_path.empty()) cfg = dbrinterp::parse_config(read_file(config_path), cfg);
    if (tol_rank) cfg.tol.rank_tol = *tol_rank;
    if (tol_psd) cfg.tol.psd_tol = *tol_psd;
    if (tol_residual) cfg.tol.residual_tol = *tol_residual;
    if (tol_verify) cfg.verify_tol = *tol_verify;
    cfg = dbrinterp::parse_config("", cfg);  // validates the merged values

    if (check->parsed()) {
      const Json spec = dbrinterp::parse_json_text(read_file(spec_path), spec_path);
      const dbrinterp::CommandResult r = dbrinterp::check_problem(spec, cfg);
      write_output(out_path, dbrinterp::dump_json(r.report));
      return r.exit_code;
    }
    if (solve->parsed()) {
      const Json spec = dbrinterp::parse_json_text(read_file(spec_path), spec_path);
      std::optional<Json> param;
      if (!param_path.empty()) param = dbrinterp::parse_json_text(read_file(param_path), param_path);
      const dbrinterp::CommandResult r = dbrinterp::solve_problem(spec, param, cfg);
      write_output(out_path, dbrinterp::dump_json(r.report));
      if (r.exit_code != 0) std::fprintf(stderr, "dbrinterp: verification failed\n");
      return r.exit_code;
    }
    const auto [nr, nt] = parse_grid(grid);
    const Json result = dbrinterp::parse_json_text(read_file(result_path), result_path);
    write_output(out_path, dbrinterp::eval_result_csv(result, nr, nt, r_max));
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dbrinterp: %s\n", e.what());
    return dbrinterp::exit_code_for(e);
  }
}
