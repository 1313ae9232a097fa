// SPDX-License-Identifier: Apache-2.0
//
// ccnr: entanglement checks for bipartite density matrices.
//
//   ccnr check STATE.json [--dims A,B] [--tol-psd X] [--tol-herm X] [--json]
//   ccnr sweep FAMILY --range start:stop:step [--d D] [--out PATH]
//   ccnr schmidt PURE.json
//   ccnr oschmidt STATE.json
//   ccnr gen FAMILY [--d D] [--param X] [--lambda a,b,c,d] [--dims A,B] ...

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ccnr/cli.hpp"

namespace {

using ccnr::cli::Dims;

std::optional<Dims> to_dims(const std::vector<std::size_t>& v) {
  if (v.empty()) return std::nullopt;
  return Dims{v[0], v[1]};
}

void add_dims(CLI::App* cmd, std::vector<std::size_t>& dims) {
  cmd->add_option("--dims", dims, "Subsystem dimensions A,B")
      ->delimiter(',')
      ->expected(2)
      ->check(CLI::PositiveNumber);
}

void add_tolerances(CLI::App* cmd, ccnr::StateTolerances& tol) {
  cmd->add_option("--tol-psd", tol.psd, "Allowed negative eigenvalue magnitude")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--tol-herm", tol.hermiticity, "Relative Hermiticity tolerance")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Realignment (CCNR) separability checks for bipartite states"};
  app.require_subcommand(1);

  ccnr::cli::CheckOptions check;
  std::vector<std::size_t> check_dims;
  auto* check_cmd = app.add_subcommand("check", "Run all criteria on a state file");
  check_cmd->add_option("path", check.path, "State file (JSON)")->required();
  add_dims(check_cmd, check_dims);
  add_tolerances(check_cmd, check.tol);
  check_cmd->add_flag("--json", check.json_output, "Emit one JSON object");

  ccnr::cli::SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate a family over a parameter grid as CSV");
  sweep_cmd->add_option("family", sweep.family, "werner|isotropic|bell|qubit|qutrit")->required();
  sweep_cmd->add_option("--d", sweep.d, "Local dimension (werner, isotropic)")->capture_default_str();
  sweep_cmd->add_option("--range", sweep.range, "start:stop:step")->required();
  sweep_cmd->add_option("--out", sweep.out_path, "CSV output path (default stdout)");

  ccnr::cli::FileOptions schmidt;
  std::vector<std::size_t> schmidt_dims;
  auto* schmidt_cmd = app.add_subcommand("schmidt", "Schmidt coefficients of a pure state");
  schmidt_cmd->add_option("path", schmidt.path, "Pure-state file (JSON)")->required();
  add_dims(schmidt_cmd, schmidt_dims);

  ccnr::cli::FileOptions oschmidt;
  std::vector<std::size_t> oschmidt_dims;
  auto* oschmidt_cmd = app.add_subcommand("oschmidt", "Operator Schmidt coefficients of a state");
  oschmidt_cmd->add_option("path", oschmidt.path, "State file (JSON)")->required();
  add_dims(oschmidt_cmd, oschmidt_dims);
  add_tolerances(oschmidt_cmd, oschmidt.tol);

  ccnr::cli::GenOptions gen;
  std::vector<std::size_t> gen_dims;
  double gen_param = 0.0;
  auto* gen_cmd = app.add_subcommand("gen", "Write a state file for a named family");
  gen_cmd->add_option("family", gen.family,
                      "werner|isotropic|bell|qubit|qutrit|maxent|schmidt|random|random-pure")
      ->required();
  gen_cmd->add_option("--d", gen.d, "Local dimension")->capture_default_str();
  auto* param_opt = gen_cmd->add_option("--param", gen_param, "Family parameter (f, F, p or alpha)");
  gen_cmd->add_option("--lambda,--coeffs", gen.values, "Bell spectrum or Schmidt coefficients")
      ->delimiter(',');
  add_dims(gen_cmd, gen_dims);
  gen_cmd->add_option("--rank", gen.rank, "Rank for random density matrices (0 = full)");
  gen_cmd->add_option("--seed", gen.seed, "Seed for random families")->capture_default_str();
  gen_cmd->add_option("--out", gen.out_path, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ccnr::cli::kExitInput;
  }

  if (*check_cmd) {
    check.dims = to_dims(check_dims);
    return ccnr::cli::cmd_check(check, std::cout, std::cerr);
  }
  if (*sweep_cmd) return ccnr::cli::cmd_sweep(sweep, std::cout, std::cerr);
  if (*schmidt_cmd) {
    schmidt.dims = to_dims(schmidt_dims);
    return ccnr::cli::cmd_schmidt(schmidt, std::cout, std::cerr);
  }
  if (*oschmidt_cmd) {
    oschmidt.dims = to_dims(oschmidt_dims);
    return ccnr::cli::cmd_oschmidt(oschmidt, std::cout, std::cerr);
  }
  if (*gen_cmd) {
    gen.dims = to_dims(gen_dims);
    if (*param_opt) gen.param = gen_param;
    return ccnr::cli::cmd_gen(gen, std::cout, std::cerr);
  }
  return ccnr::cli::kExitInput;
}
