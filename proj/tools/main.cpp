// Command-line front end for the closed-loop simulation library.
//
// Exit codes: 0 success, 1 usage/configuration error, 2 model falsified,
// 3 closed loop unstable.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "l1adapt/errors.hpp"
#include "l1adapt/experiment.hpp"
#include "l1adapt/polynomial.hpp"

namespace {

int exit_code(const l1adapt::RunSummary& s) {
  if (s.unstable) return 3;
  if (s.falsified) return 2;
  return 0;
}

void print_summary(const l1adapt::RunSummary& s) {
  std::cout << l1adapt::summary_to_json(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive l1-optimal control simulation laboratory"};
  app.require_subcommand(1);

  // run: execute one experiment described by a JSON config file.
  std::string config_path;
  std::uint64_t run_seed = 0;
  bool run_seed_set = false;
  std::string out_dir;
  std::string prefix = "run";
  auto* run_cmd = app.add_subcommand("run", "Run one experiment from a JSON config");
  run_cmd->add_option("--config", config_path, "Path to the JSON config")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run_seed, "Override the config seed")
      ->each([&](const std::string&) { run_seed_set = true; });
  run_cmd->add_option("--out", out_dir, "Directory for trace/zeta/summary files");
  run_cmd->add_option("--prefix", prefix, "File prefix inside --out");

  // replicate-s7: the built-in simulation study.
  std::string controller = "adaptive";
  std::string disturbance = "random";
  int n_seeds = 1;
  std::uint64_t first_seed = 1;
  long horizon = 2000;
  bool no_worst_case = false;
  std::string s7_out;
  auto* s7_cmd =
      app.add_subcommand("replicate-s7", "Run the built-in simulation study");
  s7_cmd->add_option("--controller", controller, "adaptive | rls | optimal")
      ->check(CLI::IsMember({"adaptive", "rls", "optimal"}));
  s7_cmd->add_option("--disturbance", disturbance, "random | trig")
      ->check(CLI::IsMember({"random", "trig"}));
  s7_cmd->add_option("--seeds", n_seeds, "Number of consecutive seeds")
      ->check(CLI::PositiveNumber);
  s7_cmd->add_option("--first-seed", first_seed, "First seed value");
  s7_cmd->add_option("--horizon", horizon, "Simulation length")
      ->check(CLI::PositiveNumber);
  s7_cmd->add_flag("--no-worst-case", no_worst_case,
                   "Disable the worst-case disturbance windows");
  s7_cmd->add_option("--out", s7_out, "Directory for per-seed output files");

  // norm: |G^xi| and J(theta) for given coefficients.
  std::string a_csv, b_csv;
  double dw = 1.0, dy = 0.0, du = 0.0;
  auto* norm_cmd =
      app.add_subcommand("norm", "Print |G^xi| and J(theta) for a plant");
  norm_cmd->add_option("--a", a_csv, "a_1,...,a_n (comma separated)")->required();
  norm_cmd->add_option("--b", b_csv, "b_1,...,b_m (comma separated)")->required();
  norm_cmd->add_option("--delta-w", dw, "Disturbance norm bound");
  norm_cmd->add_option("--delta-y", dy, "Output-perturbation gain");
  norm_cmd->add_option("--delta-u", du, "Input-perturbation gain");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      l1adapt::ExperimentConfig cfg = l1adapt::load_config_file(config_path);
      if (run_seed_set) cfg.seed = run_seed;
      l1adapt::RunResult result = l1adapt::run(cfg);
      if (!out_dir.empty()) l1adapt::emit(result, out_dir, prefix);
      print_summary(result.summary);
      return exit_code(result.summary);
    }

    if (s7_cmd->parsed()) {
      using l1adapt::ControllerKindId;
      using l1adapt::DisturbanceKind;
      ControllerKindId kind = ControllerKindId::adaptive_optimal;
      if (controller == "rls") kind = ControllerKindId::rls_baseline;
      if (controller == "optimal") kind = ControllerKindId::optimal_known;
      const DisturbanceKind base = disturbance == "trig"
                                       ? DisturbanceKind::deterministic_trig
                                       : DisturbanceKind::random_uniform;
      std::vector<l1adapt::RunSummary> summaries;
      int code = 0;
      for (int k = 0; k < n_seeds; ++k) {
        const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(k);
        l1adapt::RunResult result = l1adapt::replicate_s7(
            kind, base, seed, horizon, !no_worst_case);
        if (!s7_out.empty())
          l1adapt::emit(result, s7_out, "seed" + std::to_string(seed));
        summaries.push_back(result.summary);
        code = std::max(code, exit_code(result.summary));
      }
      if (summaries.size() == 1)
        print_summary(summaries.front());
      else
        std::cout << l1adapt::summaries_to_json(summaries);
      return code;
    }

    if (norm_cmd->parsed()) {
      auto parse_csv = [](const std::string& s) {
        std::vector<double> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
        return out;
      };
      const std::vector<double> a = parse_csv(a_csv);
      const std::vector<double> b = parse_csv(b_csv);
      std::vector<double> xi = a;
      xi.insert(xi.end(), b.begin(), b.end());
      const l1adapt::ImpulseNorm norm =
          l1adapt::xi_impulse_norm(xi, a.size(), b.size());
      l1adapt::PlantParams params;
      params.xi = xi;
      params.n = a.size();
      params.m = b.size();
      params.delta_w = dw;
      params.delta_y = dy;
      params.delta_u = du;
      const auto j = l1adapt::compute_J(params, norm);
      std::printf("|G| = %.10g (tail <= %.3g, %zu terms)\n", norm.l1_norm,
                  norm.tail_bound, norm.truncation_length);
      if (j)
        std::printf("J(theta) = %.10g\n", *j);
      else
        std::printf("J(theta) undefined: robust stability condition fails\n");
      return 0;
    }
  } catch (const l1adapt::NotMinimumPhase& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const l1adapt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
