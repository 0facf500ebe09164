#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvqec/analysis.hpp"

namespace {

using namespace cvqec;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ClassifyPolicy parse_policy(const std::string& s) {
  return s == "map" ? ClassifyPolicy::MapLikelihood
                    : ClassifyPolicy::ThresholdSign;
}

int cmd_run(const CodeParams& params, const std::string& policy,
            long long runs, std::uint64_t seed, double sx, double sp) {
  McEstimate est = estimate_fidelity_mc(params, parse_policy(policy), runs,
                                        seed, coherent(sx, sp));
  std::cout << "f_mc_mean=" << fmt(est.mean) << " f_mc_stderr="
            << fmt(est.std_err) << " n_runs=" << est.n_runs << " seed="
            << est.seed << "\n";
  std::cout << "f_direct=" << fmt(fidelity_direct(params.gamma, params.xbar2))
            << " f_ideal="
            << fmt(fidelity_encoded_ideal(params.gamma, params.xbar2))
            << " f_semianalytic="
            << fmt(fidelity_encoded_semianalytic(params.gamma, params.r,
                                                 params.xbar2))
            << "\n";
  return 0;
}

int cmd_sweep(const CodeParams& base, const std::string& param,
              const std::vector<double>& values, const std::string& policy,
              long long runs, std::uint64_t seed, const std::string& out) {
  SweepSpec spec;
  spec.parameter = param == "gamma" ? SweepSpec::Parameter::Gamma
                   : param == "r"   ? SweepSpec::Parameter::R
                                    : SweepSpec::Parameter::Xbar2;
  spec.grid = values;
  spec.base = base;
  spec.policy = parse_policy(policy);
  spec.runs_per_point = runs;
  spec.seed = seed;
  std::vector<SweepRow> rows = sweep(spec);
  if (out.empty())
    write_csv(std::cout, rows);
  else
    write_csv_file(out, rows);
  return 0;
}

int cmd_branches(double gamma, double xbar2) {
  std::cout << "branch,weight,mode1_x_shift,anc2_shift,anc3_shift\n";
  auto table = branch_table(gamma, xbar2);
  for (std::size_t b = 0; b < table.size(); ++b) {
    std::cout << branch_labels()[b] << "," << fmt(table[b].weight) << ","
              << fmt(table[b].mode1_x_shift) << ","
              << fmt(table[b].ancilla_shifts[0]) << ","
              << fmt(table[b].ancilla_shifts[1]) << "\n";
  }
  return 0;
}

int cmd_syndrome_table(double xbar2) {
  std::cout << "s2,s3,class\n"
            << "0,0,none\n"
            << "+,0,e1\n"
            << "-,+,e2\n"
            << "-,-,e3\n"
            << "+,+,e12\n"
            << "+,-,e13\n"
            << "-,0,e23\n"
            << "0,0,all (merged into none)\n";
  if (xbar2 > 0.0) {
    std::cout << "# zero band of axis 2: |x2| <= "
              << fmt(xbar2 / (2.0 * std::sqrt(6.0))) << "\n"
              << "# zero band of axis 3: |x3| <= "
              << fmt(xbar2 / (2.0 * std::sqrt(2.0))) << "\n";
  }
  return 0;
}

int cmd_misclass(const CodeParams& params, const std::string& policy) {
  Eigen::MatrixXd m = misclassification_probs(params, parse_policy(policy));
  std::cout << "true_branch,none,e1,e2,e3,e12,e13,e23\n";
  for (int b = 0; b < 8; ++b) {
    std::cout << branch_labels()[b];
    for (int c = 0; c < kClassCount; ++c) std::cout << "," << fmt(m(b, c));
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-mode repetition-code simulator for stochastic "
               "x-displacement channels"};
  app.require_subcommand(1);

  double gamma = 0.1, r = 1.0, xbar2 = 1.0;
  double signal_x = 0.0, signal_p = 0.0;
  long long runs = 0;
  std::uint64_t seed = 0;
  std::string policy = "threshold", out, param = "gamma";
  std::vector<double> values;

  auto add_params = [&](CLI::App* cmd, bool with_r) {
    cmd->add_option("--gamma", gamma, "error probability per channel")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--xbar2", xbar2, "channel displacement size (> 0)")
        ->required()
        ->check(CLI::PositiveNumber);
    if (with_r)
      cmd->add_option("--r", r, "ancilla squeezing parameter")->required();
  };

  CLI::App* run_cmd = app.add_subcommand("run", "one Monte Carlo estimate");
  add_params(run_cmd, true);
  run_cmd->add_option("--runs", runs, "number of protocol rounds")
      ->required()
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "random seed")->required();
  run_cmd->add_option("--policy", policy, "threshold or map")
      ->check(CLI::IsMember({"threshold", "map"}));
  run_cmd->add_option("--signal-x", signal_x, "input x displacement");
  run_cmd->add_option("--signal-p", signal_p, "input p displacement");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid scan to CSV");
  add_params(sweep_cmd, true);
  sweep_cmd->add_option("--param", param, "which parameter varies")
      ->required()
      ->check(CLI::IsMember({"gamma", "r", "xbar2"}));
  sweep_cmd->add_option("--values", values, "grid values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--runs", runs, "rounds per grid point")
      ->required()
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", seed, "random seed")->required();
  sweep_cmd->add_option("--policy", policy, "threshold or map")
      ->check(CLI::IsMember({"threshold", "map"}));
  sweep_cmd->add_option("--out", out, "output CSV path (default: stdout)");

  CLI::App* branches_cmd =
      app.add_subcommand("branches", "error-pattern weights and shifts");
  add_params(branches_cmd, false);

  double table_xbar2 = 0.0;
  CLI::App* table_cmd =
      app.add_subcommand("syndrome-table", "sign table of the decoder");
  table_cmd->add_option("--xbar2", table_xbar2,
                        "also print the zero-band thresholds");

  CLI::App* misclass_cmd =
      app.add_subcommand("misclass", "classification probability matrix");
  add_params(misclass_cmd, true);
  misclass_cmd->add_option("--policy", policy, "threshold or map")
      ->check(CLI::IsMember({"threshold", "map"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    CodeParams params{r, xbar2, gamma};
    if (run_cmd->parsed())
      return cmd_run(params, policy, runs, seed, signal_x, signal_p);
    if (sweep_cmd->parsed())
      return cmd_sweep(params, param, values, policy, runs, seed, out);
    if (branches_cmd->parsed()) return cmd_branches(gamma, xbar2);
    if (table_cmd->parsed()) return cmd_syndrome_table(table_xbar2);
    if (misclass_cmd->parsed()) return cmd_misclass(params, policy);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
