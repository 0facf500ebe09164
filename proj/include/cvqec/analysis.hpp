#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "cvqec/repetition_code.hpp"

namespace cvqec {

/// Monte Carlo estimate with its standard error (sample standard
/// deviation over sqrt(n)). Deterministic for a fixed seed.
struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  long long n_runs = 0;
  std::uint64_t seed = 0;
};

/// Fidelity of direct (unencoded) transmission: (1-gamma) + gamma*e^{-xbar2^2}.
double fidelity_direct(double gamma, double xbar2);

/// Infinite-squeezing encoded fidelity: (1-gamma^3) + gamma^3*e^{-3*xbar2^2}.
double fidelity_encoded_ideal(double gamma, double xbar2);

/// Encoded fidelity at finite squeezing assuming perfect classification:
/// each corrected branch contributes (1 + 2*g^2*e^{-2r}/4)^{-1/2} with g the
/// feedforward noise gain of its class, the triple-error branch e^{-3*xbar2^2}.
double fidelity_encoded_semianalytic(double gamma, double r, double xbar2);

/// Classification probability matrix: rows are the eight true error
/// patterns (branch_table order), columns the seven assigned classes
/// (SyndromeClass order). Sign-table cells are products of per-axis
/// Gaussian interval masses; the two sign pairs resolved by likelihood are
/// integrated on an equal-probability-mass grid, as is the whole plane for
/// the MapLikelihood policy. Rows sum to 1 to 1e-9.
Eigen::MatrixXd misclassification_probs(const CodeParams& p,
                                        ClassifyPolicy policy);

/// Row labels of misclassification_probs.
const std::array<std::string, 8>& branch_labels();

/// Mean conditional fidelity over n_runs independent protocol rounds with
/// per-run streams derived from (seed, 0, run).
McEstimate estimate_fidelity_mc(const CodeParams& p, ClassifyPolicy policy,
                                long long n_runs, std::uint64_t seed,
                                const GaussianState& signal = coherent(0, 0));

/// Monte Carlo fidelity of the unencoded channel (one stochastic
/// x-displacement on the bare signal).
McEstimate direct_transmission_mc(double gamma, double xbar2, long long n_runs,
                                  std::uint64_t seed,
                                  const GaussianState& signal = coherent(0, 0));

/// Per-true-branch statistics from runs where the error pattern is sampled
/// explicitly, so each round traverses a single branch: classification
/// frequencies, residual signal displacement moments conditioned on correct
/// classification, and the p-quadrature invariance margins.
struct BranchStats {
  long long n = 0;
  std::array<long long, kClassCount> class_counts{};
  long long n_correct = 0;
  double residual_mean = 0.0;  // mean output x displacement | correct
  double residual_var = 0.0;   // sample variance of the above
  double mean_fid = 0.0;       // mean conditional fidelity, all runs
  double max_p_mean_dev = 0.0;
  double max_p_var_dev = 0.0;
};

std::array<BranchStats, 8> branch_statistics_mc(
    const CodeParams& p, ClassifyPolicy policy, long long n_runs,
    std::uint64_t seed, const GaussianState& signal = coherent(0, 0));

/// A one-parameter grid scan at otherwise fixed parameters.
struct SweepSpec {
  enum class Parameter { Gamma, R, Xbar2 };

  Parameter parameter = Parameter::Gamma;
  std::vector<double> grid;
  CodeParams base{};
  ClassifyPolicy policy = ClassifyPolicy::ThresholdSign;
  long long runs_per_point = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SweepRow {
  std::string param_name;
  double param_value;
  double gamma;
  double r;
  double xbar2;
  double f_direct;
  double f_ideal;
  double f_semianalytic;
  double f_mc_mean;
  double f_mc_stderr;
  long long n_runs;
  std::uint64_t seed;
};

/// One row per grid point; Monte Carlo streams derive from
/// (seed, point index, run index), so results do not depend on execution
/// order. Throws std::runtime_error if any output fails to be finite.
std::vector<SweepRow> sweep(const SweepSpec& spec);

/// CSV serialization: comma delimiter, '.' decimal separator, 17
/// significant digits, header row, '\n' line ends. Byte-stable for a fixed
/// spec and seed.
std::string to_csv(const std::vector<SweepRow>& rows);

/// Write CSV to a stream/file; I/O failures raise std::runtime_error.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_csv_file(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace cvqec
