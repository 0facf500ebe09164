#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "cvqec/mixture.hpp"

namespace cvqec {

/// Error actions a stochastic channel can apply to one mode.
struct XDisplacement {
  double shift;  // displacement of the x quadrature
};
struct GeneralDisplacement {
  double dx;
  double dp;
};
/// Replace the mode's marginal by a fixed single-mode state (erasure-style
/// errors). Only valid on modes uncorrelated with the rest.
struct Replacement {
  GaussianMixture state;
};

using ErrorBranch = std::variant<XDisplacement, GeneralDisplacement, Replacement>;

/// With probability gamma the branch error hits the mode; with
/// probability 1-gamma the state passes unchanged.
class StochasticChannel {
 public:
  StochasticChannel(double gamma, ErrorBranch branch);

  double gamma() const { return gamma_; }
  const ErrorBranch& branch() const { return branch_; }

 private:
  double gamma_;
  ErrorBranch branch_;
};

/// One of the 2^3 error patterns of three independent x-displacement
/// channels, with its probability and the post-decoding mean shifts it
/// produces (signal mode and the two ancillas).
struct BranchRecord {
  std::array<bool, 3> pattern;  // which channels displaced
  double weight;
  double mode1_x_shift;
  std::array<double, 2> ancilla_shifts;
  std::string label;  // matches the component labels from apply_independent
};

/// Apply one stochastic channel to `mode`. Displacement branches shift the
/// error components' means; the error components get "e<mode>" appended to
/// their label. Replacement branches require the mode to be uncorrelated
/// with the rest in every component and throw std::domain_error otherwise.
GaussianMixture apply_channel(const GaussianMixture& m,
                              const StochasticChannel& c, int mode);

/// One channel per mode, applied independently; component count doubles
/// per displacement channel with nonzero branch probability.
GaussianMixture apply_independent(const GaussianMixture& m,
                                  const std::vector<StochasticChannel>& channels);

/// The eight error patterns of the three-mode code under a common
/// x-displacement of size xbar2 per hit channel, ordered by error count:
/// none, 1, 2, 3, 12, 13, 23, all.
std::vector<BranchRecord> branch_table(double gamma, double xbar2);

}  // namespace cvqec
