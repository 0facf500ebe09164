#include "cvqec/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqec {

namespace {

std::string error_label(const std::string& base, int mode) {
  return base + "e" + std::to_string(mode);
}

// Off-diagonal coupling between `mode` and every other mode must vanish
// for a marginal replacement to be a valid component-wise update.
bool mode_uncorrelated(const GaussianState& s, int mode, double tol) {
  const Eigen::MatrixXd& c = s.cov();
  for (int row : {2 * mode, 2 * mode + 1}) {
    for (int k = 0; k < 2 * s.modes(); ++k) {
      if (k == 2 * mode || k == 2 * mode + 1) continue;
      if (std::abs(c(row, k)) > tol) return false;
    }
  }
  return true;
}

// Rebuild a component with `mode`'s marginal replaced by `repl`,
// preserving the mode ordering.
GaussianState replace_mode(const GaussianState& s, int mode,
                           const GaussianState& repl) {
  GaussianState rest = trace_out(s, mode);
  int n = s.modes();
  Eigen::VectorXd mean(2 * n);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  // Global index for each original coordinate: rest coordinates keep their
  // order around the reinserted mode.
  auto global = [mode](int rest_idx) {
    return rest_idx < 2 * mode ? rest_idx : rest_idx + 2;
  };
  for (int i = 0; i < 2 * (n - 1); ++i) {
    mean(global(i)) = rest.mean()(i);
    for (int j = 0; j < 2 * (n - 1); ++j)
      cov(global(i), global(j)) = rest.cov()(i, j);
  }
  mean.segment(2 * mode, 2) = repl.mean();
  cov.block(2 * mode, 2 * mode, 2, 2) = repl.cov();
  return GaussianState::trusted(std::move(mean), std::move(cov));
}

}  // namespace

StochasticChannel::StochasticChannel(double gamma, ErrorBranch branch)
    : gamma_(gamma), branch_(std::move(branch)) {
  if (!(gamma_ >= 0.0 && gamma_ <= 1.0))
    throw std::invalid_argument("channel probability must be in [0, 1]");
  if (const auto* r = std::get_if<Replacement>(&branch_)) {
    if (r->state.modes() != 1)
      throw std::invalid_argument("replacement state must have exactly 1 mode");
  }
}

GaussianMixture apply_channel(const GaussianMixture& m,
                              const StochasticChannel& c, int mode) {
  if (mode < 0 || mode >= m.modes())
    throw std::out_of_range("apply_channel: mode index out of range");

  double gamma = c.gamma();
  if (gamma == 0.0) return m;

  std::vector<WeightedComponent> errored;
  if (const auto* xd = std::get_if<XDisplacement>(&c.branch())) {
    for (const auto& comp : m.components())
      errored.push_back({comp.weight,
                         displace(comp.state, mode, xd->shift, 0.0),
                         error_label(comp.label, mode)});
  } else if (const auto* gd = std::get_if<GeneralDisplacement>(&c.branch())) {
    for (const auto& comp : m.components())
      errored.push_back({comp.weight,
                         displace(comp.state, mode, gd->dx, gd->dp),
                         error_label(comp.label, mode)});
  } else {
    const auto& repl = std::get<Replacement>(c.branch());
    for (const auto& comp : m.components()) {
      if (!mode_uncorrelated(comp.state, mode, 1e-12))
        throw std::domain_error(
            "apply_channel: replacement on a mode correlated with the rest");
      for (const auto& rc : repl.state.components())
        errored.push_back({comp.weight * rc.weight,
                           replace_mode(comp.state, mode, rc.state),
                           error_label(comp.label, mode)});
    }
  }
  GaussianMixture error_mixture(std::move(errored));
  if (gamma == 1.0) return error_mixture;
  return mix({{1.0 - gamma, m}, {gamma, error_mixture}});
}

GaussianMixture apply_independent(
    const GaussianMixture& m, const std::vector<StochasticChannel>& channels) {
  if (static_cast<int>(channels.size()) != m.modes())
    throw std::invalid_argument(
        "apply_independent: need exactly one channel per mode");
  GaussianMixture out = m;
  for (int mode = 0; mode < m.modes(); ++mode)
    out = apply_channel(out, channels[mode], mode);
  return out;
}

std::vector<BranchRecord> branch_table(double gamma, double xbar2) {
  const double s3 = xbar2 / std::sqrt(3.0);
  const double s23 = std::sqrt(2.0 / 3.0) * xbar2;
  const double s6 = xbar2 / std::sqrt(6.0);
  const double s2 = xbar2 / std::sqrt(2.0);

  const std::array<std::array<bool, 3>, 8> patterns = {{
      {false, false, false},
      {true, false, false},
      {false, true, false},
      {false, false, true},
      {true, true, false},
      {true, false, true},
      {false, true, true},
      {true, true, true},
  }};
  const std::array<double, 8> mode1 = {0.0,      s3,       s3, s3,
                                       2.0 * s3, 2.0 * s3, 2.0 * s3,
                                       std::sqrt(3.0) * xbar2};
  const std::array<std::array<double, 2>, 8> anc = {{
      {0.0, 0.0},
      {s23, 0.0},
      {-s6, s2},
      {-s6, -s2},
      {s6, s2},
      {s6, -s2},
      {-s23, 0.0},
      {0.0, 0.0},
  }};

  std::vector<BranchRecord> table;
  table.reserve(8);
  for (int b = 0; b < 8; ++b) {
    double w = 1.0;
    std::string label;
    // Newest factor on the left, matching the sequential products formed
    // by apply_independent, so the weights agree bit for bit.
    for (int mode = 0; mode < 3; ++mode) {
      if (patterns[b][mode]) {
        w = gamma * w;
        label = error_label(label, mode);
      } else {
        w = (1.0 - gamma) * w;
      }
    }
    table.push_back({patterns[b], w, mode1[b], anc[b], label});
  }
  return table;
}

}  // namespace cvqec
