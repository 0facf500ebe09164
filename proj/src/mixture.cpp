#include "cvqec/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cvqec {

namespace {
constexpr double kWeightTol = 1e-10;
}

GaussianMixture::GaussianMixture(std::vector<WeightedComponent> components)
    : components_(std::move(components)) {
  if (components_.empty())
    throw std::invalid_argument("mixture must have at least one component");
  int n = components_.front().state.modes();
  double sum = 0.0;
  for (const auto& c : components_) {
    if (c.state.modes() != n)
      throw std::invalid_argument("mixture components have unequal mode counts");
    if (c.weight < -kWeightTol || c.weight > 1.0 + kWeightTol)
      throw std::invalid_argument("component weight outside [0, 1]");
    sum += c.weight;
  }
  if (std::abs(sum - 1.0) > kWeightTol)
    throw std::invalid_argument("mixture weights do not sum to 1");
}

double GaussianMixture::total_weight() const {
  double sum = 0.0;
  for (const auto& c : components_) sum += c.weight;
  return sum;
}

GaussianMixture pure(GaussianState s) {
  return GaussianMixture({WeightedComponent{1.0, std::move(s), ""}});
}

GaussianMixture mix(
    const std::vector<std::pair<double, GaussianMixture>>& branches) {
  if (branches.empty()) throw std::invalid_argument("mix: no branches");
  double psum = 0.0;
  int n = branches.front().second.modes();
  for (const auto& [p, m] : branches) {
    if (m.modes() != n)
      throw std::invalid_argument("mix: mode count mismatch between branches");
    psum += p;
  }
  if (std::abs(psum - 1.0) > kWeightTol)
    throw std::invalid_argument("mix: branch probabilities do not sum to 1");
  std::vector<WeightedComponent> out;
  for (const auto& [p, m] : branches) {
    if (p == 0.0) continue;
    for (const auto& c : m.components())
      out.push_back({p * c.weight, c.state, c.label});
  }
  return GaussianMixture(std::move(out));
}

GaussianMixture map_components(
    const GaussianMixture& m,
    const std::function<GaussianState(const GaussianState&)>& f) {
  std::vector<WeightedComponent> out;
  out.reserve(m.size());
  for (const auto& c : m.components())
    out.push_back({c.weight, f(c.state), c.label});
  return GaussianMixture(std::move(out));
}

GaussianMixture map_components(const GaussianMixture& m,
                               const SymplecticTransform& t) {
  return map_components(
      m, [&t](const GaussianState& s) { return apply_symplectic(s, t); });
}

GaussianMixture displace(const GaussianMixture& m, int mode, double dx,
                         double dp) {
  return map_components(m, [=](const GaussianState& s) {
    return displace(s, mode, dx, dp);
  });
}

double homodyne_density(const GaussianMixture& m, int mode, double x) {
  if (mode < 0 || mode >= m.modes())
    throw std::out_of_range("homodyne_density: mode index out of range");
  double d = 0.0;
  for (const auto& c : m.components())
    d += c.weight * x_marginal(c.state, mode).pdf(x);
  return d;
}

GaussianMixture condition(const GaussianMixture& m, int mode, double x) {
  if (mode < 0 || mode >= m.modes())
    throw std::out_of_range("condition: mode index out of range");
  std::vector<WeightedComponent> out;
  out.reserve(m.size());
  double total = 0.0;
  for (const auto& c : m.components()) {
    ConditionResult r = condition_on_x(c.state, mode, x);
    double w = c.weight * r.density;
    total += w;
    out.push_back({w, std::move(r.rest), c.label});
  }
  if (total <= 0.0)
    throw std::domain_error("condition: outcome has zero density");
  for (auto& c : out) c.weight /= total;
  return GaussianMixture(std::move(out));
}

HomodyneSample sample_homodyne(const GaussianMixture& m, int mode,
                               RandomStream& rng) {
  if (mode < 0 || mode >= m.modes())
    throw std::out_of_range("sample_homodyne: mode index out of range");
  std::vector<double> weights;
  weights.reserve(m.size());
  for (const auto& c : m.components()) weights.push_back(c.weight);
  const GaussianState& picked = m.components()[rng.pick(weights)].state;
  ScalarGaussian marg = x_marginal(picked, mode);
  double x = rng.normal(marg.mean, std::sqrt(marg.var));
  return HomodyneSample{x, condition(m, mode, x)};
}

double fidelity_to_pure(const GaussianMixture& m, const GaussianState& target) {
  if (m.modes() != target.modes())
    throw std::invalid_argument("fidelity_to_pure: mode count mismatch");
  if (!target.is_pure())
    throw std::invalid_argument("fidelity_to_pure: target state is not pure");
  double f = 0.0;
  for (const auto& c : m.components())
    f += c.weight * overlap_pure(c.state, target);
  return f;
}

GaussianMixture prune(const GaussianMixture& m, double epsilon) {
  if (epsilon >= 1.0) throw std::invalid_argument("prune: threshold must be < 1");
  std::vector<WeightedComponent> out;
  double total = 0.0;
  for (const auto& c : m.components()) {
    if (c.weight < epsilon) continue;
    total += c.weight;
    out.push_back(c);
  }
  if (out.empty()) {
    auto heaviest = std::max_element(
        m.components().begin(), m.components().end(),
        [](const auto& a, const auto& b) { return a.weight < b.weight; });
    out.push_back(*heaviest);
    total = heaviest->weight;
  }
  for (auto& c : out) c.weight /= total;
  return GaussianMixture(std::move(out));
}

GaussianMixture trace_out(const GaussianMixture& m, int mode) {
  return map_components(
      m, [=](const GaussianState& s) { return trace_out(s, mode); });
}

Eigen::VectorXd mixture_mean(const GaussianMixture& m) {
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(2 * m.modes());
  for (const auto& c : m.components()) mu += c.weight * c.state.mean();
  return mu;
}

std::pair<double, double> coordinate_moments(const GaussianMixture& m,
                                             int coordinate) {
  if (coordinate < 0 || coordinate >= 2 * m.modes())
    throw std::out_of_range("coordinate_moments: coordinate out of range");
  double mean = 0.0, second = 0.0;
  for (const auto& c : m.components()) {
    double mu = c.state.mean()(coordinate);
    mean += c.weight * mu;
    second += c.weight * (c.state.cov()(coordinate, coordinate) + mu * mu);
  }
  return {mean, second - mean * mean};
}

}  // namespace cvqec
