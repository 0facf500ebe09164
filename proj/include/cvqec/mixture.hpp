#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cvqec/phase_space.hpp"
#include "cvqec/random.hpp"

namespace cvqec {

/// One term of a convex mixture. The label is free-form provenance used
/// for reporting (e.g. which channels displaced this branch); it plays no
/// role in any computation.
struct WeightedComponent {
  double weight;
  GaussianState state;
  std::string label;
};

/// Finite convex mixture of Gaussian states over a common set of modes.
/// Weights sum to 1 (checked to 1e-10 at construction). Mixtures are
/// immutable; all operations below return new values.
class GaussianMixture {
 public:
  explicit GaussianMixture(std::vector<WeightedComponent> components);

  int modes() const { return components_.front().state.modes(); }
  std::size_t size() const { return components_.size(); }
  const std::vector<WeightedComponent>& components() const {
    return components_;
  }
  double total_weight() const;

 private:
  std::vector<WeightedComponent> components_;
};

/// Single-component mixture with weight 1.
GaussianMixture pure(GaussianState s);

/// Convex combination of mixtures: component weights are scaled by the
/// branch probabilities and concatenated. Probabilities must sum to
/// 1 (1e-10); zero-probability branches contribute no components.
GaussianMixture mix(
    const std::vector<std::pair<double, GaussianMixture>>& branches);

/// Apply a map to every component state; weights and labels unchanged.
GaussianMixture map_components(
    const GaussianMixture& m,
    const std::function<GaussianState(const GaussianState&)>& f);
GaussianMixture map_components(const GaussianMixture& m,
                               const SymplecticTransform& t);
GaussianMixture displace(const GaussianMixture& m, int mode, double dx,
                         double dp);

/// Marginal density of the x quadrature of `mode` at `x`:
/// sum_i w_i * pdf_i(x).
double homodyne_density(const GaussianMixture& m, int mode, double x);

/// Bayesian update on an x-homodyne outcome: every component is
/// conditioned and reweighted by w_i * density_i / (total density).
/// Throws std::domain_error if the total density vanishes.
GaussianMixture condition(const GaussianMixture& m, int mode, double x);

struct HomodyneSample {
  double outcome;
  GaussianMixture conditioned;
};

/// Draw an outcome from the exact mixture marginal (component by weight,
/// then its Gaussian marginal) and return the conditioned mixture.
HomodyneSample sample_homodyne(const GaussianMixture& m, int mode,
                               RandomStream& rng);

/// F = sum_i w_i * overlap_pure(state_i, target); target must be pure.
double fidelity_to_pure(const GaussianMixture& m, const GaussianState& target);

/// Drop components lighter than `epsilon` and renormalize; the heaviest
/// component is always kept.
GaussianMixture prune(const GaussianMixture& m, double epsilon = 1e-12);

/// Marginal mixture with `mode` removed from every component.
GaussianMixture trace_out(const GaussianMixture& m, int mode);

/// First moment of the mixture (weighted component means).
Eigen::VectorXd mixture_mean(const GaussianMixture& m);

/// Mean and variance of one phase-space coordinate of the mixture
/// (coordinate index in the interleaved x1,p1,... ordering).
std::pair<double, double> coordinate_moments(const GaussianMixture& m,
                                             int coordinate);

}  // namespace cvqec
