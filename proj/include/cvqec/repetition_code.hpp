#pragma once

#include <array>
#include <string>

#include "cvqec/channel.hpp"
#include "cvqec/mixture.hpp"
#include "cvqec/random.hpp"

namespace cvqec {

/// Parameters of one protocol configuration: ancilla squeezing r, the
/// known channel displacement size xbar2 (> 0), and the per-channel error
/// probability gamma.
struct CodeParams {
  double r;
  double xbar2;
  double gamma;

  void validate() const;
};

/// Decoded error location deduced from the two syndrome outcomes. The
/// all-three-channels pattern is indistinguishable from no error and maps
/// to NoError.
enum class SyndromeClass { NoError, E1, E2, E3, E12, E13, E23 };
inline constexpr int kClassCount = 7;

const char* to_string(SyndromeClass c);

enum class Sign { Minus, Zero, Plus };

struct SignPair {
  Sign s2;
  Sign s3;
};

enum class ClassifyPolicy {
  ThresholdSign,   // per-axis sign thresholds plus the lookup table
  MapLikelihood,   // maximum prior x likelihood over the eight patterns
};

/// One classification hypothesis: an error pattern with its prior and the
/// syndrome means it predicts.
struct SyndromeHypothesis {
  std::array<bool, 3> pattern;
  double prior;
  double mu2;
  double mu3;
  SyndromeClass mapped;
};

/// The eight hypotheses for the given parameters, in branch_table order.
std::array<SyndromeHypothesis, 8> syndrome_hypotheses(const CodeParams& p);

/// Index of the hypothesis maximizing prior x Gaussian likelihood at
/// (x2, x3); both syndrome axes have variance e^{-2r}/4. Ties resolve to
/// the earliest hypothesis in table order.
int most_likely_hypothesis(double x2, double x3,
                           const std::array<SyndromeHypothesis, 8>& hyp,
                           double variance);

/// Tensor the single-mode signal with two x-squeezed ancillas and apply
/// the tritter.
GaussianMixture encode(const GaussianMixture& signal, double r);

/// Invert the tritter.
GaussianMixture decode(const GaussianMixture& m);

/// Per-axis syndrome signs: zero inside (-xbar2/(2*sqrt6), +xbar2/(2*sqrt6))
/// for axis 2 and (-xbar2/(2*sqrt2), +xbar2/(2*sqrt2)) for axis 3, else the
/// outcome's sign. The band edges are the midpoints between zero and the
/// nearest nonzero hypothesis mean on each axis.
SignPair syndrome_signs(double x2, double x3, double xbar2);

/// Map two syndrome outcomes to an error class. ThresholdSign uses the
/// sign table ((0,0) no error, (+,0) channel 1, (-,+) channel 2, (-,-)
/// channel 3, (+,+) 1 and 2, (+,-) 1 and 3, (-,0) 2 and 3); the two sign
/// pairs the table does not cover, (0,+) and (0,-), fall back to the most
/// likely hypothesis. MapLikelihood maximizes prior x likelihood directly.
SyndromeClass classify(double x2, double x3, const CodeParams& p,
                       ClassifyPolicy policy);

/// Feedforward displacement of the signal's x quadrature computed from the
/// measured syndrome values (never from the nominal xbar2).
double feedforward_shift(SyndromeClass cls, double x2, double x3);

/// Noise gain of the recovery: the corrected output x variance is
/// 1/4 + gain^2 * e^{-2r}/4. Zero for NoError.
double feedforward_gain(SyndromeClass cls);

/// Apply the feedforward displacement to the surviving signal mode.
GaussianMixture recover(const GaussianMixture& mode1, SyndromeClass cls,
                        double x2, double x3);

/// One simulated round: syndromes, classification, recovered output and
/// its conditional fidelity to the input.
struct ProtocolRun {
  double x2;
  double x3;
  SyndromeClass cls;
  GaussianMixture output;
  double fid;
};

/// Full round: encode, three independent x-displacement channels, decode,
/// measure ancilla 2 then ancilla 3, classify, recover, score against the
/// input. The signal must be a pure single-mode state.
ProtocolRun run_protocol(const GaussianState& signal, const CodeParams& p,
                         ClassifyPolicy policy, RandomStream& rng);

/// Infinite-squeezing ensemble output: the signal untouched with
/// probability 1-gamma^3, displaced by sqrt3*xbar2 in x with probability
/// gamma^3.
GaussianMixture ideal_output(const GaussianState& signal, double gamma,
                             double xbar2);

}  // namespace cvqec
