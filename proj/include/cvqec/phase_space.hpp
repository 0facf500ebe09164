#pragma once

#include <Eigen/Dense>

namespace cvqec {

/// Quadrature convention used throughout: coordinates are ordered
/// (x1, p1, ..., xn, pn) and the vacuum has variance 1/4 in each
/// quadrature. All phase-space values are immutable after construction
/// and every operation is a pure function, so they can be shared freely
/// between threads.
inline constexpr double kVacuumVariance = 0.25;

/// Symplectic form for n modes: block diagonal with [[0,1],[-1,0]] per mode.
Eigen::MatrixXd omega_matrix(int modes);

/// One-dimensional Gaussian marginal (a homodyne outcome distribution).
struct ScalarGaussian {
  double mean = 0.0;
  double var = 0.0;  // > 0

  double pdf(double x) const;
  double cdf(double x) const;
};

/// Multimode Gaussian state: mean vector of length 2n and a symmetric
/// 2n x 2n covariance matrix obeying the uncertainty relation
/// cov + (i/4)*Omega >= 0. A zero-mode state (empty mean and covariance)
/// is valid; it is what remains after measuring out the last mode.
class GaussianState {
 public:
  /// Validating constructor: checks dimensions, symmetry (1e-12 relative)
  /// and the uncertainty relation (eigenvalues of cov + (i/4)*Omega above
  /// -1e-10). Throws std::invalid_argument on violation.
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  /// Bypasses the uncertainty eigencheck. For internal use by operations
  /// that provably preserve validity; still checks dimensions and
  /// symmetrizes.
  static GaussianState trusted(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  int modes() const { return static_cast<int>(mean_.size()) / 2; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  double x_mean(int mode) const { return mean_(2 * mode); }
  double p_mean(int mode) const { return mean_(2 * mode + 1); }

  /// Smallest eigenvalue of cov + (i/4)*Omega; >= -tol means physical.
  double uncertainty_margin() const;
  bool satisfies_uncertainty(double tol = 1e-10) const;

  /// Pure iff det(cov) = (1/16)^n.
  bool is_pure(double tol = 1e-9) const;

 private:
  struct Trusted {};
  GaussianState(Trusted, Eigen::VectorXd mean, Eigen::MatrixXd cov);

  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

/// Linear phase-space map S with S*Omega*S^T = Omega. The constructor
/// verifies the symplectic identity to 1e-12.
class SymplecticTransform {
 public:
  explicit SymplecticTransform(Eigen::MatrixXd s);

  int modes() const { return static_cast<int>(s_.rows()) / 2; }
  const Eigen::MatrixXd& matrix() const { return s_; }

  /// Inverse via -Omega * S^T * Omega; equals S^T for passive transforms.
  SymplecticTransform inverse() const;

  bool is_passive(double tol = 1e-12) const;

  friend SymplecticTransform operator*(const SymplecticTransform& a,
                                       const SymplecticTransform& b);

 private:
  Eigen::MatrixXd s_;
};

/// Coherent state |x + ip>: mean (x, p), covariance (1/4)*I.
GaussianState coherent(double x, double p);

/// x-squeezed vacuum: covariance diag(e^{-2r}/4, e^{+2r}/4).
GaussianState squeezed_vacuum(double r);

GaussianState vacuum();

/// Tensor product; modes of `a` come first.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Phase-space displacement of one mode by (dx, dp); covariance unchanged.
GaussianState displace(const GaussianState& s, int mode, double dx, double dp);

/// Beam splitter of transmittance t on modes (i, j): the rotation
/// [[sqrt(t), sqrt(1-t)], [-sqrt(1-t), sqrt(t)]] applied identically to
/// the x and p blocks. Requires t in (0, 1) and i != j.
SymplecticTransform beam_splitter(int modes, int i, int j, double t);

/// Three-mode splitter network sending mode 1 into the symmetric
/// combination of all three outputs. Its x-block (the p-block is
/// identical) is the orthogonal matrix with rows
///   (1/sqrt3,  sqrt(2/3),        0 )
///   (1/sqrt3, -1/sqrt6,   1/sqrt2 )
///   (1/sqrt3, -1/sqrt6,  -1/sqrt2 ),
/// equal to the cascade of two transmittance-1/3 and 1/2 splitters in the
/// symmetric sign convention.
SymplecticTransform tritter();

/// mean -> S*mean, cov -> S*cov*S^T.
GaussianState apply_symplectic(const GaussianState& s,
                               const SymplecticTransform& t);

/// Distribution of an x-homodyne measurement on one mode.
ScalarGaussian x_marginal(const GaussianState& s, int mode);

/// Marginal state of everything except `mode`.
GaussianState trace_out(const GaussianState& s, int mode);

struct ConditionResult {
  double density;       // marginal density of the outcome
  GaussianState rest;   // remaining modes, conditioned
};

/// Condition on an x-homodyne outcome `m` on `mode`: Schur-complement
/// update of all other coordinates given x_mode = m, then the measured
/// mode's p coordinate is traced out. For a single-mode input the rest is
/// the zero-mode state.
ConditionResult condition_on_x(const GaussianState& s, int mode, double m);

/// Overlap pi^n * ((2pi)^{2n} det(Ca+Cb))^{-1/2} * exp(-d^T (Ca+Cb)^{-1} d / 2)
/// with d the mean difference. Equals the fidelity when at least one state
/// is pure.
double overlap_pure(const GaussianState& a, const GaussianState& b);

}  // namespace cvqec
