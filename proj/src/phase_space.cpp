#include "cvqec/phase_space.hpp"

#include <cmath>
#include <complex>
#include <initializer_list>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cvqec {

namespace {

constexpr double kSymTol = 1e-12;
constexpr double kUncertaintyTol = 1e-10;

void check_even(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  if (mean.size() % 2 != 0)
    throw std::invalid_argument("mean vector length must be even");
  if (cov.rows() != mean.size() || cov.cols() != mean.size())
    throw std::invalid_argument("covariance dimensions do not match mean");
}

Eigen::MatrixXd symmetrize_checked(Eigen::MatrixXd cov) {
  double scale = std::max(1.0, cov.size() > 0 ? cov.cwiseAbs().maxCoeff() : 1.0);
  double asym = cov.size() > 0 ? (cov - cov.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (asym > kSymTol * scale)
    throw std::invalid_argument("covariance matrix is not symmetric");
  return 0.5 * (cov + cov.transpose());
}

}  // namespace

Eigen::MatrixXd omega_matrix(int modes) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    w(2 * k, 2 * k + 1) = 1.0;
    w(2 * k + 1, 2 * k) = -1.0;
  }
  return w;
}

double ScalarGaussian::pdf(double x) const {
  double d = x - mean;
  return std::exp(-0.5 * d * d / var) /
         std::sqrt(2.0 * std::numbers::pi * var);
}

double ScalarGaussian::cdf(double x) const {
  return 0.5 * std::erfc((mean - x) / std::sqrt(2.0 * var));
}

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  check_even(mean_, cov_);
  cov_ = symmetrize_checked(std::move(cov_));
  if (!satisfies_uncertainty(kUncertaintyTol))
    throw std::invalid_argument(
        "covariance matrix violates the uncertainty relation");
}

GaussianState::GaussianState(Trusted, Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  check_even(mean_, cov_);
  cov_ = 0.5 * (cov_ + cov_.transpose());
}

GaussianState GaussianState::trusted(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  return GaussianState(Trusted{}, std::move(mean), std::move(cov));
}

double GaussianState::uncertainty_margin() const {
  int n = modes();
  if (n == 0) return 0.0;
  Eigen::MatrixXcd h = cov_.cast<std::complex<double>>();
  std::complex<double> im(0.0, 0.25);
  for (int k = 0; k < n; ++k) {
    h(2 * k, 2 * k + 1) += im;
    h(2 * k + 1, 2 * k) -= im;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  return solver.eigenvalues().minCoeff();
}

bool GaussianState::satisfies_uncertainty(double tol) const {
  return uncertainty_margin() >= -tol;
}

bool GaussianState::is_pure(double tol) const {
  int n = modes();
  if (n == 0) return true;
  double scaled = cov_.determinant() * std::pow(16.0, n);
  return std::abs(scaled - 1.0) < tol;
}

SymplecticTransform::SymplecticTransform(Eigen::MatrixXd s) : s_(std::move(s)) {
  if (s_.rows() != s_.cols() || s_.rows() % 2 != 0)
    throw std::invalid_argument("symplectic matrix must be square, even order");
  Eigen::MatrixXd w = omega_matrix(static_cast<int>(s_.rows()) / 2);
  double dev = (s_ * w * s_.transpose() - w).cwiseAbs().maxCoeff();
  if (dev > 1e-12 * std::max(1.0, s_.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("matrix is not symplectic");
}

SymplecticTransform SymplecticTransform::inverse() const {
  Eigen::MatrixXd w = omega_matrix(modes());
  return SymplecticTransform(-w * s_.transpose() * w);
}

bool SymplecticTransform::is_passive(double tol) const {
  Eigen::MatrixXd g = s_.transpose() * s_;
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols()))
             .cwiseAbs()
             .maxCoeff() <= tol;
}

SymplecticTransform operator*(const SymplecticTransform& a,
                              const SymplecticTransform& b) {
  if (a.modes() != b.modes())
    throw std::invalid_argument("mode count mismatch in composition");
  return SymplecticTransform(a.s_ * b.s_);
}

GaussianState coherent(double x, double p) {
  Eigen::VectorXd mean(2);
  mean << x, p;
  return GaussianState::trusted(
      mean, kVacuumVariance * Eigen::MatrixXd::Identity(2, 2));
}

GaussianState squeezed_vacuum(double r) {
  if (!std::isfinite(r))
    throw std::invalid_argument("squeezing parameter must be finite");
  Eigen::MatrixXd cov(2, 2);
  cov << kVacuumVariance * std::exp(-2.0 * r), 0.0, 0.0,
      kVacuumVariance * std::exp(2.0 * r);
  return GaussianState::trusted(Eigen::VectorXd::Zero(2), cov);
}

GaussianState vacuum() { return coherent(0.0, 0.0); }

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  long da = a.mean().size(), db = b.mean().size();
  Eigen::VectorXd mean(da + db);
  mean << a.mean(), b.mean();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(da + db, da + db);
  cov.topLeftCorner(da, da) = a.cov();
  cov.bottomRightCorner(db, db) = b.cov();
  return GaussianState::trusted(std::move(mean), std::move(cov));
}

GaussianState displace(const GaussianState& s, int mode, double dx, double dp) {
  if (mode < 0 || mode >= s.modes())
    throw std::out_of_range("displace: mode index out of range");
  Eigen::VectorXd mean = s.mean();
  mean(2 * mode) += dx;
  mean(2 * mode + 1) += dp;
  return GaussianState::trusted(std::move(mean), s.cov());
}

SymplecticTransform beam_splitter(int modes, int i, int j, double t) {
  if (i == j || i < 0 || j < 0 || i >= modes || j >= modes)
    throw std::out_of_range("beam_splitter: bad mode indices");
  if (!(t > 0.0 && t < 1.0))
    throw std::domain_error("beam_splitter: transmittance must be in (0,1)");
  double c = std::sqrt(t), s = std::sqrt(1.0 - t);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
  for (int q = 0; q < 2; ++q) {  // x block then p block
    m(2 * i + q, 2 * i + q) = c;
    m(2 * i + q, 2 * j + q) = s;
    m(2 * j + q, 2 * i + q) = -s;
    m(2 * j + q, 2 * j + q) = c;
  }
  return SymplecticTransform(std::move(m));
}

SymplecticTransform tritter() {
  // Cascade of two splitters in the symmetric convention
  // [[sqrt(t), sqrt(1-t)], [sqrt(1-t), -sqrt(t)]]: transmittance 1/3 on
  // modes (1,2), then 1/2 on modes (2,3). Written out, the x-block is the
  // target matrix documented in the header.
  double a = 1.0 / std::sqrt(3.0);
  double b = std::sqrt(2.0 / 3.0);
  double c = 1.0 / std::sqrt(6.0);
  double d = 1.0 / std::sqrt(2.0);
  Eigen::Matrix3d t;
  t << a, b, 0.0,
       a, -c, d,
       a, -c, -d;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
  for (int r = 0; r < 3; ++r)
    for (int col = 0; col < 3; ++col) {
      m(2 * r, 2 * col) = t(r, col);
      m(2 * r + 1, 2 * col + 1) = t(r, col);
    }
  return SymplecticTransform(std::move(m));
}

GaussianState apply_symplectic(const GaussianState& s,
                               const SymplecticTransform& t) {
  if (s.modes() != t.modes())
    throw std::invalid_argument("apply_symplectic: mode count mismatch");
  const Eigen::MatrixXd& m = t.matrix();
  return GaussianState::trusted(m * s.mean(), m * s.cov() * m.transpose());
}

ScalarGaussian x_marginal(const GaussianState& s, int mode) {
  if (mode < 0 || mode >= s.modes())
    throw std::out_of_range("x_marginal: mode index out of range");
  return ScalarGaussian{s.mean()(2 * mode), s.cov()(2 * mode, 2 * mode)};
}

namespace {

// Indices with `drop` removed, preserving order.
std::vector<int> complement_indices(int dim, std::initializer_list<int> drop) {
  std::vector<int> keep;
  keep.reserve(dim);
  for (int k = 0; k < dim; ++k) {
    bool dropped = false;
    for (int d : drop) dropped = dropped || (k == d);
    if (!dropped) keep.push_back(k);
  }
  return keep;
}

Eigen::VectorXd select(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

Eigen::MatrixXd select(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(i, j) = m(rows[i], cols[j]);
  return out;
}

}  // namespace

GaussianState trace_out(const GaussianState& s, int mode) {
  if (mode < 0 || mode >= s.modes())
    throw std::out_of_range("trace_out: mode index out of range");
  auto keep =
      complement_indices(2 * s.modes(), {2 * mode, 2 * mode + 1});
  return GaussianState::trusted(select(s.mean(), keep),
                                select(s.cov(), keep, keep));
}

ConditionResult condition_on_x(const GaussianState& s, int mode, double m) {
  if (mode < 0 || mode >= s.modes())
    throw std::out_of_range("condition_on_x: mode index out of range");
  int xi = 2 * mode;
  ScalarGaussian marginal = x_marginal(s, mode);
  double density = marginal.pdf(m);

  // Conditional of all other coordinates (including the measured mode's p)
  // given x_mode = m, then the leftover p row/column is removed.
  auto rest = complement_indices(2 * s.modes(), {xi});
  Eigen::VectorXd mu = select(s.mean(), rest);
  Eigen::MatrixXd sig = select(s.cov(), rest, rest);
  Eigen::VectorXd cross = select(s.cov().col(xi), rest);
  double vxx = s.cov()(xi, xi);
  mu += cross * ((m - s.mean()(xi)) / vxx);
  sig -= cross * cross.transpose() / vxx;

  // The measured mode's p now sits at local index 2*mode.
  auto keep = complement_indices(static_cast<int>(mu.size()), {2 * mode});
  return ConditionResult{density, GaussianState::trusted(select(mu, keep),
                                                         select(sig, keep, keep))};
}

double overlap_pure(const GaussianState& a, const GaussianState& b) {
  if (a.modes() != b.modes())
    throw std::invalid_argument("overlap_pure: mode count mismatch");
  int n = a.modes();
  if (n == 0) return 1.0;
  Eigen::MatrixXd sum = a.cov() + b.cov();
  Eigen::LLT<Eigen::MatrixXd> llt(sum);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("overlap_pure: singular covariance sum");
  double logdet = 0.0;
  for (int k = 0; k < sum.rows(); ++k)
    logdet += 2.0 * std::log(llt.matrixL()(k, k));
  Eigen::VectorXd delta = a.mean() - b.mean();
  double quad = delta.dot(llt.solve(delta));
  // pi^n / ((2 pi)^n sqrt(det)) = 2^{-n} / sqrt(det)
  return std::exp(-n * std::numbers::ln2 - 0.5 * logdet - 0.5 * quad);
}

}  // namespace cvqec
