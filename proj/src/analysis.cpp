#include "cvqec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace cvqec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Inverse standard normal CDF: Acklam's rational approximation refined by
// one Halley step, accurate to ~1e-15 over (0, 1).
double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("inverse_normal_cdf: p outside (0,1)");
  static const double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5, r = q * q;
    x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) *
        q /
        (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  }
  if (std::abs(x) < 37.0) {  // refinement is representable here
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

// P(a < X < b) for X ~ N(mu, sigma^2), stable in both tails.
double interval_mass(double mu, double sigma, double a, double b) {
  double za = (a - mu) / sigma, zb = (b - mu) / sigma;
  if (a == -kInf) za = -kInf;
  if (b == kInf) zb = kInf;
  auto lower = [](double z) {
    return z == -kInf ? 0.0 : (z == kInf ? 2.0 : std::erfc(-z / std::numbers::sqrt2));
  };
  auto upper = [](double z) {
    return z == kInf ? 0.0 : (z == -kInf ? 2.0 : std::erfc(z / std::numbers::sqrt2));
  };
  double m = (za + zb > 0.0 || zb == kInf)
                 ? 0.5 * (upper(za) - upper(zb))   // upper-tail form
                 : 0.5 * (lower(zb) - lower(za));  // lower-tail form
  return std::max(m, 0.0);
}

// Midpoints of k equal-probability-mass slices of N(mu, sigma^2)
// restricted to [a, b]. Mirrored onto the lower tail where the CDF is
// representable; intervals with negligible mass yield no nodes.
struct TruncatedNodes {
  double mass = 0.0;
  std::vector<double> x;
};

TruncatedNodes equal_mass_nodes(double mu, double sigma, double a, double b,
                                int k) {
  TruncatedNodes out;
  out.mass = interval_mass(mu, sigma, a, b);
  if (out.mass < 1e-30) return out;
  double za = a == -kInf ? -kInf : (a - mu) / sigma;
  double zb = b == kInf ? kInf : (b - mu) / sigma;
  bool flip = (za == -kInf ? zb > 0.0 : (zb == kInf ? za > 0.0 : za + zb > 0.0));
  if (flip) {
    double tmp = za;
    za = -zb;
    zb = -tmp;
  }
  double ulo = za == -kInf ? 0.0 : normal_cdf(za);
  out.x.reserve(k);
  for (int i = 0; i < k; ++i) {
    double u = ulo + (i + 0.5) * (out.mass / k);
    u = std::min(u, 1.0 - 1e-16);
    double z = inverse_normal_cdf(u);
    out.x.push_back(mu + sigma * (flip ? -z : z));
  }
  return out;
}

int class_index(SyndromeClass c) { return static_cast<int>(c); }

// Simple deterministic parallel loop: the body writes to per-index slots,
// so the result is independent of the thread count.
void parallel_for(long long n, const std::function<void(long long)>& body) {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads == 1 || n < 256) {
    for (long long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  long long chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    long long lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (long long i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

McEstimate reduce_estimate(const std::vector<double>& values,
                           std::uint64_t seed) {
  long long n = static_cast<long long>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  return McEstimate{mean, sd / std::sqrt(static_cast<double>(n)), n, seed};
}

std::vector<double> mc_fidelities(const CodeParams& p, ClassifyPolicy policy,
                                  long long n_runs, std::uint64_t seed,
                                  std::uint64_t block,
                                  const GaussianState& signal) {
  if (n_runs < 1) throw std::invalid_argument("need at least one run");
  std::vector<double> fids(n_runs);
  parallel_for(n_runs, [&](long long i) {
    RandomStream rng = RandomStream::derived(seed, block, i);
    fids[i] = run_protocol(signal, p, policy, rng).fid;
  });
  return fids;
}

// Position of an error pattern in branch_table order.
int pattern_index(const std::array<bool, 3>& pattern) {
  static const int by_bits[8] = {0, 1, 2, 4, 3, 5, 6, 7};
  return by_bits[(pattern[0] ? 1 : 0) | (pattern[1] ? 2 : 0) |
                 (pattern[2] ? 4 : 0)];
}

}  // namespace

double fidelity_direct(double gamma, double xbar2) {
  return (1.0 - gamma) + gamma * std::exp(-xbar2 * xbar2);
}

double fidelity_encoded_ideal(double gamma, double xbar2) {
  double g3 = gamma * gamma * gamma;
  return (1.0 - g3) + g3 * std::exp(-3.0 * xbar2 * xbar2);
}

double fidelity_encoded_semianalytic(double gamma, double r, double xbar2) {
  double v = kVacuumVariance * std::exp(-2.0 * r);
  double f = 0.0;
  for (const auto& h : syndrome_hypotheses(CodeParams{r, xbar2, gamma})) {
    int hits = h.pattern[0] + h.pattern[1] + h.pattern[2];
    if (hits == 0) {
      f += h.prior;
    } else if (hits == 3) {
      f += h.prior * std::exp(-3.0 * xbar2 * xbar2);
    } else {
      double g = feedforward_gain(h.mapped);
      f += h.prior / std::sqrt(1.0 + 2.0 * g * g * v);
    }
  }
  return f;
}

const std::array<std::string, 8>& branch_labels() {
  static const std::array<std::string, 8> labels = {
      "none", "e1", "e2", "e3", "e12", "e13", "e23", "all"};
  return labels;
}

Eigen::MatrixXd misclassification_probs(const CodeParams& p,
                                        ClassifyPolicy policy) {
  p.validate();
  auto hyp = syndrome_hypotheses(p);
  double sigma = 0.5 * std::exp(-p.r);
  double var = sigma * sigma;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, kClassCount);

  auto ml_class = [&](double x2, double x3) {
    return hyp[most_likely_hypothesis(x2, x3, hyp, var)].mapped;
  };

  if (policy == ClassifyPolicy::MapLikelihood) {
    const int k = 1024;
    for (int b = 0; b < 8; ++b) {
      auto n2 = equal_mass_nodes(hyp[b].mu2, sigma, -kInf, kInf, k);
      auto n3 = equal_mass_nodes(hyp[b].mu3, sigma, -kInf, kInf, k);
      double w = 1.0 / (static_cast<double>(k) * k);
      for (double x2 : n2.x)
        for (double x3 : n3.x) m(b, class_index(ml_class(x2, x3))) += w;
    }
    return m;
  }

  double t2 = p.xbar2 / (2.0 * std::sqrt(6.0));
  double t3 = p.xbar2 / (2.0 * std::sqrt(2.0));
  // (s2, s3) cells of the sign table; the (Zero, +-) cells are handled by
  // quadrature below.
  struct Cell {
    double a2, b2, a3, b3;
    SyndromeClass cls;
  };
  const Cell cells[7] = {
      {-t2, t2, -t3, t3, SyndromeClass::NoError},
      {t2, kInf, -t3, t3, SyndromeClass::E1},
      {-kInf, -t2, t3, kInf, SyndromeClass::E2},
      {-kInf, -t2, -kInf, -t3, SyndromeClass::E3},
      {t2, kInf, t3, kInf, SyndromeClass::E12},
      {t2, kInf, -kInf, -t3, SyndromeClass::E13},
      {-kInf, -t2, -t3, t3, SyndromeClass::E23},
  };

  const int k = 512;
  for (int b = 0; b < 8; ++b) {
    for (const Cell& c : cells)
      m(b, class_index(c.cls)) += interval_mass(hyp[b].mu2, sigma, c.a2, c.b2) *
                                  interval_mass(hyp[b].mu3, sigma, c.a3, c.b3);
    for (double side : {+1.0, -1.0}) {
      auto n2 = equal_mass_nodes(hyp[b].mu2, sigma, -t2, t2, k);
      auto n3 = side > 0 ? equal_mass_nodes(hyp[b].mu3, sigma, t3, kInf, k)
                         : equal_mass_nodes(hyp[b].mu3, sigma, -kInf, -t3, k);
      if (n2.x.empty() || n3.x.empty()) continue;
      double w = n2.mass * n3.mass / (static_cast<double>(k) * k);
      for (double x2 : n2.x)
        for (double x3 : n3.x) m(b, class_index(ml_class(x2, x3))) += w;
    }
  }
  return m;
}

McEstimate estimate_fidelity_mc(const CodeParams& p, ClassifyPolicy policy,
                                long long n_runs, std::uint64_t seed,
                                const GaussianState& signal) {
  p.validate();
  return reduce_estimate(mc_fidelities(p, policy, n_runs, seed, 0, signal),
                         seed);
}

McEstimate direct_transmission_mc(double gamma, double xbar2, long long n_runs,
                                  std::uint64_t seed,
                                  const GaussianState& signal) {
  if (n_runs < 1) throw std::invalid_argument("need at least one run");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in [0, 1]");
  double err_fid = overlap_pure(displace(signal, 0, xbar2, 0.0), signal);
  std::vector<double> fids(n_runs);
  parallel_for(n_runs, [&](long long i) {
    RandomStream rng = RandomStream::derived(seed, 0, i);
    fids[i] = rng.uniform() < gamma ? err_fid : 1.0;
  });
  return reduce_estimate(fids, seed);
}

std::array<BranchStats, 8> branch_statistics_mc(const CodeParams& p,
                                                ClassifyPolicy policy,
                                                long long n_runs,
                                                std::uint64_t seed,
                                                const GaussianState& signal) {
  p.validate();
  if (n_runs < 1) throw std::invalid_argument("need at least one run");
  if (signal.modes() != 1 || !signal.is_pure())
    throw std::invalid_argument("signal must be a pure single-mode state");

  struct Record {
    int branch;
    int cls;
    double x_mean;
    double fid;
    double p_mean_dev;
    double p_var_dev;
  };
  std::vector<Record> records(n_runs);
  GaussianMixture encoded = encode(pure(signal), p.r);
  double sig_x = signal.x_mean(0), sig_p = signal.p_mean(0);
  double sig_pvar = signal.cov()(1, 1);

  parallel_for(n_runs, [&](long long i) {
    RandomStream rng = RandomStream::derived(seed, 0, i);
    std::array<bool, 3> pattern;
    for (int mode = 0; mode < 3; ++mode) pattern[mode] = rng.uniform() < p.gamma;

    GaussianMixture state = encoded;
    for (int mode = 0; mode < 3; ++mode)
      if (pattern[mode]) state = displace(state, mode, p.xbar2, 0.0);
    GaussianMixture decoded = decode(state);

    HomodyneSample m2 = sample_homodyne(decoded, 1, rng);
    HomodyneSample m3 = sample_homodyne(m2.conditioned, 1, rng);
    SyndromeClass cls = classify(m2.outcome, m3.outcome, p, policy);
    GaussianMixture out = recover(m3.conditioned, cls, m2.outcome, m3.outcome);

    auto [px, vx] = coordinate_moments(out, 0);
    auto [pp, vp] = coordinate_moments(out, 1);
    records[i] = Record{pattern_index(pattern),
                        class_index(cls),
                        px,
                        fidelity_to_pure(out, signal),
                        std::abs(pp - sig_p),
                        std::abs(vp - sig_pvar)};
  });

  std::array<BranchStats, 8> stats{};
  auto hyp = syndrome_hypotheses(p);
  // Two passes over the per-branch residuals for a stable variance.
  std::array<double, 8> disp_sum{};
  for (const Record& rec : records) {
    BranchStats& s = stats[rec.branch];
    s.n += 1;
    s.class_counts[rec.cls] += 1;
    s.mean_fid += rec.fid;
    s.max_p_mean_dev = std::max(s.max_p_mean_dev, rec.p_mean_dev);
    s.max_p_var_dev = std::max(s.max_p_var_dev, rec.p_var_dev);
    if (rec.cls == class_index(hyp[rec.branch].mapped)) {
      s.n_correct += 1;
      disp_sum[rec.branch] += rec.x_mean - sig_x;
    }
  }
  for (int b = 0; b < 8; ++b) {
    if (stats[b].n > 0) stats[b].mean_fid /= static_cast<double>(stats[b].n);
    if (stats[b].n_correct > 0)
      stats[b].residual_mean = disp_sum[b] / static_cast<double>(stats[b].n_correct);
  }
  std::array<double, 8> ss{};
  for (const Record& rec : records) {
    if (rec.cls != class_index(hyp[rec.branch].mapped)) continue;
    double d = rec.x_mean - sig_x - stats[rec.branch].residual_mean;
    ss[rec.branch] += d * d;
  }
  for (int b = 0; b < 8; ++b)
    if (stats[b].n_correct > 1)
      stats[b].residual_var = ss[b] / static_cast<double>(stats[b].n_correct - 1);
  return stats;
}

void SweepSpec::validate() const {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  if (runs_per_point < 1)
    throw std::invalid_argument("sweep: need at least one run per point");
  for (double v : grid) {
    switch (parameter) {
      case Parameter::Gamma:
        if (!(v >= 0.0 && v <= 1.0))
          throw std::invalid_argument("sweep: gamma grid value outside [0, 1]");
        break;
      case Parameter::R:
        if (!std::isfinite(v))
          throw std::invalid_argument("sweep: squeezing grid value not finite");
        break;
      case Parameter::Xbar2:
        if (!(v > 0.0))
          throw std::invalid_argument("sweep: xbar2 grid value must be > 0");
        break;
    }
  }
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  spec.validate();
  const char* name = spec.parameter == SweepSpec::Parameter::Gamma ? "gamma"
                     : spec.parameter == SweepSpec::Parameter::R   ? "r"
                                                                   : "xbar2";
  std::vector<SweepRow> rows;
  rows.reserve(spec.grid.size());
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    CodeParams p = spec.base;
    switch (spec.parameter) {
      case SweepSpec::Parameter::Gamma: p.gamma = spec.grid[i]; break;
      case SweepSpec::Parameter::R: p.r = spec.grid[i]; break;
      case SweepSpec::Parameter::Xbar2: p.xbar2 = spec.grid[i]; break;
    }
    p.validate();
    McEstimate mc = reduce_estimate(
        mc_fidelities(p, spec.policy, spec.runs_per_point, spec.seed, i,
                      coherent(0, 0)),
        spec.seed);
    SweepRow row{name,
                 spec.grid[i],
                 p.gamma,
                 p.r,
                 p.xbar2,
                 fidelity_direct(p.gamma, p.xbar2),
                 fidelity_encoded_ideal(p.gamma, p.xbar2),
                 fidelity_encoded_semianalytic(p.gamma, p.r, p.xbar2),
                 mc.mean,
                 mc.std_err,
                 mc.n_runs,
                 mc.seed};
    for (double v : {row.f_direct, row.f_ideal, row.f_semianalytic,
                     row.f_mc_mean, row.f_mc_stderr}) {
      if (!std::isfinite(v))
        throw std::runtime_error("sweep: non-finite result at grid point");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "param_name,param_value,gamma,r,xbar2,f_direct,f_ideal,"
      "f_semianalytic,f_mc_mean,f_mc_stderr,n_runs,seed\n";
  for (const auto& r : rows) {
    out += r.param_name;
    for (double v : {r.param_value, r.gamma, r.r, r.xbar2, r.f_direct,
                     r.f_ideal, r.f_semianalytic, r.f_mc_mean, r.f_mc_stderr})
      out += "," + fmt17(v);
    out += "," + std::to_string(r.n_runs);
    out += "," + std::to_string(r.seed);
    out += "\n";
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << to_csv(rows);
  out.flush();
  if (!out) throw std::runtime_error("CSV write failed");
}

void write_csv_file(const std::string& path,
                    const std::vector<SweepRow>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  write_csv(f, rows);
}

}  // namespace cvqec
