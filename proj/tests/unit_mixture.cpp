#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cvqec/mixture.hpp"
#include "cvqec/phase_space.hpp"
#include "oracles.hpp"

using namespace cvqec;

namespace {

// Two-component entangled mixture used by several tests.
GaussianMixture correlated_two_mode() {
  SymplecticTransform bs = beam_splitter(2, 0, 1, 0.35);
  GaussianState a = apply_symplectic(
      tensor(squeezed_vacuum(0.8), coherent(1.0, -0.5)), bs);
  GaussianState b = apply_symplectic(
      tensor(displace(squeezed_vacuum(-0.4), 0, -0.6, 0.2), coherent(-0.8, 0.4)),
      bs);
  return GaussianMixture({{0.4, a, "a"}, {0.6, b, "b"}});
}

}  // namespace

TEST_CASE("pure mixtures") {
  GaussianMixture m = pure(coherent(1, 2));
  CHECK(m.size() == 1);
  CHECK(m.components()[0].weight == 1.0);
  CHECK(m.modes() == 1);
  CHECK(fidelity_to_pure(m, coherent(1, 2)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mix") {
  double gamma = 0.2;
  GaussianMixture in = pure(coherent(0.5, 0));
  GaussianMixture shifted = pure(coherent(0.5 + 2.0, 0));
  GaussianMixture out = mix({{1.0 - gamma, in}, {gamma, shifted}});
  REQUIRE(out.size() == 2);
  CHECK(out.components()[0].weight == 1.0 - gamma);
  CHECK(out.components()[1].weight == gamma);
  CHECK(out.total_weight() == doctest::Approx(1.0).epsilon(1e-15));

  GaussianMixture same = mix({{1.0, in}});
  CHECK(same.size() == 1);
  CHECK(same.components()[0].weight == 1.0);

  GaussianMixture four = mix({{0.5, out}, {0.5, out}});
  CHECK(four.size() == 4);
  CHECK(four.total_weight() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(mix({{0.5, in}, {0.4, shifted}}), std::invalid_argument);
  CHECK_THROWS_AS(mix({{0.5, in}, {0.5, correlated_two_mode()}}),
                  std::invalid_argument);
}

TEST_CASE("map_components keeps weights and labels") {
  GaussianMixture m = correlated_two_mode();
  GaussianMixture same = map_components(m, [](const GaussianState& s) { return s; });
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(same.components()[i].weight == m.components()[i].weight);
    CHECK(same.components()[i].label == m.components()[i].label);
  }

  SymplecticTransform bs = beam_splitter(2, 0, 1, 0.5);
  GaussianMixture mapped = map_components(m, bs);
  CHECK(mapped.components()[0].weight == m.components()[0].weight);
  GaussianMixture round = map_components(mapped, bs.inverse());
  for (std::size_t i = 0; i < m.size(); ++i)
    CHECK((round.components()[i].state.mean() - m.components()[i].state.mean())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("homodyne density") {
  GaussianMixture v = pure(coherent(0, 0));
  CHECK(homodyne_density(v, 0, 0.0) ==
        doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-14));

  double d = 1.7;
  GaussianMixture sym = mix({{0.5, pure(coherent(d, 0))},
                             {0.5, pure(coherent(-d, 0))}});
  for (double x : {0.3, 1.1, 2.9})
    CHECK(homodyne_density(sym, 0, x) ==
          doctest::Approx(homodyne_density(sym, 0, -x)).epsilon(1e-13));

  GaussianMixture m = correlated_two_mode();
  for (int mode : {0, 1}) {
    double mass = oracles::integrate(
        [&](double x) { return homodyne_density(m, mode, x); }, -12.0, 12.0, 48,
        16);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("conditioning a mixture") {
  GaussianMixture single = pure(tensor(coherent(1, 0), squeezed_vacuum(0.4)));
  GaussianMixture cond = condition(single, 1, 0.1);
  CHECK(cond.size() == 1);
  CHECK(cond.components()[0].weight == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cond.modes() == 1);

  // Conditioning a product-state mixture only reweights; the untouched
  // modes' component states are unchanged.
  GaussianMixture prod =
      mix({{0.3, pure(tensor(coherent(2, 0), coherent(0.5, 0)))},
           {0.7, pure(tensor(coherent(-1, 0), coherent(-0.5, 0)))}});
  GaussianMixture after = condition(prod, 1, 0.45);
  for (std::size_t i = 0; i < after.size(); ++i) {
    CHECK(after.components()[i].state.x_mean(0) ==
          prod.components()[i].state.x_mean(0));
    CHECK(after.components()[i].state.cov()(0, 0) ==
          prod.components()[i].state.cov()(0, 0));
  }
  CHECK(after.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(after.components()[0].weight > 0.3);  // 0.45 is closer to mode-2 mean 0.5

  // Far enough out that every component density underflows.
  CHECK_THROWS_AS(condition(prod, 0, 1e6), std::domain_error);
}

TEST_CASE("sampling statistics") {
  GaussianMixture v = pure(coherent(0, 0));
  RandomStream rng(99);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_homodyne(v, 0, rng).outcome;
  CHECK(std::abs(sum / n) < 5e-3);
}

TEST_CASE("sampled histogram matches the marginal density (KS test)") {
  GaussianMixture m = mix({{0.3, pure(coherent(-2.0, 0))},
                           {0.7, pure(displace(squeezed_vacuum(0.5), 0, 1.5, 0))}});
  const int n = 20000;
  RandomStream rng(4242);
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = sample_homodyne(m, 0, rng).outcome;
  std::sort(xs.begin(), xs.end());

  auto cdf = [&](double x) {
    double c = 0.0;
    for (const auto& comp : m.components())
      c += comp.weight * x_marginal(comp.state, 0).cdf(x);
    return c;
  };
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    double f = cdf(xs[i]);
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - f));
  }
  // 1% critical value of the one-sample KS statistic.
  CHECK(ks < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  GaussianMixture m = correlated_two_mode();
  for (int rep = 0; rep < 2; ++rep) {
    RandomStream a(31337), b(31337);
    for (int i = 0; i < 50; ++i) {
      double xa = sample_homodyne(m, 0, a).outcome;
      double xb = sample_homodyne(m, 0, b).outcome;
      CHECK(xa == xb);
    }
  }
}

TEST_CASE("fidelity to a pure target") {
  GaussianState target = coherent(0.4, -0.2);
  CHECK(fidelity_to_pure(pure(target), target) == doctest::Approx(1.0).epsilon(1e-13));

  // Ensemble output of the ideal protocol: identity plus a sqrt(3)*xbar2 shift.
  double gamma = 0.25, xbar2 = 1.1;
  double g3 = gamma * gamma * gamma;
  GaussianMixture out =
      mix({{1.0 - g3, pure(target)},
           {g3, pure(displace(target, 0, std::sqrt(3.0) * xbar2, 0))}});
  CHECK(fidelity_to_pure(out, target) ==
        doctest::Approx((1.0 - g3) + g3 * std::exp(-3.0 * xbar2 * xbar2))
            .epsilon(1e-13));

  // Unencoded channel output against the input.
  double gx = 0.35, shift = 1.3;
  GaussianMixture direct = mix({{1.0 - gx, pure(target)},
                                {gx, pure(displace(target, 0, shift, 0))}});
  CHECK(fidelity_to_pure(direct, target) ==
        doctest::Approx((1.0 - gx) + gx * std::exp(-shift * shift))
            .epsilon(1e-13));

  CHECK_THROWS_AS(fidelity_to_pure(correlated_two_mode(), target),
                  std::invalid_argument);
}

TEST_CASE("fidelity is linear in the mixture weights") {
  GaussianState target = coherent(0, 0);
  GaussianMixture a = pure(coherent(0.7, 0.1));
  GaussianMixture b = pure(displace(squeezed_vacuum(0.4), 0, -0.4, 0.6));
  for (double p : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    GaussianMixture combined =
        p == 0.0 ? b : (p == 1.0 ? a : mix({{p, a}, {1.0 - p, b}}));
    double expect =
        p * fidelity_to_pure(a, target) + (1.0 - p) * fidelity_to_pure(b, target);
    CHECK(fidelity_to_pure(combined, target) ==
          doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("prune") {
  GaussianMixture m = mix({{0.999, pure(coherent(0, 0))},
                           {0.001, pure(coherent(3, 0))}});
  GaussianMixture kept = prune(m, 0.0);
  CHECK(kept.size() == 2);

  GaussianMixture dropped = prune(m, 0.01);
  CHECK(dropped.size() == 1);
  CHECK(dropped.components()[0].weight == 1.0);

  // Never drops everything.
  GaussianMixture all_small =
      mix({{0.5, pure(coherent(0, 0))}, {0.5, pure(coherent(1, 0))}});
  GaussianMixture survived = prune(all_small, 0.9);
  CHECK(survived.size() == 1);

  // Fidelity moves by at most threshold * component count.
  GaussianState target = coherent(0, 0);
  double before = fidelity_to_pure(m, target);
  double after = fidelity_to_pure(dropped, target);
  CHECK(std::abs(after - before) <= 0.01 * static_cast<double>(m.size()));
}

TEST_CASE("weight normalization holds after every operation") {
  GaussianMixture m = correlated_two_mode();
  CHECK(std::abs(m.total_weight() - 1.0) < 1e-9);
  GaussianMixture mapped = map_components(m, beam_splitter(2, 0, 1, 0.77));
  CHECK(std::abs(mapped.total_weight() - 1.0) < 1e-9);
  GaussianMixture cond = condition(mapped, 0, 0.2);
  CHECK(std::abs(cond.total_weight() - 1.0) < 1e-9);
  GaussianMixture pruned = prune(cond, 1e-12);
  CHECK(std::abs(pruned.total_weight() - 1.0) < 1e-9);
}

TEST_CASE("law of total fidelity under sampled homodyne outcomes") {
  GaussianMixture m = correlated_two_mode();
  GaussianState target = coherent(0.3, 0.2);
  GaussianMixture marginal = trace_out(m, 1);
  double exact = fidelity_to_pure(marginal, target);

  const int n = 100000;
  RandomStream rng(555);
  std::vector<double> fids(n);
  for (int i = 0; i < n; ++i)
    fids[i] = fidelity_to_pure(sample_homodyne(m, 1, rng).conditioned, target);
  double mean = 0.0;
  for (double f : fids) mean += f;
  mean /= n;
  double ss = 0.0;
  for (double f : fids) ss += (f - mean) * (f - mean);
  double stderr_mean = std::sqrt(ss / (n - 1.0) / n);
  CHECK(std::abs(mean - exact) < 4.0 * stderr_mean);
}

TEST_CASE("conditioning then integrating over outcomes recovers the marginal") {
  GaussianMixture m =
      mix({{0.2, pure(tensor(coherent(1.2, 0.1), coherent(0.4, 0)))},
           {0.5, pure(apply_symplectic(tensor(squeezed_vacuum(0.6), coherent(-0.7, 0.3)),
                                       beam_splitter(2, 0, 1, 0.45)))},
           {0.3, pure(tensor(displace(squeezed_vacuum(-0.3), 0, 0.5, -0.2),
                             coherent(-0.2, 0.6)))}});
  GaussianState target = coherent(0.25, 0.1);
  double exact_fid = fidelity_to_pure(trace_out(m, 1), target);
  double exact_mean = mixture_mean(trace_out(m, 1))(0);

  double fid_integral = oracles::integrate(
      [&](double x) {
        return homodyne_density(m, 1, x) *
               fidelity_to_pure(condition(m, 1, x), target);
      },
      -14.0, 14.0, 56, 16);
  double mean_integral = oracles::integrate(
      [&](double x) {
        return homodyne_density(m, 1, x) * mixture_mean(condition(m, 1, x))(0);
      },
      -14.0, 14.0, 56, 16);
  CHECK(fid_integral == doctest::Approx(exact_fid).epsilon(1e-7));
  CHECK(mean_integral == doctest::Approx(exact_mean).epsilon(1e-7));
}

TEST_CASE("coordinate moments") {
  GaussianMixture m = mix({{0.5, pure(coherent(1, 2))},
                           {0.5, pure(coherent(-1, 2))}});
  auto [mx, vx] = coordinate_moments(m, 0);
  CHECK(mx == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(vx == doctest::Approx(0.25 + 1.0).epsilon(1e-13));
  auto [mp, vp] = coordinate_moments(m, 1);
  CHECK(mp == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(vp == doctest::Approx(0.25).epsilon(1e-13));
}
