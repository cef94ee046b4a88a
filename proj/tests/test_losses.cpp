#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shrink/dataset.hpp"
#include "shrink/losses.hpp"
#include "shrink/posterior_eb.hpp"
#include "shrink/quadrature.hpp"

using namespace shrink;

namespace {

constexpr double kPi = std::numbers::pi;

double log_normal_density(double t, double mean, double var) {
  const double d = t - mean;
  return -0.5 * d * d / var - 0.5 * std::log(2.0 * kPi * var);
}

}  // namespace

TEST_CASE("weight function shapes") {
  const double m = -3.3;
  CHECK(weight(WeightedLossSpec::square(), 17.0) == doctest::Approx(1.0));
  CHECK(weight(WeightedLossSpec::exponential(m, 1.0), m) ==
        doctest::Approx(1.0).epsilon(1e-14));
  // Cauchy(m|m,1) / Normal(m|m,2.19): frozen high-precision ratio
  CHECK(weight(WeightedLossSpec::cauchy_over_gaussian(m), m) ==
        doctest::Approx(1.1807613228273541).epsilon(1e-12));

  SUBCASE("cauchy-over-gaussian grows without bound") {
    // the ratio dips below 1 near +-2 before the Gaussian tail gives out;
    // the unbounded growth sets in beyond that
    const auto spec = WeightedLossSpec::cauchy_over_gaussian(0.0);
    CHECK(weight(spec, 2.0) < weight(spec, 0.0));
    double prev = weight(spec, 3.0);
    for (double th : {4.0, 6.0, 8.0, 16.0}) {
      const double w = weight(spec, th);
      CHECK(w > prev);
      prev = w;
    }
    CHECK(weight(spec, 40.0) > 1e100);
  }
}

TEST_CASE("loss values") {
  const double m = 1.0;
  CHECK(loss(WeightedLossSpec::cauchy_over_gaussian(m), 0.3, 0.3) ==
        doctest::Approx(0.0));
  CHECK(loss(WeightedLossSpec::square(), 2.0, 0.0) == doctest::Approx(4.0));
  CHECK(loss(WeightedLossSpec::cauchy_over_gaussian(m), m, m + 1.0) ==
        doctest::Approx(1.1807613228273541).epsilon(1e-12));

  SUBCASE("locally quadratic at the anchor") {
    const auto spec = WeightedLossSpec::cauchy_over_gaussian(0.0);
    const double delta = 3.0;
    for (double th : {1e-3, 1e-5}) {
      const double ratio = loss(spec, th, delta) / ((th - delta) * (th - delta));
      CHECK(std::fabs(ratio - weight(spec, 0.0)) < 1e-2);
    }
  }
}

TEST_CASE("optimal estimate under unit weight is the posterior mean") {
  const auto spec = WeightedLossSpec::square();
  for (double mean : {-3.0, 0.5}) {
    const double est = optimal_estimate(
        spec, [&](double t) { return log_normal_density(t, mean, 0.7); }, mean);
    CHECK(est == doctest::Approx(mean).epsilon(1e-9));
  }
}

TEST_CASE("loss-prior bridge: robust loss equals Cauchy-prior posterior mean") {
  const auto& players = canonical_players();
  const auto xs = transformed_scores(players);
  const HyperParams hp = fit_empirical_hyperparams(xs);
  const auto cog = WeightedLossSpec::cauchy_over_gaussian(hp.m);
  for (double x : xs) {
    // posterior under the Normal(m, 2.19) prior paired with the loss
    const double post_var = 2.19 / (1.0 + 2.19);
    const double post_mean = (2.19 * x + hp.m) / (1.0 + 2.19);
    const double robust = optimal_estimate(
        cog,
        [&](double t) { return log_normal_density(t, post_mean, post_var); },
        post_mean);
    const double cauchy_mean =
        posterior_mean_quadrature({x, PriorSpec::cauchy(hp.m, 1.0)});
    CHECK(std::fabs(robust - cauchy_mean) < 1e-6);
  }
}

TEST_CASE("exponential-weight closed form against the quadrature oracle") {
  const double m = -2.0;

  SUBCASE("tiny rate degenerates to the posterior mean") {
    CHECK(std::fabs(exp_loss_estimator(0.7, 1.3, m, 1e-8) - 0.7) < 1e-6);
  }
  SUBCASE("anchored case") {
    const double est = exp_loss_estimator(m, 1.0, m, 0.5);
    const double oracle = optimal_estimate(
        WeightedLossSpec::exponential(m, 0.5),
        [&](double t) { return log_normal_density(t, m, 1.0); }, m);
    CHECK(std::fabs(est - oracle) < 1e-6);
  }
  SUBCASE("shifted case pulls toward the heavy side") {
    const double mu1 = m + 2.0;
    const double est = exp_loss_estimator(mu1, 0.5, m, 1.0);
    const double oracle = optimal_estimate(
        WeightedLossSpec::exponential(m, 1.0),
        [&](double t) { return log_normal_density(t, mu1, 0.5); }, mu1);
    CHECK(std::fabs(est - oracle) < 1e-6);
    CHECK(est > mu1);  // weight grows fastest away from the anchor
  }
  SUBCASE("3x3x3 spot grid") {
    for (double dm : {-2.0, 0.0, 1.0}) {
      for (double v : {0.5, 1.0, 2.0}) {
        for (double r : {0.1, 0.5, 1.0}) {
          const double mu1 = m + dm;
          const double est = exp_loss_estimator(mu1, v, m, r);
          const double oracle = optimal_estimate(
              WeightedLossSpec::exponential(m, r),
              [&](double t) { return log_normal_density(t, mu1, v); }, mu1);
          CHECK(std::fabs(est - oracle) < 1e-6);
        }
      }
    }
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS(exp_loss_estimator(0, -1.0, 0, 1.0), std::domain_error);
    CHECK_THROWS_AS(exp_loss_estimator(0, 1.0, 0, 0.0), std::domain_error);
  }
}

TEST_CASE("exponential weight against a Cauchy-tailed posterior diverges") {
  const auto spec = WeightedLossSpec::exponential(0.0, 1.0);
  auto log_cauchy_posterior = [](double t) {
    return -std::log1p(t * t) - std::log(kPi);
  };
  CHECK_THROWS_AS(optimal_estimate(spec, log_cauchy_posterior, 0.0),
                  QuadratureError);
}
