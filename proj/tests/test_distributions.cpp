#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "shrink/distributions.hpp"
#include "shrink/quadrature.hpp"

using namespace shrink;

namespace {

constexpr double kPi = std::numbers::pi;

// the displayed scale-mixture integrand behind the explicit marginal:
// Cauchy(theta|0,tau) * ScBeta2(tau|1,1,b)
double scbeta2_mixture(double theta, double b) {
  auto f = [&](double tau) {
    return b * tau / (kPi * (b + tau) * (b + tau) * (theta * theta + tau * tau));
  };
  const double breaks[] = {std::fabs(theta), b};
  QuadratureOptions opt;
  opt.rel_tol = 1e-12;
  return integrate_half_line(f, 0.0, breaks, opt);
}

// Result-4 generating mixture: Cauchy(theta|mu,tau) with tau^2 ~ ScBeta2(1,1,b)
double s2beta2_mixture(double theta, double mu, double b) {
  const double d = theta - mu;
  auto f = [&](double s) {  // s = tau^2
    const double tau = std::sqrt(s);
    const double cauchy = tau / (kPi * (d * d + s));
    const double prior = b / ((b + s) * (b + s));
    return cauchy * prior;
  };
  const double breaks[] = {d * d, b};
  QuadratureOptions opt;
  opt.rel_tol = 1e-12;
  return integrate_half_line(f, 0.0, breaks, opt);
}

double quantile_by_bisection(const PriorSpec& spec, double p) {
  double lo = spec.location - 1e6, hi = spec.location + 1e6;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(spec, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("density values at published parameterizations") {
  CHECK(density(PriorSpec::cauchy(0, 1), 0.0) ==
        doctest::Approx(1.0 / kPi).epsilon(1e-12));
  CHECK(density(PriorSpec::double_exponential(0, std::sqrt(2.0)), 0.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(density(PriorSpec::scaled_beta2(1, 1, 4), 0.0) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(density(PriorSpec::scaled_beta2(1, 1, 1), 1.0) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(density(PriorSpec::normal(0, 1), 0.0) ==
        doctest::Approx(1.0 / std::sqrt(2 * kPi)).epsilon(1e-12));

  CHECK_THROWS_AS(density(PriorSpec::scaled_beta2(1, 1, 1), -0.5),
                  std::domain_error);
  CHECK_THROWS_AS(
      density(PriorSpec::normal(0, 1), std::numeric_limits<double>::infinity()),
      std::domain_error);
}

TEST_CASE("densities integrate to one across families and parameters") {
  QuadratureOptions opt;
  opt.rel_tol = 1e-9;
  const PriorSpec real_line_specs[] = {
      PriorSpec::normal(-3.3, 0.51),
      PriorSpec::normal(2.0, 3.0),
      PriorSpec::double_exponential(-3.3, 0.71),
      PriorSpec::double_exponential(1.0, 2.5),
      PriorSpec::cauchy(-3.3, 0.35),
      PriorSpec::cauchy(4.0, 2.0),
      PriorSpec::cauchy_scale2_beta2(-1.0, 4.0),
      PriorSpec::cauchy_scale2_beta2(0.0, 1.0),
  };
  for (const auto& spec : real_line_specs) {
    const double breaks[] = {spec.location - spec.scale, spec.location,
                             spec.location + spec.scale};
    const double mass = integrate_real_line(
        [&](double t) { return density(spec, t); }, breaks, opt);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
  const PriorSpec half_line_specs[] = {
      PriorSpec::scaled_beta2(1, 1, 1),
      PriorSpec::scaled_beta2(1, 1, 4),
      PriorSpec::scaled_beta2(2, 3, 2),
      PriorSpec::scaled_beta2(0.5, 1.5, 1),
  };
  for (const auto& spec : half_line_specs) {
    const double breaks[] = {spec.scale};
    const double mass = integrate_half_line(
        [&](double t) { return density(spec, t); }, 0.0, breaks, opt);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
  // the pole-bearing marginal needs its singularity on a panel boundary
  for (double b : {1.0, 4.0}) {
    const double breaks[] = {-b, 0.0, b};
    const double mass = integrate_real_line(
        [&](double t) { return cauchy_scbeta2_density(t, b); }, breaks, opt);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("explicit horseshoe-type marginal: closed form") {
  // frozen high-precision references for the closed form
  CHECK(cauchy_scbeta2_density(1.0, 1.0) ==
        doctest::Approx((kPi - 2.0) / (4.0 * kPi)).epsilon(1e-13));
  CHECK(cauchy_scbeta2_density(0.5, 1.0) ==
        doctest::Approx(0.17125717912624023).epsilon(1e-13));
  CHECK(cauchy_scbeta2_density(2.0, 1.0) ==
        doctest::Approx(0.042814294781560057).epsilon(1e-13));
  CHECK(cauchy_scbeta2_density(1.0, 4.0) ==
        doctest::Approx(0.072080275978617389).epsilon(1e-13));
  CHECK(cauchy_scbeta2_density(7.5, 4.0) ==
        doctest::Approx(0.011536894697582713).epsilon(1e-13));
  CHECK(cauchy_scbeta2_density(0.01, 2.0) ==
        doctest::Approx(0.68653906827280645).epsilon(1e-13));

  SUBCASE("symmetry") {
    for (double th : {0.3, 2.0, 50.0}) {
      CHECK(cauchy_scbeta2_density(th, 1.0) ==
            doctest::Approx(cauchy_scbeta2_density(-th, 1.0)).epsilon(1e-15));
    }
  }
  SUBCASE("pole divergence toward the origin") {
    CHECK(cauchy_scbeta2_density(1e-6, 1.0) >
          cauchy_scbeta2_density(1e-3, 1.0));
    CHECK(std::isinf(cauchy_scbeta2_density(0.0, 1.0)));
  }
  SUBCASE("extreme arguments stay finite and ordered") {
    const double v_small = cauchy_scbeta2_density(1e-300, 1.0);
    CHECK(std::isfinite(v_small));
    CHECK(v_small > 0.0);
    double prev = cauchy_scbeta2_density(1e8, 1.0);
    for (double ex : {1e20, 1e100, 1e200, 1e300}) {
      const double v = cauchy_scbeta2_density(ex, 1.0);
      CHECK(std::isfinite(v));
      CHECK(v >= 0.0);
      // far enough out the true value drops below the subnormal range
      if (prev > 0.0) CHECK(v < prev);
      prev = v;
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(cauchy_scbeta2_density(1.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(cauchy_scbeta2_density(std::nan(""), 1.0),
                    std::domain_error);
  }
}

TEST_CASE("explicit marginal equals its scale-mixture integral") {
  for (double b : {1.0, 4.0}) {
    for (int i = 1; i <= 25; ++i) {
      const double theta = 0.08 * i * b;  // 50 probe points across both b
      const double closed = cauchy_scbeta2_density(theta, b);
      const double mixture = scbeta2_mixture(theta, b);
      CHECK(std::fabs(closed - mixture) < 1e-8);
    }
  }
}

TEST_CASE("horseshoe-type marginal asymptotics approach their laws") {
  // ratios tend to 1 like 1/log(theta); monotone approach is the contract
  double prev = std::numeric_limits<double>::infinity();
  for (double th : {1e3, 1e5, 1e7}) {
    const double ratio =
        std::log(th) / (kPi * th * th * cauchy_scbeta2_density(th, 1.0));
    CHECK(ratio > 1.0);
    CHECK(ratio < prev);
    prev = ratio;
  }
  double prev_pole = 0.0;
  for (double th : {1e-4, 1e-8, 1e-12}) {
    const double ratio =
        kPi * cauchy_scbeta2_density(th, 1.0) / std::log(1.0 / th);
    CHECK(ratio < 1.0);
    CHECK(ratio > prev_pole);
    prev_pole = ratio;
  }
}

TEST_CASE("finite-at-origin squared-scale marginal") {
  CHECK(cauchy_s2beta2_density(0.7, 0.7, 4.0) ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(4.0))).epsilon(1e-14));
  CHECK(std::isfinite(cauchy_s2beta2_density(0.0, 0.0, 1.0)));
  CHECK_THROWS_AS(cauchy_s2beta2_density(1.0, 0.0, 0.0), std::domain_error);

  SUBCASE("matches its generating mixture") {
    for (double th : {-6.0, -2.5, -0.5, 0.0, 0.4, 1.0, 3.0, 9.0}) {
      CHECK(std::fabs(cauchy_s2beta2_density(th, 0.0, 4.0) -
                      s2beta2_mixture(th, 0.0, 4.0)) < 1e-8);
    }
    CHECK(std::fabs(cauchy_s2beta2_density(2.0, 1.0, 2.0) -
                    s2beta2_mixture(2.0, 1.0, 2.0)) < 1e-8);
  }
  SUBCASE("unit mass, analytic after t = (theta-mu)/sqrt(b)") {
    QuadratureOptions opt;
    opt.rel_tol = 1e-10;
    const double breaks[] = {-2.0, 0.0, 2.0};
    const double mass = integrate_real_line(
        [](double t) { return cauchy_s2beta2_density(t, 0.0, 4.0); }, breaks,
        opt);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("quartile matching against the normal") {
  const double q75 = 0.67448975019608174;  // Phi^-1(0.75) reference
  CHECK(normal_quantile(0.75) == doctest::Approx(q75).epsilon(1e-12));
  CHECK(match_quartiles(1.0, PriorFamily::Cauchy) ==
        doctest::Approx(q75).epsilon(1e-10));
  CHECK(match_quartiles(1.0, PriorFamily::DoubleExponential) ==
        doctest::Approx(1.3761472010004752).epsilon(1e-10));
  CHECK_THROWS_AS(match_quartiles(0.0, PriorFamily::Cauchy), std::domain_error);
  CHECK_THROWS_AS(match_quartiles(1.0, PriorFamily::Normal),
                  std::invalid_argument);

  SUBCASE("matched scales reproduce the normal interquartile range") {
    for (double sigma0 : {0.5139857203590005, 1.0, 2.7}) {
      const double iqr_normal = 2.0 * sigma0 * q75;
      const auto de = PriorSpec::double_exponential(
          -1.0, match_quartiles(sigma0, PriorFamily::DoubleExponential));
      const auto ca = PriorSpec::cauchy(
          -1.0, match_quartiles(sigma0, PriorFamily::Cauchy));
      for (const auto& spec : {de, ca}) {
        const double iqr = quantile_by_bisection(spec, 0.75) -
                           quantile_by_bisection(spec, 0.25);
        CHECK(std::fabs(iqr - iqr_normal) < 1e-10);
      }
    }
  }
}

TEST_CASE("normal quantile agrees with the cdf to full precision") {
  for (double p : {1e-10, 1e-4, 0.01, 0.25, 0.5, 0.6744897501960817, 0.9,
                   0.999, 1.0 - 1e-10}) {
    const double z = normal_quantile(p);
    CHECK(std::fabs(normal_cdf(z) - p) < 1e-13 * std::max(p, 1.0 - p) + 1e-16);
  }
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
}

TEST_CASE("sampling matches the analytic distributions") {
  std::mt19937_64 rng(20110901);

  SUBCASE("normal mean under the CLT bound") {
    const auto draws = sample(PriorSpec::normal(0, 1), rng, 100000);
    double mean = 0.0;
    for (double d : draws) mean += d;
    mean /= static_cast<double>(draws.size());
    CHECK(std::fabs(mean) < 4.0 / std::sqrt(100000.0));
  }

  SUBCASE("scaled beta2 empirical cdf vs y/(y+b)") {
    auto draws = sample(PriorSpec::scaled_beta2(1, 1, 4), rng, 100000);
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
      const double emp_hi = static_cast<double>(i + 1) / draws.size();
      const double emp_lo = static_cast<double>(i) / draws.size();
      const double th = draws[i] / (draws[i] + 4.0);
      ks = std::max(ks, std::max(std::fabs(emp_hi - th), std::fabs(emp_lo - th)));
    }
    CHECK(ks < 0.01);
  }

  SUBCASE("two-stage mixture draws match the closed form (chi^2)") {
    const auto draws = sample(PriorSpec::cauchy_scaled_beta2(1.0), rng, 100000);
    // central bins only; the tails hold little mass and the pole is excluded
    const double edges[] = {-8, -4, -2, -1, -0.5, -0.25, 0.25, 0.5, 1, 2, 4, 8};
    const int n_bins = 11;
    std::vector<double> observed(n_bins, 0.0);
    for (double d : draws) {
      for (int bin = 0; bin < n_bins; ++bin) {
        if (d >= edges[bin] && d < edges[bin + 1]) {
          observed[bin] += 1.0;
          break;
        }
      }
    }
    QuadratureOptions opt;
    opt.rel_tol = 1e-10;
    double chi2 = 0.0;
    for (int bin = 0; bin < n_bins; ++bin) {
      std::vector<double> cuts{edges[bin], edges[bin + 1]};
      if (edges[bin] < 0.0 && edges[bin + 1] > 0.0) {
        cuts.insert(cuts.begin() + 1, 0.0);  // pole on a panel boundary
      }
      double mass = 0.0;
      for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        mass += integrate(
            [&](double t) { return cauchy_scbeta2_density(t, 1.0); }, cuts[s],
            cuts[s + 1], opt);
      }
      const double e = static_cast<double>(draws.size()) * mass;
      chi2 += (observed[bin] - e) * (observed[bin] - e) / e;
    }
    // 11 nearly independent Poisson cells: upper 1% of chi^2_11 is 24.72
    CHECK(chi2 < 24.72);
  }

  SUBCASE("deterministic given the seed") {
    std::mt19937_64 a(7), b(7);
    const auto d1 = sample(PriorSpec::cauchy(0, 1), a, 32);
    const auto d2 = sample(PriorSpec::cauchy(0, 1), b, 32);
    CHECK(d1 == d2);
  }

  SUBCASE("n must be positive") {
    std::mt19937_64 r(1);
    CHECK_THROWS_AS(sample(PriorSpec::normal(0, 1), r, 0),
                    std::invalid_argument);
  }
}
