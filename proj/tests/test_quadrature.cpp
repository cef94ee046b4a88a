#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "shrink/quadrature.hpp"

using namespace shrink;

TEST_CASE("finite-interval panels hit analytic integrals") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0,
                  std::numbers::pi) == doctest::Approx(2.0).epsilon(1e-12));
  // integrable log singularity at the left endpoint
  CHECK(integrate([](double x) { return std::log(1.0 / x); }, 0.0, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("real-line map integrates densities to one") {
  const double breaks[] = {0.0};
  CHECK(integrate_real_line(
            [](double x) {
              return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
            },
            breaks) == doctest::Approx(1.0).epsilon(1e-10));
  const double breaks2[] = {-3.0, 5.0};
  CHECK(integrate_real_line(
            [](double x) {
              return 1.0 / (std::numbers::pi * (1.0 + (x - 5.0) * (x - 5.0)));
            },
            breaks2) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("non-convergent integrand raises with achieved tolerance") {
  const double breaks[] = {0.0};
  // exp(|x|) against a Cauchy tail: divergent weighted expectation
  CHECK_THROWS_AS(integrate_real_line(
                      [](double x) {
                        return std::exp(std::fabs(x)) / (1.0 + x * x);
                      },
                      breaks),
                  QuadratureError);
}

TEST_CASE("doubling the interval budget leaves converged results unchanged") {
  auto bump = [](double x) {
    return std::exp(-std::fabs(x)) * (1.0 + std::sin(3.0 * x));
  };
  const double breaks[] = {0.0};
  QuadratureOptions base;
  QuadratureOptions doubled;
  doubled.max_intervals = base.max_intervals * 2;
  const double a = integrate_real_line(bump, breaks, base);
  const double b = integrate_real_line(bump, breaks, doubled);
  CHECK(std::fabs(a - b) <= 1e-9 * std::fabs(a));
}
