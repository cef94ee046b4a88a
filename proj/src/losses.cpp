#include "shrink/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "shrink/distributions.hpp"
#include "shrink/quadrature.hpp"

namespace shrink {

namespace {
constexpr double kPi = std::numbers::pi;
}

WeightedLossSpec WeightedLossSpec::square() { return {LossKind::SquareLoss}; }

WeightedLossSpec WeightedLossSpec::exponential(double anchor_m, double rate_r) {
  if (rate_r <= 0.0) throw std::domain_error("exponential weight: r must be > 0");
  return {LossKind::ExponentialWeight, anchor_m, rate_r};
}

WeightedLossSpec WeightedLossSpec::cauchy_over_gaussian(double anchor_m,
                                                        double gaussian_var) {
  if (gaussian_var <= 0.0)
    throw std::domain_error("cauchy_over_gaussian: variance must be > 0");
  return {LossKind::CauchyOverGaussian, anchor_m, 1.0, gaussian_var};
}

double log_weight(const WeightedLossSpec& spec, double theta) {
  switch (spec.kind) {
    case LossKind::SquareLoss:
      return 0.0;
    case LossKind::ExponentialWeight:
      return spec.rate_r * std::fabs(theta - spec.anchor_m);
    case LossKind::CauchyOverGaussian: {
      const double d = theta - spec.anchor_m;
      const double log_cauchy = -std::log(kPi) - std::log1p(d * d);
      const double log_gauss = -0.5 * std::log(2.0 * kPi * spec.gaussian_var) -
                               0.5 * d * d / spec.gaussian_var;
      return log_cauchy - log_gauss;
    }
  }
  throw std::logic_error("log_weight: unknown kind");
}

double weight(const WeightedLossSpec& spec, double theta) {
  return std::exp(log_weight(spec, theta));
}

double loss(const WeightedLossSpec& spec, double theta, double delta) {
  const double e = theta - delta;
  return weight(spec, theta) * e * e;
}

double optimal_estimate(const WeightedLossSpec& spec,
                        const std::function<double(double)>& log_posterior,
                        double posterior_center) {
  const double cuts[] = {std::min(spec.anchor_m, posterior_center),
                         std::max(spec.anchor_m, posterior_center)};
  // shared offset keeps exp() in range; it cancels in the ratio
  const double log_scale =
      log_weight(spec, posterior_center) + log_posterior(posterior_center);
  auto weighted = [&](double th) {
    return std::exp(log_weight(spec, th) + log_posterior(th) - log_scale);
  };
  const double denom = integrate_real_line(weighted, cuts);
  const double numer = integrate_real_line(
      [&](double th) { return th * weighted(th); }, cuts);
  if (!(std::isfinite(denom) && std::isfinite(numer)) || denom <= 0.0) {
    throw QuadratureError("optimal_estimate: weighted posterior integral diverged",
                          std::numeric_limits<double>::infinity());
  }
  return numer / denom;
}

double exp_loss_estimator(double mu1, double v, double m, double r) {
  if (v <= 0.0) throw std::domain_error("exp_loss_estimator: v must be > 0");
  if (r <= 0.0) throw std::domain_error("exp_loss_estimator: r must be > 0");
  const double sv = std::sqrt(v);
  // tilted-normal pieces; exp(v r^2/2) is common to both sides and cancels
  const double la = r * (m - mu1);
  const double lap = r * (mu1 - m);
  const double zb = (m - (mu1 - r * v)) / sv;
  const double zbp = (m - (mu1 + r * v)) / sv;
  const double b = normal_cdf(zb);
  const double bp = normal_cdf(zbp);
  auto phi = [](double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
  };
  const double c = sv * phi(zb);
  const double cp = sv * phi(zbp);
  const double shift = std::max(la, lap);
  const double a = std::exp(la - shift);
  const double ap = std::exp(lap - shift);
  const double numer = a * (b * (mu1 - r * v) - c) +
                       ap * (cp + (1.0 - bp) * (mu1 + r * v));
  const double denom = a * b + ap * (1.0 - bp);
  return numer / denom;
}

}  // namespace shrink
