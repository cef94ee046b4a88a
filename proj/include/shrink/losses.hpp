#pragma once

#include <functional>

namespace shrink {

enum class LossKind { SquareLoss, ExponentialWeight, CauchyOverGaussian };

/// Weighted square loss w(theta) * (theta - delta)^2, anchored at the group
/// location M. The Cauchy-over-Gaussian weight is Cauchy(theta|M,1) over
/// Normal(theta|M, gaussian_var) with the 2.19 variance that equates the
/// two interquartile ranges.
struct WeightedLossSpec {
  LossKind kind = LossKind::SquareLoss;
  double anchor_m = 0.0;
  double rate_r = 1.0;
  double gaussian_var = 2.19;

  static WeightedLossSpec square();
  static WeightedLossSpec exponential(double anchor_m, double rate_r);
  static WeightedLossSpec cauchy_over_gaussian(double anchor_m,
                                               double gaussian_var = 2.19);
};

double weight(const WeightedLossSpec& spec, double theta);
double log_weight(const WeightedLossSpec& spec, double theta);
double loss(const WeightedLossSpec& spec, double theta, double delta);

/// Optimal Bayes estimate E[w(theta) theta | data] / E[w(theta) | data]
/// under the weighted square loss, by adaptive quadrature over the
/// posterior. Takes the log posterior density (expectations against
/// exponential weights are formed in log space) plus a center hint used,
/// with the anchor, to align integration panels. Throws QuadratureError
/// when the weighted integrals fail to converge (e.g. an exponential
/// weight against a heavy-tailed posterior).
double optimal_estimate(const WeightedLossSpec& spec,
                        const std::function<double(double)>& log_posterior,
                        double posterior_center);

/// Closed form of the exponentially weighted loss estimator for a Normal
/// posterior with mean mu1 and variance v; the weight anchor is m and the
/// tilt rate r. Evaluated with the shared exp(v r^2 / 2) factor cancelled
/// so only the final ratio can overflow.
double exp_loss_estimator(double mu1, double v, double m, double r);

}  // namespace shrink
