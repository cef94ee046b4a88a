#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace shrink {

enum class PriorFamily {
  Normal,
  DoubleExponential,
  Cauchy,
  ScaledBeta2,
  CauchyScaledBeta2,
  CauchyScale2Beta2,
};

/// Parameterizations follow the source models:
///  - Normal(location, scale)        with scale = standard deviation sigma0
///  - DE(location, scale)            density 1/(scale*sqrt(2)) exp(-sqrt(2)|t-loc|/scale)
///  - Cauchy(location, scale)
///  - ScaledBeta2(shape_p, shape_q, scale=b), support t > 0
///  - CauchyScaledBeta2(location, scale=b): Cauchy location mixed over a
///    ScBeta2(1,1,b) scale; log pole at the location
///  - CauchyScale2Beta2(location, scale=b): Cauchy location mixed over a
///    ScBeta2(1,1,b) squared scale; finite everywhere
struct PriorSpec {
  PriorFamily family = PriorFamily::Normal;
  double location = 0.0;
  double scale = 1.0;
  double shape_p = 1.0;
  double shape_q = 1.0;

  static PriorSpec normal(double location, double sigma);
  static PriorSpec double_exponential(double location, double nu);
  static PriorSpec cauchy(double location, double gamma);
  static PriorSpec scaled_beta2(double p, double q, double b);
  static PriorSpec cauchy_scaled_beta2(double b, double location = 0.0);
  static PriorSpec cauchy_scale2_beta2(double location, double b);
};

/// Probability density of `spec` at t. Throws std::domain_error for
/// non-finite t or t outside the family's support.
double density(const PriorSpec& spec, double t);

/// Log density; -infinity outside the support instead of throwing
/// (random-walk samplers step outside supports routinely).
double log_density(const PriorSpec& spec, double t);

/// CDF for the analytically tractable families (Normal, DE, Cauchy, and
/// ScaledBeta2 with p = q = 1).
double cdf(const PriorSpec& spec, double t);

/// Marginal density of a Cauchy(0,sigma) location mixed over
/// sigma ~ ScBeta2(1,1,b): the explicit horseshoe-type closed form.
/// Unbounded (log pole) as theta -> 0; returns +infinity at theta = 0.
double cauchy_scbeta2_density(double theta, double b);

/// Marginal density of a Cauchy(mu,sigma) location mixed over
/// sigma^2 ~ ScBeta2(1,1,b). Finite everywhere:
/// 1 / (2 sqrt(b) (1 + |theta-mu|/sqrt(b))^2).
double cauchy_s2beta2_density(double theta, double mu, double b);

/// Scale that equates the interquartile range with a Normal(., sigma0^2)
/// prior: nu0 for the double exponential, gamma0 for the Cauchy.
double match_quartiles(double sigma0, PriorFamily family);

/// Standard normal CDF and quantile. The quantile is a rational
/// approximation polished with one Halley step of the erfc-based CDF.
double normal_cdf(double z);
double normal_quantile(double p);

/// i.i.d. draws, deterministic for a given engine state. All inverse-CDF /
/// transform based so the stream is identical across platforms.
std::vector<double> sample(const PriorSpec& spec, std::mt19937_64& rng,
                           std::size_t n);

}  // namespace shrink
