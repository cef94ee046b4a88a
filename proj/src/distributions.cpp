#include "shrink/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace shrink {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}

double uniform01(std::mt19937_64& rng) {
  // 53-bit mantissa draw in (0,1); never returns 0 or 1 exactly
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

double sample_normal(std::mt19937_64& rng) {
  // Box-Muller; one draw per pair keeps the stream layout obvious
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

double sample_gamma(std::mt19937_64& rng, double shape) {
  // Marsaglia-Tsang squeeze, boosted for shape < 1
  if (shape < 1.0) {
    const double u = uniform01(rng);
    return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double z = sample_normal(rng);
    double v = 1.0 + c * z;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform01(rng);
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) {
      return d * v;
    }
  }
}

double scb2_log_norm(double p, double q) {
  return std::lgamma(p + q) - std::lgamma(p) - std::lgamma(q);
}

}  // namespace

PriorSpec PriorSpec::normal(double location, double sigma) {
  require(sigma > 0.0, "Normal: scale must be positive");
  return {PriorFamily::Normal, location, sigma};
}

PriorSpec PriorSpec::double_exponential(double location, double nu) {
  require(nu > 0.0, "DoubleExponential: scale must be positive");
  return {PriorFamily::DoubleExponential, location, nu};
}

PriorSpec PriorSpec::cauchy(double location, double gamma) {
  require(gamma > 0.0, "Cauchy: scale must be positive");
  return {PriorFamily::Cauchy, location, gamma};
}

PriorSpec PriorSpec::scaled_beta2(double p, double q, double b) {
  require(p > 0.0 && q > 0.0, "ScaledBeta2: shapes must be positive");
  require(b > 0.0, "ScaledBeta2: scale must be positive");
  return {PriorFamily::ScaledBeta2, 0.0, b, p, q};
}

PriorSpec PriorSpec::cauchy_scaled_beta2(double b, double location) {
  require(b > 0.0, "CauchyScaledBeta2: scale must be positive");
  return {PriorFamily::CauchyScaledBeta2, location, b};
}

PriorSpec PriorSpec::cauchy_scale2_beta2(double location, double b) {
  require(b > 0.0, "CauchyScale2Beta2: scale must be positive");
  return {PriorFamily::CauchyScale2Beta2, location, b};
}

double density(const PriorSpec& spec, double t) {
  require(std::isfinite(t), "density: point must be finite");
  require(spec.scale > 0.0, "density: scale must be positive");
  switch (spec.family) {
    case PriorFamily::Normal: {
      const double z = (t - spec.location) / spec.scale;
      return std::exp(-0.5 * z * z) / (spec.scale * std::sqrt(2.0 * kPi));
    }
    case PriorFamily::DoubleExponential: {
      const double nu = spec.scale;
      return std::exp(-std::sqrt(2.0) * std::fabs(t - spec.location) / nu) /
             (nu * std::sqrt(2.0));
    }
    case PriorFamily::Cauchy: {
      const double z = (t - spec.location) / spec.scale;
      return 1.0 / (kPi * spec.scale * (1.0 + z * z));
    }
    case PriorFamily::ScaledBeta2: {
      require(t >= 0.0, "ScaledBeta2: support is t >= 0");
      const double b = spec.scale, p = spec.shape_p, q = spec.shape_q;
      if (t == 0.0) {
        // boundary limit: finite only for p >= 1
        if (p > 1.0) return 0.0;
        if (p == 1.0) return std::exp(scb2_log_norm(p, q)) / b;
        return kInf;
      }
      const double logf = scb2_log_norm(p, q) - std::log(b) +
                          (p - 1.0) * std::log(t / b) -
                          (p + q) * std::log1p(t / b);
      return std::exp(logf);
    }
    case PriorFamily::CauchyScaledBeta2:
      return cauchy_scbeta2_density(t - spec.location, spec.scale);
    case PriorFamily::CauchyScale2Beta2:
      return cauchy_s2beta2_density(t, spec.location, spec.scale);
  }
  throw std::logic_error("density: unknown family");
}

double log_density(const PriorSpec& spec, double t) {
  switch (spec.family) {
    case PriorFamily::Normal: {
      const double z = (t - spec.location) / spec.scale;
      return -0.5 * z * z - std::log(spec.scale) - 0.5 * std::log(2.0 * kPi);
    }
    case PriorFamily::DoubleExponential: {
      const double nu = spec.scale;
      return -std::sqrt(2.0) * std::fabs(t - spec.location) / nu -
             std::log(nu * std::sqrt(2.0));
    }
    case PriorFamily::Cauchy: {
      const double z = (t - spec.location) / spec.scale;
      return -std::log1p(z * z) - std::log(kPi * spec.scale);
    }
    case PriorFamily::ScaledBeta2: {
      if (t <= 0.0) return -kInf;
      const double b = spec.scale, p = spec.shape_p, q = spec.shape_q;
      return scb2_log_norm(p, q) - std::log(b) + (p - 1.0) * std::log(t / b) -
             (p + q) * std::log1p(t / b);
    }
    case PriorFamily::CauchyScaledBeta2:
      return std::log(cauchy_scbeta2_density(t - spec.location, spec.scale));
    case PriorFamily::CauchyScale2Beta2:
      return std::log(cauchy_s2beta2_density(t, spec.location, spec.scale));
  }
  throw std::logic_error("log_density: unknown family");
}

double cdf(const PriorSpec& spec, double t) {
  switch (spec.family) {
    case PriorFamily::Normal:
      return normal_cdf((t - spec.location) / spec.scale);
    case PriorFamily::DoubleExponential: {
      const double z = std::sqrt(2.0) * (t - spec.location) / spec.scale;
      return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    }
    case PriorFamily::Cauchy:
      return 0.5 + std::atan((t - spec.location) / spec.scale) / kPi;
    case PriorFamily::ScaledBeta2: {
      if (spec.shape_p != 1.0 || spec.shape_q != 1.0) {
        throw std::invalid_argument(
            "cdf: ScaledBeta2 CDF implemented for p = q = 1 only");
      }
      if (t <= 0.0) return 0.0;
      return t / (t + spec.scale);
    }
    default:
      throw std::invalid_argument("cdf: no closed form for this family");
  }
}

double cauchy_scbeta2_density(double theta, double b) {
  require(b > 0.0, "cauchy_scbeta2_density: b must be positive");
  require(!std::isnan(theta), "cauchy_scbeta2_density: theta must not be NaN");
  const double t = std::fabs(theta);
  if (t / b < 1e-300) {
    // integrable log pole at the origin
    return kInf;
  }
  const double L = std::log(t / b);
  if (t <= b) {
    // direct form: no cancellation on this side, all terms O(b^2)
    const double bracket =
        -(b * b + t * t - kPi * b * t) + (b * b - t * t) * (-L);
    const double s = b * b + t * t;
    return b * bracket / (kPi * s * s);
  }
  // |theta| > b: divide the bracket by theta^4 term-by-term so that the
  // theta^2 * log(theta) growth never overflows and sub-terms stay scaled
  const double r = 1.0 / t;          // <= 1/b
  const double u = b * r;            // <= 1
  const double denom = (1.0 + u * u) * (1.0 + u * u);
  const double bracket_over_t4 =
      (L - 1.0) * r * r + kPi * b * r * r * r - b * b * (1.0 + L) * (r * r) * (r * r);
  return b * bracket_over_t4 / (kPi * denom);
}

double cauchy_s2beta2_density(double theta, double mu, double b) {
  require(b > 0.0, "cauchy_s2beta2_density: b must be positive");
  const double rb = std::sqrt(b);
  const double z = 1.0 + std::fabs(theta - mu) / rb;
  return 1.0 / (2.0 * rb * z * z);
}

double match_quartiles(double sigma0, PriorFamily family) {
  require(sigma0 > 0.0, "match_quartiles: sigma0 must be positive");
  const double q75 = normal_quantile(0.75);
  switch (family) {
    case PriorFamily::DoubleExponential:
      return std::sqrt(2.0) * sigma0 * q75 / std::log(2.0);
    case PriorFamily::Cauchy:
      return sigma0 * q75;
    default:
      throw std::invalid_argument(
          "match_quartiles: only DoubleExponential and Cauchy scales are "
          "quartile-matched");
  }
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, "normal_quantile: p must be in (0,1)");
  // Acklam's rational approximation (|rel err| < 1.15e-9), then one Halley
  // refinement against the erfc-based CDF.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double bb[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((bb[0] * r + bb[1]) * r + bb[2]) * r + bb[3]) * r + bb[4]) * r +
         1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

std::vector<double> sample(const PriorSpec& spec, std::mt19937_64& rng,
                           std::size_t n) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (spec.family) {
      case PriorFamily::Normal:
        out.push_back(spec.location + spec.scale * sample_normal(rng));
        break;
      case PriorFamily::DoubleExponential: {
        const double u = uniform01(rng) - 0.5;
        const double z = -std::copysign(std::log1p(-2.0 * std::fabs(u)), -u);
        out.push_back(spec.location + spec.scale * z / std::sqrt(2.0));
        break;
      }
      case PriorFamily::Cauchy:
        out.push_back(spec.location +
                      spec.scale * std::tan(kPi * (uniform01(rng) - 0.5)));
        break;
      case PriorFamily::ScaledBeta2: {
        // b * X/(1-X) with X ~ Beta(p,q), via the two-gamma construction
        const double g1 = sample_gamma(rng, spec.shape_p);
        const double g2 = sample_gamma(rng, spec.shape_q);
        out.push_back(spec.scale * g1 / g2);
        break;
      }
      case PriorFamily::CauchyScaledBeta2: {
        const double g1 = sample_gamma(rng, 1.0);
        const double g2 = sample_gamma(rng, 1.0);
        const double sigma = spec.scale * g1 / g2;
        out.push_back(spec.location +
                      sigma * std::tan(kPi * (uniform01(rng) - 0.5)));
        break;
      }
      case PriorFamily::CauchyScale2Beta2: {
        const double g1 = sample_gamma(rng, 1.0);
        const double g2 = sample_gamma(rng, 1.0);
        const double sigma = std::sqrt(spec.scale * g1 / g2);
        out.push_back(spec.location +
                      sigma * std::tan(kPi * (uniform01(rng) - 0.5)));
        break;
      }
    }
  }
  return out;
}

}  // namespace shrink
