#include "shrink/posterior_eb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "shrink/quadrature.hpp"

namespace shrink {

namespace {

std::vector<double> posterior_breakpoints(const PosteriorProblem& problem) {
  std::vector<double> cuts{problem.x, problem.prior.location};
  if (problem.prior.family == PriorFamily::CauchyScaledBeta2) {
    // integrable log pole at the prior location
    cuts.push_back(problem.prior.location);
  }
  if (problem.prior.family == PriorFamily::ScaledBeta2) {
    cuts.push_back(0.0);  // support boundary
  }
  return cuts;
}

double posterior_ratio(const PosteriorProblem& problem,
                       const std::function<double(double)>& numerator_factor) {
  const auto cuts = posterior_breakpoints(problem);
  const double x = problem.x;
  const double loc = problem.prior.location;
  auto log_integrand = [&](double mu) {
    return -0.5 * (x - mu) * (x - mu) + log_density(problem.prior, mu);
  };
  // scale by the largest integrand value among a few representative points
  // (keeps the exponentials in range under strong likelihood/prior conflict)
  double log_scale = -std::numeric_limits<double>::infinity();
  for (double mu : {x, 0.5 * (x + loc), loc + 1.0, loc - 1.0}) {
    const double v = log_integrand(mu);
    if (std::isfinite(v)) log_scale = std::max(log_scale, v);
  }
  if (!std::isfinite(log_scale)) log_scale = 0.0;
  auto f = [&](double mu) { return std::exp(log_integrand(mu) - log_scale); };
  const double denom = integrate_real_line(f, cuts);
  const double numer = integrate_real_line(
      [&](double mu) { return numerator_factor(mu) * f(mu); }, cuts);
  return numer / denom;
}

}  // namespace

HyperParams fit_empirical_hyperparams(std::span<const double> xs) {
  const std::size_t k = xs.size();
  if (k < 4) {
    throw InsufficientDataError(
        "fit_empirical_hyperparams: need at least 4 observations, got " +
        std::to_string(k));
  }
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) /
                      static_cast<double>(k);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double km3 = static_cast<double>(k) - 3.0;
  if (ss <= km3) {
    throw DegenerateVarianceError(
        "fit_empirical_hyperparams: sum of squares " + std::to_string(ss) +
        " <= k-3, implied prior variance is not positive");
  }
  HyperParams hp;
  hp.m = mean;
  hp.shrink_c = km3 / ss;
  hp.sigma0_sq = 1.0 / hp.shrink_c - 1.0;
  hp.tau = 1.0 / hp.sigma0_sq;
  return hp;
}

double posterior_mean_normal(double x, const HyperParams& hp) {
  return x + hp.shrink_c * (hp.m - x);
}

double posterior_mean_quadrature(const PosteriorProblem& problem) {
  return posterior_ratio(problem, [](double mu) { return mu; });
}

double posterior_expectation(const PosteriorProblem& problem,
                             const std::function<double(double)>& g) {
  return posterior_ratio(problem, g);
}

ModelResult predict_eb_model(int model_id,
                             std::span<const PlayerRecord> players,
                             const EbOptions& options) {
  if (model_id < 1 || model_id > 3) {
    throw std::invalid_argument("predict_eb_model: model_id must be 1, 2 or 3");
  }
  const auto xs = transformed_scores(players, options.n_at_bats);
  const HyperParams hp = fit_empirical_hyperparams(xs);
  const double sigma0 = std::sqrt(hp.sigma0_sq);
  const double center =
      options.prior_center_avg
          ? arcsine_transform(
                refine_proportion(*options.prior_center_avg, options.n_at_bats),
                options.n_at_bats)
          : hp.m;

  PriorSpec prior;
  switch (model_id) {
    case 1:
      prior = PriorSpec::normal(center, sigma0);
      break;
    case 2:
      prior = PriorSpec::double_exponential(
          center, match_quartiles(sigma0, PriorFamily::DoubleExponential));
      break;
    default:
      prior = PriorSpec::cauchy(center,
                                match_quartiles(sigma0, PriorFamily::Cauchy));
      break;
  }

  ModelResult result;
  result.model_id = std::to_string(model_id);
  auto back = [&](double mu) { return inverse_transform(mu, options.n_at_bats); };
  std::vector<double> preds;
  preds.reserve(players.size());
  for (std::size_t i = 0; i < players.size(); ++i) {
    const PosteriorProblem problem{xs[i], prior};
    const double estimate = posterior_expectation(problem, back);
    preds.push_back(estimate);
    result.predictions.push_back({players[i].name, estimate});
  }
  result.mse = mse(preds, players);
  result.config["model"] = result.model_id;
  result.config["prior_center"] =
      options.prior_center_avg
          ? nlohmann::ordered_json(*options.prior_center_avg)
          : nlohmann::ordered_json("empirical");
  result.config["hyperparams"] = {{"m", hp.m},
                                  {"sigma0_sq", hp.sigma0_sq},
                                  {"tau", hp.tau},
                                  {"shrink_c", hp.shrink_c}};
  return result;
}

ModelResult predict_mle(std::span<const PlayerRecord> players) {
  ModelResult result;
  result.model_id = "mle";
  std::vector<double> preds;
  for (const auto& p : players) {
    const double est = refine_proportion(p.y45);
    preds.push_back(est);
    result.predictions.push_back({p.name, est});
  }
  result.mse = mse(preds, players);
  result.config["model"] = "mle";
  return result;
}

ModelResult predict_grand_mean(std::span<const PlayerRecord> players) {
  ModelResult result;
  result.model_id = "mean";
  double total = 0.0;
  for (const auto& p : players) total += refine_proportion(p.y45);
  const double grand = total / static_cast<double>(players.size());
  std::vector<double> preds(players.size(), grand);
  for (const auto& p : players) result.predictions.push_back({p.name, grand});
  result.mse = mse(preds, players);
  result.config["model"] = "mean";
  return result;
}

double mse(std::span<const double> predictions,
           std::span<const PlayerRecord> players) {
  if (predictions.size() != players.size()) {
    throw std::invalid_argument("mse: prediction/player count mismatch (" +
                                std::to_string(predictions.size()) + " vs " +
                                std::to_string(players.size()) + ")");
  }
  if (players.empty()) throw std::invalid_argument("mse: empty inputs");
  double total = 0.0;
  for (std::size_t i = 0; i < players.size(); ++i) {
    const double e = predictions[i] - players[i].remainder_avg;
    total += e * e;
  }
  return total / static_cast<double>(players.size());
}

}  // namespace shrink
