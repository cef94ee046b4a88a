#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "shrink/dataset.hpp"
#include "shrink/distributions.hpp"
#include "shrink/model_result.hpp"

namespace shrink {

class DegenerateVarianceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Empirical-Bayes fit of the group location and prior variance on the
/// transformed scale. shrink_c = (k-3)/sum((x-xbar)^2) is the fixed
/// shrinkage proportion 1/(1+sigma0_sq); tau = 1/sigma0_sq.
struct HyperParams {
  double m = 0.0;
  double sigma0_sq = 1.0;
  double tau = 1.0;
  double shrink_c = 0.5;
};

HyperParams fit_empirical_hyperparams(std::span<const double> xs);

/// A one-observation posterior: Normal(x | mu, 1) likelihood against a
/// proper prior on mu.
struct PosteriorProblem {
  double x = 0.0;
  PriorSpec prior;
};

/// Conjugate shrinkage: x + shrink_c (m - x).
double posterior_mean_normal(double x, const HyperParams& hp);

/// E[mu | x] by adaptive quadrature (relative tolerance 1e-9). Panels are
/// split at the observation, the prior location, and any prior pole.
double posterior_mean_quadrature(const PosteriorProblem& problem);

/// E[g(mu) | x] for bounded g, same engine and panel layout.
double posterior_expectation(const PosteriorProblem& problem,
                             const std::function<double(double)>& g);

/// Options for the empirical-Bayes model columns.
struct EbOptions {
  /// Prior center on the batting-average scale; empirical fit when absent.
  std::optional<double> prior_center_avg;
  double n_at_bats = 45.0;
};

/// Model 1: Normal prior at the EB fit. Model 2: quartile-matched double
/// exponential. Model 3: quartile-matched Cauchy. Predictions are the
/// posterior expectations of the back-transformed average.
ModelResult predict_eb_model(int model_id,
                             std::span<const PlayerRecord> players,
                             const EbOptions& options = {});

/// Baseline columns of the prediction table.
ModelResult predict_mle(std::span<const PlayerRecord> players);
ModelResult predict_grand_mean(std::span<const PlayerRecord> players);

/// Mean squared prediction error against the remainder-of-season averages.
double mse(std::span<const double> predictions,
           std::span<const PlayerRecord> players);

}  // namespace shrink
