#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace shrink {

struct PlayerPrediction {
  std::string player;
  double estimate = 0.0;
};

/// Summary attached to stochastic model runs.
struct DiagnosticsSummary {
  double max_split_rhat = 0.0;
  double min_ess = 0.0;
  bool reliable = true;
  std::vector<std::string> warnings;
};

/// Per-player predicted batting averages plus the prediction MSE for one
/// model column (baselines "mle" / "mean", empirical Bayes "1".."3", or
/// full Bayes "4".."7").
struct ModelResult {
  std::string model_id;
  std::vector<PlayerPrediction> predictions;
  double mse = 0.0;
  std::optional<DiagnosticsSummary> diagnostics;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
  static ModelResult from_json(const nlohmann::ordered_json& j);
};

}  // namespace shrink
