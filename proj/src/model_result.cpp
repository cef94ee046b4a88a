#include "shrink/model_result.hpp"

namespace shrink {

nlohmann::ordered_json ModelResult::to_json() const {
  nlohmann::ordered_json j;
  j["model_id"] = model_id;
  auto preds = nlohmann::ordered_json::array();
  for (const auto& p : predictions) {
    preds.push_back({{"player", p.player}, {"estimate", p.estimate}});
  }
  j["predictions"] = std::move(preds);
  j["mse"] = mse;
  if (diagnostics) {
    j["diagnostics_summary"] = {{"max_split_rhat", diagnostics->max_split_rhat},
                                {"min_ess", diagnostics->min_ess},
                                {"reliable", diagnostics->reliable},
                                {"warnings", diagnostics->warnings}};
  }
  j["config"] = config;
  return j;
}

ModelResult ModelResult::from_json(const nlohmann::ordered_json& j) {
  ModelResult r;
  r.model_id = j.at("model_id").get<std::string>();
  for (const auto& p : j.at("predictions")) {
    r.predictions.push_back({p.at("player").get<std::string>(),
                             p.at("estimate").get<double>()});
  }
  r.mse = j.at("mse").get<double>();
  if (j.contains("diagnostics_summary")) {
    DiagnosticsSummary d;
    const auto& dj = j.at("diagnostics_summary");
    d.max_split_rhat = dj.at("max_split_rhat").get<double>();
    d.min_ess = dj.at("min_ess").get<double>();
    d.reliable = dj.at("reliable").get<bool>();
    d.warnings = dj.at("warnings").get<std::vector<std::string>>();
    r.diagnostics = d;
  }
  if (j.contains("config")) r.config = j.at("config");
  return r;
}

}  // namespace shrink
