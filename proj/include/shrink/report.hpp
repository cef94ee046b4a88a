#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "shrink/dataset.hpp"
#include "shrink/model_result.hpp"
#include "shrink/posterior_eb.hpp"

namespace shrink {

class IncompleteReportError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The full prediction table: per-player observed remainder average, MLE,
/// grand mean and the seven model columns, with the MSE footer (x 1e3) and
/// the ratio row against Model 1.
struct Table2Report {
  std::vector<std::string> players;
  std::vector<std::string> columns;  // "remainder_avg", "mle", "mean", "1".."7"
  std::vector<std::vector<double>> cells;  // cells[col][player]
  std::vector<double> mse_x1000;           // per column, skipping remainder_avg
  std::vector<double> ratio_percent;       // against Model 1

  void to_csv(std::ostream& out) const;
  nlohmann::ordered_json to_json() const;
};

/// Assembles the table from the baseline and model results, ordered as the
/// roster. Throws IncompleteReportError naming any absent column.
Table2Report build_table2(std::span<const PlayerRecord> players,
                          const std::map<std::string, ModelResult>& results);

/// One figure's worth of plottable series: a shared x column plus named y
/// columns. Points dropped at documented poles are recorded in `omitted`.
struct FigureSeries {
  int figure_id = 0;
  std::string x_label;
  std::vector<double> x;
  std::vector<std::string> names;            // y series names
  std::vector<std::vector<double>> series;   // series[i] aligned with x
  std::vector<double> omitted;               // x positions skipped at poles

  void to_csv(std::ostream& out) const;
};

struct FigureParams {
  std::span<const PlayerRecord> players;
  double scbeta_b = 4.0;
  /// Models needed by figure 5 (keys "1", "3", "4", "7"); unused elsewhere.
  const std::map<std::string, ModelResult>* results = nullptr;
};

/// Data series for the five report figures:
///  1: quadratic vs Cauchy-over-Gaussian loss on a theta grid (delta = M)
///  2: prior-location sweep of x - E[mu|x] for the three priors
///  3: posterior means across the observed transformed scores
///  4: density comparison including the explicit horseshoe-type form
///  5: observed/MLE/model predictions per player
FigureSeries figure_series(int figure_id, const FigureParams& params);

}  // namespace shrink
