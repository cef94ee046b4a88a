#include "shrink/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "shrink/losses.hpp"

namespace shrink {

namespace {

void write_value(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

const ModelResult& require_column(const std::map<std::string, ModelResult>& m,
                                  const std::string& key,
                                  std::vector<std::string>& missing) {
  static const ModelResult empty{};
  auto it = m.find(key);
  if (it == m.end()) {
    missing.push_back(key);
    return empty;
  }
  return it->second;
}

std::vector<double> grid(double lo, double hi, double step) {
  // index around zero so that a grid crossing the origin hits 0.0 exactly
  const long long k0 = std::llround(lo / step);
  const long long k1 = std::llround(hi / step);
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(k1 - k0 + 1));
  for (long long k = k0; k <= k1; ++k) g.push_back(static_cast<double>(k) * step);
  return g;
}

}  // namespace

Table2Report build_table2(std::span<const PlayerRecord> players,
                          const std::map<std::string, ModelResult>& results) {
  static const std::vector<std::string> kModelCols = {
      "mle", "mean", "1", "2", "3", "4", "5", "6", "7"};
  std::vector<std::string> missing;
  for (const auto& key : kModelCols) require_column(results, key, missing);
  if (!missing.empty()) {
    std::string msg = "build_table2: missing model results:";
    for (const auto& k : missing) msg += " " + k;
    throw IncompleteReportError(msg);
  }

  Table2Report table;
  for (const auto& p : players) table.players.push_back(p.name);
  table.columns.push_back("remainder_avg");
  std::vector<double> observed;
  for (const auto& p : players) observed.push_back(p.remainder_avg);
  table.cells.push_back(std::move(observed));

  for (const auto& key : kModelCols) {
    const ModelResult& r = results.at(key);
    if (r.predictions.size() != players.size()) {
      throw IncompleteReportError("build_table2: column '" + key +
                                  "' has wrong roster size");
    }
    std::vector<double> col;
    col.reserve(players.size());
    for (const auto& pred : r.predictions) col.push_back(pred.estimate);
    table.columns.push_back(key);
    table.cells.push_back(std::move(col));
    table.mse_x1000.push_back(r.mse * 1e3);
  }
  const double mse1 = results.at("1").mse;
  for (const auto& key : kModelCols) {
    table.ratio_percent.push_back(100.0 * results.at(key).mse / mse1);
  }
  return table;
}

void Table2Report::to_csv(std::ostream& out) const {
  out << "player";
  for (const auto& c : columns) {
    out << ',' << (c.size() == 1 ? "model_" + c : c);
  }
  out << '\n';
  for (std::size_t i = 0; i < players.size(); ++i) {
    out << players[i];
    for (const auto& col : cells) {
      out << ',';
      write_value(out, col[i]);
    }
    out << '\n';
  }
  out << "mse_x1000,";  // no value under the observed column
  for (std::size_t c = 0; c < mse_x1000.size(); ++c) {
    if (c) out << ',';
    write_value(out, mse_x1000[c]);
  }
  out << '\n';
  out << "ratio_percent,";
  for (std::size_t c = 0; c < ratio_percent.size(); ++c) {
    if (c) out << ',';
    write_value(out, ratio_percent[c]);
  }
  out << '\n';
}

nlohmann::ordered_json Table2Report::to_json() const {
  nlohmann::ordered_json j;
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < players.size(); ++i) {
    nlohmann::ordered_json row;
    row["player"] = players[i];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      row[columns[c].size() == 1 ? "model_" + columns[c] : columns[c]] =
          cells[c][i];
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  nlohmann::ordered_json footer;
  for (std::size_t c = 1; c < columns.size(); ++c) {
    const std::string name =
        columns[c].size() == 1 ? "model_" + columns[c] : columns[c];
    footer[name] = {{"mse_x1000", mse_x1000[c - 1]},
                    {"ratio_percent", ratio_percent[c - 1]}};
  }
  j["footer"] = std::move(footer);
  return j;
}

void FigureSeries::to_csv(std::ostream& out) const {
  if (!omitted.empty()) {
    out << "# omitted_x:";
    for (double v : omitted) {
      out << ' ';
      write_value(out, v);
    }
    out << '\n';
  }
  out << x_label;
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) {
    write_value(out, x[i]);
    for (const auto& s : series) {
      out << ',';
      write_value(out, s[i]);
    }
    out << '\n';
  }
}

FigureSeries figure_series(int figure_id, const FigureParams& params) {
  FigureSeries fig;
  fig.figure_id = figure_id;
  const auto xs = transformed_scores(params.players);
  const HyperParams hp = fit_empirical_hyperparams(xs);
  const double sigma0 = std::sqrt(hp.sigma0_sq);
  const double nu0 = match_quartiles(sigma0, PriorFamily::DoubleExponential);
  const double gamma0 = match_quartiles(sigma0, PriorFamily::Cauchy);

  switch (figure_id) {
    case 1: {
      fig.x_label = "theta";
      fig.names = {"square_loss", "cauchy_over_gaussian_loss"};
      const auto cog = WeightedLossSpec::cauchy_over_gaussian(0.0);
      fig.x = grid(-10.0, 10.0, 0.01);
      std::vector<double> sq, cg;
      for (double th : fig.x) {
        sq.push_back(th * th);
        cg.push_back(loss(cog, th, 0.0));
      }
      fig.series = {std::move(sq), std::move(cg)};
      return fig;
    }
    case 2: {
      fig.x_label = "prior_location";
      fig.names = {"normal", "double_exponential", "cauchy"};
      fig.x = grid(-15.0, 15.0, 0.05);
      const double x_obs = 0.0;
      std::vector<double> sn, sd, sc;
      for (double m : fig.x) {
        sn.push_back(x_obs - posterior_mean_normal(
                                 x_obs, HyperParams{m, hp.sigma0_sq, hp.tau,
                                                    hp.shrink_c}));
        sd.push_back(x_obs -
                     posterior_mean_quadrature(
                         {x_obs, PriorSpec::double_exponential(m, nu0)}));
        sc.push_back(x_obs - posterior_mean_quadrature(
                                 {x_obs, PriorSpec::cauchy(m, gamma0)}));
      }
      fig.series = {std::move(sn), std::move(sd), std::move(sc)};
      return fig;
    }
    case 3: {
      fig.x_label = "x";
      fig.names = {"normal", "double_exponential", "cauchy"};
      std::vector<double> sorted(xs.begin(), xs.end());
      std::sort(sorted.begin(), sorted.end());
      fig.x = sorted;
      std::vector<double> sn, sd, sc;
      for (double x : fig.x) {
        sn.push_back(posterior_mean_normal(x, hp));
        sd.push_back(posterior_mean_quadrature(
            {x, PriorSpec::double_exponential(hp.m, nu0)}));
        sc.push_back(
            posterior_mean_quadrature({x, PriorSpec::cauchy(hp.m, gamma0)}));
      }
      fig.series = {std::move(sn), std::move(sd), std::move(sc)};
      return fig;
    }
    case 4: {
      fig.x_label = "theta";
      fig.names = {"normal", "double_exponential", "cauchy",
                   "cauchy_scaled_beta2"};
      const auto dn = PriorSpec::normal(0.0, 1.0);
      const auto dd = PriorSpec::double_exponential(
          0.0, match_quartiles(1.0, PriorFamily::DoubleExponential));
      const auto dc =
          PriorSpec::cauchy(0.0, match_quartiles(1.0, PriorFamily::Cauchy));
      std::vector<double> sn, sd, sc, sh;
      for (double th : grid(-10.0, 10.0, 0.01)) {
        if (th == 0.0) {
          fig.omitted.push_back(th);  // log pole of the mixture marginal
          continue;
        }
        fig.x.push_back(th);
        sn.push_back(density(dn, th));
        sd.push_back(density(dd, th));
        sc.push_back(density(dc, th));
        sh.push_back(cauchy_scbeta2_density(th, params.scbeta_b));
      }
      fig.series = {std::move(sn), std::move(sd), std::move(sc), std::move(sh)};
      return fig;
    }
    case 5: {
      if (params.results == nullptr) {
        throw IncompleteReportError(
            "figure_series: figure 5 needs model results 1, 3, 4 and 7");
      }
      std::vector<std::string> missing;
      const auto& m1 = require_column(*params.results, "1", missing);
      const auto& m3 = require_column(*params.results, "3", missing);
      const auto& m4 = require_column(*params.results, "4", missing);
      const auto& m7 = require_column(*params.results, "7", missing);
      if (!missing.empty()) {
        std::string msg = "figure_series: figure 5 missing results:";
        for (const auto& k : missing) msg += " " + k;
        throw IncompleteReportError(msg);
      }
      fig.x_label = "player_index";
      fig.names = {"observed",         "mle",     "model_1",
                   "model_3",          "model_4", "model_7"};
      std::vector<double> obs, mle, c1, c3, c4, c7;
      for (std::size_t i = 0; i < params.players.size(); ++i) {
        fig.x.push_back(static_cast<double>(i + 1));
        obs.push_back(params.players[i].remainder_avg);
        mle.push_back(refine_proportion(params.players[i].y45));
        c1.push_back(m1.predictions[i].estimate);
        c3.push_back(m3.predictions[i].estimate);
        c4.push_back(m4.predictions[i].estimate);
        c7.push_back(m7.predictions[i].estimate);
      }
      fig.series = {std::move(obs), std::move(mle), std::move(c1),
                    std::move(c3),  std::move(c4),  std::move(c7)};
      return fig;
    }
    default:
      throw std::invalid_argument("figure_series: figure_id must be in 1..5");
  }
}

}  // namespace shrink
