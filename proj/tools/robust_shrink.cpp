// robust_shrink: reproduces the 1970 batting prediction study end to end.
// Subcommands: transform | run | table2 | figure.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "shrink/dataset.hpp"
#include "shrink/mcmc.hpp"
#include "shrink/posterior_eb.hpp"
#include "shrink/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitDiagnostics = 3;
constexpr int kExitUsage = 64;

struct CommonOpts {
  std::string data_path;
  std::string out_dir;
  std::string prior_center = "empirical";
  std::uint64_t seed = 0;
  int chains = 4;
  std::int64_t iters = 50000;
  std::int64_t burnin = 10000;
  double scbeta_b = 4.0;
};

std::vector<shrink::PlayerRecord> load_roster(const CommonOpts& opts) {
  if (opts.data_path.empty()) return shrink::canonical_players();
  return shrink::load_players(fs::path(opts.data_path));
}

fs::path resolve_out_dir(const CommonOpts& opts) {
  if (!opts.out_dir.empty()) return opts.out_dir;
  if (const char* env = std::getenv("ROBUST_SHRINK_OUT")) {
    if (*env) return env;
  }
  return "out";
}

std::optional<double> parse_prior_center(const std::string& s) {
  if (s == "empirical") return std::nullopt;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError(
        "--prior-center must be 'empirical' or a batting average");
  }
}

// write-then-rename keeps partially written files out of the output dir
void atomic_write(const fs::path& path, const std::string& contents) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "'");
    out << contents;
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, path);
}

nlohmann::ordered_json config_json(const CommonOpts& opts,
                                   const std::string& command) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["data"] = opts.data_path.empty() ? "embedded" : opts.data_path;
  j["seed"] = opts.seed;
  j["chains"] = opts.chains;
  j["iters"] = opts.iters;
  j["burnin"] = opts.burnin;
  j["prior_center"] = opts.prior_center;
  j["b"] = opts.scbeta_b;
  return j;
}

shrink::McmcConfig mcmc_config(const CommonOpts& opts) {
  shrink::McmcConfig cfg;
  cfg.n_chains = opts.chains;
  cfg.n_iter = opts.iters;
  cfg.n_burnin = opts.burnin;
  cfg.seed = opts.seed;
  cfg.scbeta_b = opts.scbeta_b;
  return cfg;
}

shrink::EbOptions eb_options(const CommonOpts& opts) {
  shrink::EbOptions eb;
  eb.prior_center_avg = parse_prior_center(opts.prior_center);
  return eb;
}

struct RunOutcome {
  shrink::ModelResult result;
  std::optional<shrink::McmcTrace> trace;
};

RunOutcome run_one_model(const std::string& model,
                         std::span<const shrink::PlayerRecord> players,
                         const CommonOpts& opts) {
  RunOutcome outcome;
  if (model == "mle") {
    outcome.result = shrink::predict_mle(players);
  } else if (model == "mean") {
    outcome.result = shrink::predict_grand_mean(players);
  } else if (model == "1" || model == "2" || model == "3") {
    outcome.result =
        shrink::predict_eb_model(model[0] - '0', players, eb_options(opts));
  } else {
    auto [trace, result] =
        shrink::run_model(model[0] - '0', players, mcmc_config(opts));
    outcome.result = std::move(result);
    outcome.trace = std::move(trace);
  }
  return outcome;
}

int write_model_outputs(const RunOutcome& outcome, const CommonOpts& opts,
                        const fs::path& out_dir) {
  const fs::path model_dir = out_dir / ("model_" + outcome.result.model_id);
  atomic_write(model_dir / "result.json", outcome.result.to_json().dump(2) + "\n");
  atomic_write(model_dir / "config.json",
               config_json(opts, "run " + outcome.result.model_id).dump(2) + "\n");
  if (outcome.trace) {
    fs::create_directories(model_dir);
    const fs::path tmp = model_dir / "trace.csv.tmp";
    shrink::persist_trace(*outcome.trace, tmp);
    fs::rename(tmp, model_dir / "trace.csv");
  }
  if (outcome.result.diagnostics && !outcome.result.diagnostics->reliable) {
    std::cerr << "warning: model " << outcome.result.model_id
              << " diagnostics failed (max split-Rhat "
              << outcome.result.diagnostics->max_split_rhat << " > 1.05)\n";
    return kExitDiagnostics;
  }
  return kExitOk;
}

const std::vector<std::string> kAllModels = {"mle", "mean", "1", "2", "3",
                                             "4",   "5",    "6", "7"};

std::map<std::string, shrink::ModelResult> run_all_models(
    std::span<const shrink::PlayerRecord> players, const CommonOpts& opts,
    const std::vector<std::string>& wanted) {
  std::map<std::string, shrink::ModelResult> results;
  for (const auto& model : wanted) {
    results[model] = run_one_model(model, players, opts).result;
  }
  return results;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust Bayesian shrinkage estimation for the 1970 batting data"};
  app.require_subcommand(1);
  CommonOpts opts;

  auto add_common = [&](CLI::App* cmd, bool with_mcmc) {
    cmd->add_option("--data", opts.data_path,
                    "input CSV (name,y45,remainder_avg,remainder_ab); "
                    "defaults to the embedded 1970 table");
    cmd->add_option("--out", opts.out_dir,
                    "output directory (fallback: $ROBUST_SHRINK_OUT, then ./out)");
    cmd->add_option("--seed", opts.seed, "RNG seed (default 0)");
    cmd->add_option("--prior-center", opts.prior_center,
                    "'empirical' or a fixed batting average, e.g. 0.248");
    if (with_mcmc) {
      cmd->add_option("--chains", opts.chains, "MCMC chains (default 4)");
      cmd->add_option("--iters", opts.iters, "iterations per chain");
      cmd->add_option("--burnin", opts.burnin, "burn-in iterations");
      cmd->add_option("--b", opts.scbeta_b, "ScBeta2 scale (default 4)");
    }
  };

  auto* cmd_transform =
      app.add_subcommand("transform", "print player,y45,x transform CSV");
  add_common(cmd_transform, false);

  auto* cmd_run = app.add_subcommand("run", "run one model column");
  std::string model;
  cmd_run->add_option("model", model, "mle | mean | 1..7")->required();
  add_common(cmd_run, true);

  auto* cmd_table2 = app.add_subcommand("table2", "assemble the full table");
  add_common(cmd_table2, true);

  auto* cmd_figure = app.add_subcommand("figure", "emit figure data CSV");
  int figure_id = 0;
  cmd_figure->add_option("id", figure_id, "figure number 1..5")->required();
  add_common(cmd_figure, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const auto players = load_roster(opts);

    if (cmd_transform->parsed()) {
      const auto xs = shrink::transformed_scores(players);
      std::printf("player,y45,x\n");
      for (std::size_t i = 0; i < players.size(); ++i) {
        std::printf("%s,%.17g,%.17g\n", players[i].name.c_str(),
                    players[i].y45, xs[i]);
      }
      return kExitOk;
    }

    const fs::path out_dir = resolve_out_dir(opts);

    if (cmd_run->parsed()) {
      if (std::find(kAllModels.begin(), kAllModels.end(), model) ==
          kAllModels.end()) {
        std::cerr << "error: unknown model '" << model
                  << "' (expected mle, mean, or 1..7)\n";
        return kExitUsage;
      }
      const auto outcome = run_one_model(model, players, opts);
      return write_model_outputs(outcome, opts, out_dir);
    }

    if (cmd_table2->parsed()) {
      const auto results = run_all_models(players, opts, kAllModels);
      const auto table = shrink::build_table2(players, results);
      std::ostringstream csv;
      table.to_csv(csv);
      atomic_write(out_dir / "table2.csv", csv.str());
      atomic_write(out_dir / "table2.json", table.to_json().dump(2) + "\n");
      atomic_write(out_dir / "config.json",
                   config_json(opts, "table2").dump(2) + "\n");
      bool reliable = true;
      for (const auto& [key, r] : results) {
        if (r.diagnostics && !r.diagnostics->reliable) reliable = false;
      }
      return reliable ? kExitOk : kExitDiagnostics;
    }

    if (cmd_figure->parsed()) {
      if (figure_id < 1 || figure_id > 5) {
        std::cerr << "error: figure id must be 1..5, got " << figure_id << "\n";
        return kExitUsage;
      }
      shrink::FigureParams params;
      params.players = players;
      params.scbeta_b = opts.scbeta_b;
      std::map<std::string, shrink::ModelResult> results;
      if (figure_id == 5) {
        results = run_all_models(players, opts, {"1", "3", "4", "7"});
        params.results = &results;
      }
      const auto fig = shrink::figure_series(figure_id, params);
      std::ostringstream csv;
      fig.to_csv(csv);
      atomic_write(out_dir / ("fig" + std::to_string(figure_id) + ".csv"),
                   csv.str());
      atomic_write(out_dir / "config.json",
                   config_json(opts, "figure " + std::to_string(figure_id))
                           .dump(2) +
                       "\n");
      return kExitOk;
    }
  } catch (const shrink::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
