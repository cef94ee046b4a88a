#include "shrink/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "shrink/posterior_eb.hpp"

namespace shrink {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

double draw_normal(std::mt19937_64& rng) {
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

double draw_gamma(std::mt19937_64& rng, double shape) {
  if (shape < 1.0) {
    const double u = uniform01(rng);
    return draw_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double z = draw_normal(rng);
    double v = 1.0 + c * z;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform01(rng);
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
  }
}

// log prior of one location given (M, sigma) for the robust models
double log_mu_prior(int model_id, double mu, double m, double sigma) {
  const double d = std::fabs(mu - m);
  if (model_id == 5) {
    return -d / sigma - std::log(2.0 * sigma);
  }
  const double z = d / sigma;
  return -std::log1p(z * z) - std::log(kPi * sigma);
}

// log prior of the general mean
double log_m_prior(int model_id, double m) {
  if (model_id == 5) return -std::fabs(m) / 1e3;
  const double z = m / 1e3;
  return -std::log1p(z * z);
}

// log prior of the scale block in its log-walk coordinate w,
// Jacobian included. Models 5, 7 put ScBeta2 on sigma^2 (w = log sigma^2);
// model 6 puts it on sigma (w = log sigma).
double log_scale_prior(int model_id, double w, double b) {
  if (model_id == 6) {
    const double sigma = std::exp(w);
    return -2.0 * std::log1p(sigma / b) + w;
  }
  const double s2 = std::exp(w);
  const double scb = (model_id == 5) ? 1.0 : b;
  return -2.0 * std::log1p(s2 / scb) + w;
}

double sigma_from_w(int model_id, double w) {
  return model_id == 6 ? std::exp(w) : std::exp(0.5 * w);
}

struct ChainResult {
  std::vector<double> draws;
  std::vector<double> acc_rates;
  std::vector<std::string> warnings;
};

void check_finite(double v, const char* what, std::int64_t iteration) {
  if (!std::isfinite(v)) {
    throw std::runtime_error(std::string("sampler fault: non-finite ") + what +
                             " at iteration " + std::to_string(iteration));
  }
}

// EB-centered starting point; small rosters fall back to neutral values
HyperParams starting_point(std::span<const double> xs) {
  try {
    return fit_empirical_hyperparams(xs);
  } catch (const std::exception&) {
    HyperParams hp;
    hp.m = std::accumulate(xs.begin(), xs.end(), 0.0) /
           static_cast<double>(xs.size());
    hp.sigma0_sq = 1.0;
    hp.tau = 1.0;
    hp.shrink_c = 0.5;
    return hp;
  }
}

ChainResult run_chain_model4(std::span<const double> xs,
                             const McmcConfig& config, int chain) {
  const int k = static_cast<int>(xs.size());
  std::mt19937_64 rng(chain_seed(config.seed, chain));
  const HyperParams hp = starting_point(xs);

  std::vector<double> mu(xs.begin(), xs.end());
  double m = config.fixed_location.value_or(hp.m);
  double s2 = config.fixed_scale ? (*config.fixed_scale) * (*config.fixed_scale)
                                 : hp.sigma0_sq;
  // overdispersed starts: jitter locations by +-1, the scale by a factor
  for (int i = 0; i < k; ++i) mu[i] += 2.0 * uniform01(rng) - 1.0;
  if (!config.fixed_location) m += 2.0 * uniform01(rng) - 1.0;
  if (!config.fixed_scale) s2 *= std::exp(uniform01(rng) - 0.5);

  const std::int64_t kept = config.n_iter - config.n_burnin;
  ChainResult out;
  out.draws.reserve(static_cast<std::size_t>(kept) * (k + 2));
  out.acc_rates.assign(k + 2, 1.0);  // exact conditionals always accept

  for (std::int64_t it = 0; it < config.n_iter; ++it) {
    // mu_i | rest
    for (int i = 0; i < k; ++i) {
      if (config.use_likelihood) {
        const double prec = 1.0 + 1.0 / s2;
        const double mean = (xs[i] + m / s2) / prec;
        mu[i] = mean + draw_normal(rng) / std::sqrt(prec);
      } else {
        mu[i] = m + std::sqrt(s2) * draw_normal(rng);
      }
      check_finite(mu[i], "mu", it);
    }
    // M | rest, prior N(0, 1e5)
    if (config.fixed_location) {
      m = *config.fixed_location;
    } else {
      const double prec = static_cast<double>(k) / s2 + 1e-5;
      const double mean =
          (std::accumulate(mu.begin(), mu.end(), 0.0) / s2) / prec;
      m = mean + draw_normal(rng) / std::sqrt(prec);
      check_finite(m, "M", it);
    }
    // sigma^2 | rest, prior InvGamma(0.01, 0.01)
    if (config.fixed_scale) {
      s2 = (*config.fixed_scale) * (*config.fixed_scale);
    } else {
      double ssq = 0.0;
      for (int i = 0; i < k; ++i) ssq += (mu[i] - m) * (mu[i] - m);
      s2 = (0.01 + 0.5 * ssq) / draw_gamma(rng, 0.01 + 0.5 * k);
      check_finite(s2, "sigma^2", it);
    }
    if (it >= config.n_burnin) {
      out.draws.insert(out.draws.end(), mu.begin(), mu.end());
      out.draws.push_back(m);
      out.draws.push_back(s2);
    }
  }
  return out;
}

ChainResult run_chain_mwg(int model_id, std::span<const double> xs,
                          const McmcConfig& config, int chain) {
  const int k = static_cast<int>(xs.size());
  std::mt19937_64 rng(chain_seed(config.seed, chain));
  const HyperParams hp = starting_point(xs);
  const double b = config.scbeta_b;

  std::vector<double> mu(xs.begin(), xs.end());
  double m = config.fixed_location.value_or(hp.m);
  // EB scale start: sigma for model 6, sigma^2 for the squared-scale models
  const double sigma_start = config.fixed_scale.value_or(std::sqrt(hp.sigma0_sq));
  double w = (model_id == 6) ? std::log(sigma_start)
                             : 2.0 * std::log(sigma_start);
  for (int i = 0; i < k; ++i) mu[i] += 2.0 * uniform01(rng) - 1.0;
  if (!config.fixed_location) m += 2.0 * uniform01(rng) - 1.0;
  if (!config.fixed_scale) w += uniform01(rng) - 0.5;

  std::vector<double> step_mu(k, 1.0);
  double step_m = 0.5;
  double step_w = 1.0;
  std::vector<std::int64_t> acc(k + 2, 0);
  std::vector<std::int64_t> window_acc(k + 2, 0);
  constexpr std::int64_t kWindow = 100;

  auto log_lik = [&](int i, double mui) {
    if (!config.use_likelihood) return 0.0;
    const double d = xs[i] - mui;
    return -0.5 * d * d;
  };

  const std::int64_t kept = config.n_iter - config.n_burnin;
  ChainResult out;
  out.draws.reserve(static_cast<std::size_t>(kept) * (k + 2));

  double sigma = sigma_from_w(model_id, w);
  for (std::int64_t it = 0; it < config.n_iter; ++it) {
    const bool counting = it >= config.n_burnin;
    // mu blocks
    for (int i = 0; i < k; ++i) {
      const double prop = mu[i] + step_mu[i] * draw_normal(rng);
      const double delta = log_lik(i, prop) +
                           log_mu_prior(model_id, prop, m, sigma) -
                           log_lik(i, mu[i]) -
                           log_mu_prior(model_id, mu[i], m, sigma);
      check_finite(delta, "mu log-density delta", it);
      if (std::log(uniform01(rng)) < delta) {
        mu[i] = prop;
        ++window_acc[i];
        if (counting) ++acc[i];
      }
    }
    // M block
    if (config.fixed_location) {
      m = *config.fixed_location;
    } else {
      const double prop = m + step_m * draw_normal(rng);
      double delta = log_m_prior(model_id, prop) - log_m_prior(model_id, m);
      for (int i = 0; i < k; ++i) {
        delta += log_mu_prior(model_id, mu[i], prop, sigma) -
                 log_mu_prior(model_id, mu[i], m, sigma);
      }
      check_finite(delta, "M log-density delta", it);
      if (std::log(uniform01(rng)) < delta) {
        m = prop;
        ++window_acc[k];
        if (counting) ++acc[k];
      }
    }
    // scale block, additive walk on w with Jacobian in the target
    if (config.fixed_scale) {
      w = (model_id == 6) ? std::log(*config.fixed_scale)
                          : 2.0 * std::log(*config.fixed_scale);
      sigma = *config.fixed_scale;
    } else {
      const double prop = w + step_w * draw_normal(rng);
      const double sigma_prop = sigma_from_w(model_id, prop);
      double delta = log_scale_prior(model_id, prop, b) -
                     log_scale_prior(model_id, w, b);
      for (int i = 0; i < k; ++i) {
        delta += log_mu_prior(model_id, mu[i], m, sigma_prop) -
                 log_mu_prior(model_id, mu[i], m, sigma);
      }
      check_finite(delta, "scale log-density delta", it);
      if (std::log(uniform01(rng)) < delta) {
        w = prop;
        sigma = sigma_prop;
        ++window_acc[k + 1];
        if (counting) ++acc[k + 1];
      }
    }
    // burn-in adaptation toward the 30-45% acceptance band, frozen after
    if (it < config.n_burnin && (it + 1) % kWindow == 0) {
      auto adapt = [&](double& step, std::int64_t hits) {
        const double rate = static_cast<double>(hits) / kWindow;
        step *= std::exp(std::clamp(rate - 0.375, -0.5, 0.5));
      };
      for (int i = 0; i < k; ++i) adapt(step_mu[i], window_acc[i]);
      adapt(step_m, window_acc[k]);
      adapt(step_w, window_acc[k + 1]);
      std::fill(window_acc.begin(), window_acc.end(), 0);
    }
    if (it == config.n_burnin - 1) {
      std::fill(window_acc.begin(), window_acc.end(), 0);
    }
    if (counting) {
      out.draws.insert(out.draws.end(), mu.begin(), mu.end());
      out.draws.push_back(m);
      out.draws.push_back(model_id == 6 ? sigma : sigma * sigma);
    }
  }

  out.acc_rates.resize(k + 2);
  for (int p = 0; p < k + 2; ++p) {
    out.acc_rates[p] = static_cast<double>(acc[p]) / static_cast<double>(kept);
  }
  if (config.fixed_location) out.acc_rates[k] = 1.0;
  if (config.fixed_scale) out.acc_rates[k + 1] = 1.0;
  for (int p = 0; p < k + 2; ++p) {
    const bool pinned = (p == k && config.fixed_location) ||
                        (p == k + 1 && config.fixed_scale);
    if (!pinned && (out.acc_rates[p] < 0.05 || out.acc_rates[p] > 0.95)) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "tuning failure: block %d acceptance %.3f outside [0.05,0.95]",
                    p, out.acc_rates[p]);
      out.warnings.emplace_back(buf);
    }
  }
  return out;
}

int max_parallel_chains() {
  if (const char* env = std::getenv("ROBUST_SHRINK_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

template <class RunChain>
McmcTrace collect_chains(std::span<const double> xs, const McmcConfig& config,
                         const RunChain& run_one) {
  McmcTrace trace;
  trace.n_players = static_cast<int>(xs.size());
  trace.n_kept = config.n_iter - config.n_burnin;
  trace.burnin = config.n_burnin;
  trace.n_chains = config.n_chains;
  trace.draws.resize(config.n_chains);

  std::vector<ChainResult> results(config.n_chains);
  const int budget = config.parallel_chains ? max_parallel_chains() : 1;
  if (budget > 1) {
    std::vector<std::future<ChainResult>> futures;
    futures.reserve(config.n_chains);
    for (int c = 0; c < config.n_chains; ++c) {
      futures.push_back(
          std::async(std::launch::async, [&, c] { return run_one(c); }));
    }
    for (int c = 0; c < config.n_chains; ++c) results[c] = futures[c].get();
  } else {
    for (int c = 0; c < config.n_chains; ++c) results[c] = run_one(c);
  }

  trace.acceptance_rates.assign(trace.n_params(), 0.0);
  for (int c = 0; c < config.n_chains; ++c) {
    trace.draws[c] = std::move(results[c].draws);
    for (int p = 0; p < trace.n_params(); ++p) {
      trace.acceptance_rates[p] +=
          results[c].acc_rates[p] / config.n_chains;
    }
    for (auto& wmsg : results[c].warnings) {
      trace.warnings.push_back("chain " + std::to_string(c) + ": " + wmsg);
    }
  }
  return trace;
}

ModelResult summarize(int model_id, std::span<const PlayerRecord> players,
                      const McmcTrace& trace, const McmcConfig& config) {
  const int k = trace.n_players;
  ModelResult result;
  result.model_id = std::to_string(model_id);

  // prediction = posterior mean of the back-transformed average
  std::vector<double> preds(k, 0.0);
  for (int c = 0; c < trace.n_chains; ++c) {
    for (std::int64_t it = 0; it < trace.n_kept; ++it) {
      for (int i = 0; i < k; ++i) {
        preds[i] += inverse_transform(trace.value(c, it, i));
      }
    }
  }
  const double denom =
      static_cast<double>(trace.n_kept) * static_cast<double>(trace.n_chains);
  for (int i = 0; i < k; ++i) preds[i] /= denom;

  for (int i = 0; i < k; ++i) {
    result.predictions.push_back({players[i].name, preds[i]});
  }
  result.mse = mse(preds, players);

  DiagnosticsSummary summary;
  const auto diags = diagnostics(trace);
  summary.max_split_rhat = 0.0;
  summary.min_ess = std::numeric_limits<double>::infinity();
  for (const auto& d : diags) {
    if (d.degenerate) {
      summary.warnings.push_back("parameter " + d.name +
                                 " is degenerate (constant chain)");
      continue;
    }
    summary.max_split_rhat = std::max(summary.max_split_rhat, d.split_rhat);
    summary.min_ess = std::min(summary.min_ess, d.ess);
  }
  summary.reliable = summary.max_split_rhat <= 1.05;
  for (const auto& wmsg : trace.warnings) summary.warnings.push_back(wmsg);
  result.diagnostics = summary;

  result.config["model"] = result.model_id;
  result.config["chains"] = config.n_chains;
  result.config["iters"] = config.n_iter;
  result.config["burnin"] = config.n_burnin;
  result.config["seed"] = config.seed;
  result.config["scbeta_b"] = config.scbeta_b;
  return result;
}

}  // namespace

HierarchicalModelSpec HierarchicalModelSpec::for_model(int model_id,
                                                       double scbeta_b) {
  if (model_id < 4 || model_id > 7) {
    throw std::invalid_argument("for_model: model_id must be in 4..7");
  }
  return {model_id, scbeta_b};
}

void McmcConfig::validate() const {
  if (n_chains < 2) throw std::invalid_argument("McmcConfig: need >= 2 chains");
  if (n_iter < 1) throw std::invalid_argument("McmcConfig: n_iter must be >= 1");
  if (n_burnin < 0 || n_burnin >= n_iter) {
    throw std::invalid_argument("McmcConfig: burn-in must be in [0, n_iter)");
  }
  if (n_iter - n_burnin < 100) {
    throw std::invalid_argument(
        "McmcConfig: need at least 100 post-burn-in draws for diagnostics");
  }
  if (scbeta_b <= 0.0) {
    throw std::invalid_argument("McmcConfig: scbeta_b must be positive");
  }
}

std::string McmcTrace::param_name(int p) const {
  if (p < n_players) return "mu_" + std::to_string(p + 1);
  return p == n_players ? "M" : "scale";
}

std::uint64_t chain_seed(std::uint64_t seed, int chain_index) {
  // splitmix64 of (seed xor golden*(index+1)); decorrelates nearby seeds
  std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL *
                            static_cast<std::uint64_t>(chain_index + 1));
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::pair<McmcTrace, ModelResult> run_model4(
    std::span<const PlayerRecord> players, const McmcConfig& config) {
  config.validate();
  const auto xs = transformed_scores(players);
  McmcTrace trace = collect_chains(xs, config, [&](int chain) {
    return run_chain_model4(xs, config, chain);
  });
  ModelResult result = summarize(4, players, trace, config);
  return {std::move(trace), std::move(result)};
}

std::pair<McmcTrace, ModelResult> run_model_mwg(
    int model_id, std::span<const PlayerRecord> players,
    const McmcConfig& config) {
  if (model_id < 5 || model_id > 7) {
    throw std::invalid_argument("run_model_mwg: model_id must be 5, 6 or 7");
  }
  config.validate();
  const auto xs = transformed_scores(players);
  McmcTrace trace = collect_chains(xs, config, [&](int chain) {
    return run_chain_mwg(model_id, xs, config, chain);
  });
  ModelResult result = summarize(model_id, players, trace, config);
  return {std::move(trace), std::move(result)};
}

std::pair<McmcTrace, ModelResult> run_model(
    int model_id, std::span<const PlayerRecord> players,
    const McmcConfig& config) {
  if (model_id == 4) return run_model4(players, config);
  return run_model_mwg(model_id, players, config);
}

}  // namespace shrink
