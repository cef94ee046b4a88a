#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shrink/dataset.hpp"
#include "shrink/model_result.hpp"

namespace shrink {

/// Hierarchical model layout for the full-Bayes columns. Model 4 is the
/// conjugate Normal/Inv-Gamma pair; 5-7 swap in robust location priors and
/// scaled-Beta2 scale priors:
///   4: mu_i ~ Normal(M, sigma^2),  M ~ N(0,1e5),        sigma^2 ~ InvGamma(.01,.01)
///   5: mu_i ~ Laplace(M, sigma),   M ~ Laplace(0,1e3),  sigma^2 ~ ScBeta2(1,1,1)
///   6: mu_i ~ Cauchy(M, sigma),    M ~ Cauchy(0,1e3),   sigma   ~ ScBeta2(1,1,b)
///   7: mu_i ~ Cauchy(M, sigma),    M ~ Cauchy(0,1e3),   sigma^2 ~ ScBeta2(1,1,b)
/// (Laplace(m,s) here is the classic exp(-|.|/s)/(2s); it equals the
/// DE(m, sqrt(2) s) parameterization used on the transformed scale.)
struct HierarchicalModelSpec {
  int model_id = 4;
  double scbeta_b = 4.0;  // ScBeta2 scale for models 6 and 7

  static HierarchicalModelSpec for_model(int model_id, double scbeta_b = 4.0);
};

struct McmcConfig {
  int n_chains = 4;
  std::int64_t n_iter = 50000;
  std::int64_t n_burnin = 10000;
  std::uint64_t seed = 0;
  double scbeta_b = 4.0;
  bool parallel_chains = true;
  /// Validation switches: drop the likelihood term (prior recovery runs)
  /// or pin a block instead of sampling it. fixed_scale pins sigma (the
  /// standard-deviation scale; model 4 then holds sigma^2 = fixed^2).
  bool use_likelihood = true;
  std::optional<double> fixed_location;
  std::optional<double> fixed_scale;

  void validate() const;
};

/// Post-burn-in sample paths for mu_1..k, M and the scale block, one slab
/// per chain, plus per-block acceptance rates.
struct McmcTrace {
  int n_players = 0;
  std::int64_t n_kept = 0;
  std::int64_t burnin = 0;
  int n_chains = 0;
  /// draws[chain][iter * n_params + param]; params ordered mu_1..mu_k, M, scale
  std::vector<std::vector<double>> draws;
  std::vector<double> acceptance_rates;  // one entry per parameter block
  std::vector<std::string> warnings;

  int n_params() const { return n_players + 2; }
  std::string param_name(int p) const;
  double value(int chain, std::int64_t iter, int param) const {
    return draws[chain][static_cast<std::size_t>(iter) * n_params() + param];
  }
};

struct ParamDiagnostics {
  std::string name;
  double split_rhat = 0.0;
  double ess = 0.0;
  bool degenerate = false;
};

/// Split-Rhat and effective sample size per parameter. Requires >= 2 chains
/// and >= 100 kept draws per chain.
std::vector<ParamDiagnostics> diagnostics(const McmcTrace& trace);

/// Split-Rhat over raw chains (each split in half). Infinity when the
/// between-chain variance is positive but the within-chain variance is zero.
double split_rhat(std::span<const std::vector<double>> chains);

/// Effective sample size over raw chains (Geyer initial monotone sequence).
/// Returns 0 with no error for degenerate (constant) input.
double effective_sample_size(std::span<const std::vector<double>> chains);

/// Full Gibbs run of the conjugate hierarchical model (Model 4).
std::pair<McmcTrace, ModelResult> run_model4(
    std::span<const PlayerRecord> players, const McmcConfig& config);

/// Metropolis-within-Gibbs run of Models 5-7: random-walk updates on each
/// mu_i and on M, log-scale random walk with Jacobian on sigma (or sigma^2),
/// proposal scales adapted toward 30-45% acceptance during burn-in only.
std::pair<McmcTrace, ModelResult> run_model_mwg(
    int model_id, std::span<const PlayerRecord> players,
    const McmcConfig& config);

/// Dispatch on model_id in 4..7.
std::pair<McmcTrace, ModelResult> run_model(
    int model_id, std::span<const PlayerRecord> players,
    const McmcConfig& config);

/// CSV persistence; layout one row per (chain, iteration):
/// chain,iter,mu_1..mu_k,M,scale. Values round-trip bit-exactly.
void persist_trace(const McmcTrace& trace, const std::filesystem::path& path);
McmcTrace load_trace(const std::filesystem::path& path);

/// Stream-splitting rule: chain c of a run seeded with s draws from
/// mt19937_64 seeded with splitmix64(s xor golden * (c+1)).
std::uint64_t chain_seed(std::uint64_t seed, int chain_index);

}  // namespace shrink
