#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "shrink/mcmc.hpp"

namespace shrink {

namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double var_of(std::span<const double> v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

std::vector<std::vector<double>> split_in_half(
    std::span<const std::vector<double>> chains) {
  std::vector<std::vector<double>> halves;
  for (const auto& c : chains) {
    const std::size_t half = c.size() / 2;
    halves.emplace_back(c.begin(), c.begin() + half);
    halves.emplace_back(c.begin() + half, c.begin() + 2 * half);
  }
  return halves;
}

// biased (1/n) autocovariance at the given lag
double autocov(std::span<const double> v, double mean, std::size_t lag) {
  double s = 0.0;
  for (std::size_t i = lag; i < v.size(); ++i) {
    s += (v[i] - mean) * (v[i - lag] - mean);
  }
  return s / static_cast<double>(v.size());
}

}  // namespace

double split_rhat(std::span<const std::vector<double>> chains) {
  const auto seqs = split_in_half(chains);
  const std::size_t m = seqs.size();
  const std::size_t n = seqs.front().size();
  if (n < 2) throw std::invalid_argument("split_rhat: sequences too short");

  std::vector<double> means(m), vars(m);
  for (std::size_t j = 0; j < m; ++j) {
    means[j] = mean_of(seqs[j]);
    vars[j] = var_of(seqs[j], means[j]);
  }
  const double w = mean_of(vars);
  const double grand = mean_of(means);
  double b = 0.0;
  for (double mj : means) b += (mj - grand) * (mj - grand);
  b *= static_cast<double>(n) / static_cast<double>(m - 1);

  const double var_plus =
      (static_cast<double>(n - 1) / n) * w + b / static_cast<double>(n);
  if (w <= 0.0) {
    return b > 0.0 ? std::numeric_limits<double>::infinity()
                   : std::numeric_limits<double>::quiet_NaN();
  }
  return std::sqrt(var_plus / w);
}

double effective_sample_size(std::span<const std::vector<double>> chains) {
  const auto seqs = split_in_half(chains);
  const std::size_t m = seqs.size();
  const std::size_t n = seqs.front().size();

  std::vector<double> means(m), vars(m);
  for (std::size_t j = 0; j < m; ++j) {
    means[j] = mean_of(seqs[j]);
    vars[j] = var_of(seqs[j], means[j]);
  }
  const double w = mean_of(vars);
  const double grand = mean_of(means);
  double b = 0.0;
  for (double mj : means) b += (mj - grand) * (mj - grand);
  b *= static_cast<double>(n) / static_cast<double>(m - 1);
  const double var_plus =
      (static_cast<double>(n - 1) / n) * w + b / static_cast<double>(n);
  if (var_plus <= 0.0) return 0.0;

  // combined autocorrelations, Geyer initial monotone positive sequence
  const std::size_t max_lag = n - 1;
  double tau = 1.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t + 1 <= max_lag; t += 2) {
    double acov_t = 0.0, acov_t1 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      acov_t += autocov(seqs[j], means[j], t);
      acov_t1 += autocov(seqs[j], means[j], t + 1);
    }
    const double rho_t = 1.0 - (w - acov_t / m) / var_plus;
    const double rho_t1 = 1.0 - (w - acov_t1 / m) / var_plus;
    double pair = rho_t + rho_t1;
    if (pair < 0.0) break;
    pair = std::min(pair, prev_pair);  // enforce monotone decrease
    tau += 2.0 * pair;
    prev_pair = pair;
  }
  const double total = static_cast<double>(m) * static_cast<double>(n);
  return total / tau;
}

std::vector<ParamDiagnostics> diagnostics(const McmcTrace& trace) {
  if (trace.n_chains < 2) {
    throw std::invalid_argument("diagnostics: need at least 2 chains");
  }
  if (trace.n_kept < 100) {
    throw std::invalid_argument(
        "diagnostics: need at least 100 post-burn-in draws per chain");
  }
  std::vector<ParamDiagnostics> out;
  out.reserve(trace.n_params());
  for (int p = 0; p < trace.n_params(); ++p) {
    std::vector<std::vector<double>> chains(trace.n_chains);
    bool constant_chain = false;
    for (int c = 0; c < trace.n_chains; ++c) {
      auto& chain = chains[c];
      chain.resize(trace.n_kept);
      for (std::int64_t it = 0; it < trace.n_kept; ++it) {
        chain[it] = trace.value(c, it, p);
      }
      if (std::adjacent_find(chain.begin(), chain.end(),
                             std::not_equal_to<>()) == chain.end()) {
        constant_chain = true;
      }
    }
    ParamDiagnostics d;
    d.name = trace.param_name(p);
    if (constant_chain) {
      d.degenerate = true;
      d.split_rhat = split_rhat(chains);  // may be inf; still informative
      d.ess = 0.0;
    } else {
      d.split_rhat = split_rhat(chains);
      d.ess = effective_sample_size(chains);
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace shrink
