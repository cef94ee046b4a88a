#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "shrink/dataset.hpp"
#include "shrink/mcmc.hpp"

namespace shrink {

namespace {

std::string expected_header(int n_players) {
  std::string h = "chain,iter";
  for (int i = 1; i <= n_players; ++i) h += ",mu_" + std::to_string(i);
  h += ",M,scale";
  return h;
}

void append_double(std::string& out, double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

void persist_trace(const McmcTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("persist_trace: cannot open '" + path.string() +
                             "' for writing");
  }
  out << expected_header(trace.n_players) << '\n';
  std::string line;
  for (int c = 0; c < trace.n_chains; ++c) {
    for (std::int64_t it = 0; it < trace.n_kept; ++it) {
      line.clear();
      line += std::to_string(c);
      line += ',';
      line += std::to_string(trace.burnin + it);
      for (int p = 0; p < trace.n_params(); ++p) {
        line += ',';
        append_double(line, trace.value(c, it, p));
      }
      line += '\n';
      out << line;
    }
  }
  if (!out) {
    throw std::runtime_error("persist_trace: write to '" + path.string() +
                             "' failed");
  }
}

McmcTrace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_trace: cannot open '" + path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("load_trace: '" + path.string() + "' is empty");
  }
  // header determines the roster size
  int n_players = -1;
  for (int k = 1; k <= 512; ++k) {
    if (line == expected_header(k)) {
      n_players = k;
      break;
    }
  }
  if (n_players < 0) {
    throw ParseError("load_trace: schema error, unexpected header '" + line +
                     "'");
  }
  const int n_params = n_players + 2;

  std::vector<std::vector<double>> per_chain;
  std::vector<std::int64_t> first_iter;
  int last_good_row = 0;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    std::vector<double> fields;
    fields.reserve(n_params + 2);
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      double v;
      auto [ptr, ec] = std::from_chars(p, comma, v);
      if (ec != std::errc() || ptr != comma) {
        throw ParseError("load_trace: row " + std::to_string(row) +
                         " is malformed; last good row " +
                         std::to_string(last_good_row));
      }
      fields.push_back(v);
      if (comma == end) break;
      p = comma + 1;
    }
    if (static_cast<int>(fields.size()) != n_params + 2) {
      throw ParseError("load_trace: row " + std::to_string(row) +
                       " truncated (" + std::to_string(fields.size()) +
                       " fields); last good row " +
                       std::to_string(last_good_row));
    }
    const int chain = static_cast<int>(fields[0]);
    if (chain < 0 || chain > 4096 ||
        fields[0] != static_cast<double>(chain)) {
      throw ParseError("load_trace: row " + std::to_string(row) +
                       " has bad chain index; last good row " +
                       std::to_string(last_good_row));
    }
    if (chain >= static_cast<int>(per_chain.size())) {
      per_chain.resize(chain + 1);
      first_iter.resize(chain + 1, -1);
    }
    if (first_iter[chain] < 0) {
      first_iter[chain] = static_cast<std::int64_t>(fields[1]);
    }
    per_chain[chain].insert(per_chain[chain].end(), fields.begin() + 2,
                            fields.end());
    last_good_row = row;
  }
  if (per_chain.empty()) {
    throw ParseError("load_trace: '" + path.string() + "' has no draws");
  }

  McmcTrace trace;
  trace.n_players = n_players;
  trace.n_chains = static_cast<int>(per_chain.size());
  trace.burnin = first_iter[0] < 0 ? 0 : first_iter[0];
  trace.n_kept =
      static_cast<std::int64_t>(per_chain[0].size()) / n_params;
  for (std::size_t c = 0; c < per_chain.size(); ++c) {
    if (static_cast<std::int64_t>(per_chain[c].size()) !=
        trace.n_kept * n_params) {
      throw ParseError("load_trace: chain " + std::to_string(c) +
                       " has a different draw count than chain 0");
    }
  }
  trace.draws = std::move(per_chain);
  return trace;
}

}  // namespace shrink
