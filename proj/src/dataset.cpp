#include "shrink/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shrink {

namespace {

constexpr std::string_view kHeader = "name,y45,remainder_avg,remainder_ab";

// The 18-player 1970 batting dataset of Efron and Morris: averages over
// the first 45 at-bats and over the remainder of the season.
constexpr std::string_view kCanonicalCsv =
    "name,y45,remainder_avg,remainder_ab\n"
    "Clemente,0.400,0.346,367\n"
    "F. Robinson,0.378,0.298,426\n"
    "F. Howard,0.356,0.276,521\n"
    "Johnstone,0.333,0.222,275\n"
    "Berry,0.311,0.273,418\n"
    "Spencer,0.311,0.270,466\n"
    "Kessinger,0.289,0.263,586\n"
    "Alvarado,0.267,0.210,138\n"
    "Santo,0.244,0.269,510\n"
    "Swoboda,0.244,0.230,200\n"
    "Unser,0.222,0.264,277\n"
    "Williams,0.222,0.256,270\n"
    "Scott,0.222,0.303,435\n"
    "Petrocelli,0.222,0.264,538\n"
    "E. Rodriguez,0.222,0.226,186\n"
    "Campaneris,0.200,0.285,558\n"
    "Munson,0.178,0.316,408\n"
    "Alvis,0.156,0.200,70\n";

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(trim(std::string_view(line).substr(start)));
      break;
    }
    out.push_back(trim(std::string_view(line).substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& field, int row, const char* what) {
  double v;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || p != field.data() + field.size()) {
    throw ParseError("row " + std::to_string(row) + ": cannot parse " + what +
                     " from '" + field + "'");
  }
  return v;
}

int parse_int(const std::string& field, int row, const char* what) {
  int v;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || p != field.data() + field.size()) {
    throw ParseError("row " + std::to_string(row) + ": cannot parse " + what +
                     " from '" + field + "'");
  }
  return v;
}

}  // namespace

std::vector<PlayerRecord> load_players(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty input: expected header '" + std::string(kHeader) +
                     "'");
  }
  if (trim(line) != kHeader) {
    throw ParseError("bad header '" + trim(line) + "', expected '" +
                     std::string(kHeader) + "'");
  }
  std::vector<PlayerRecord> records;
  int row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    auto fields = split_csv_row(line);
    if (fields.size() != 4) {
      throw ParseError("row " + std::to_string(row) + ": expected 4 fields, got " +
                       std::to_string(fields.size()));
    }
    PlayerRecord rec;
    rec.name = fields[0];
    rec.y45 = parse_double(fields[1], row, "y45");
    rec.remainder_avg = parse_double(fields[2], row, "remainder_avg");
    rec.remainder_ab = parse_int(fields[3], row, "remainder_ab");
    if (rec.y45 < 0.0 || rec.y45 > 1.0) {
      throw ParseError("row " + std::to_string(row) +
                       ": y45 out of [0,1]: " + fields[1]);
    }
    if (rec.remainder_avg < 0.0 || rec.remainder_avg > 1.0) {
      throw ParseError("row " + std::to_string(row) +
                       ": remainder_avg out of [0,1]: " + fields[2]);
    }
    if (rec.remainder_ab < 1) {
      throw ParseError("row " + std::to_string(row) +
                       ": remainder_ab must be >= 1, got " + fields[3]);
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) {
    throw ParseError("no records: file has a header but no data rows");
  }
  return records;
}

std::vector<PlayerRecord> load_players(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw ParseError("cannot open '" + file.string() + "'");
  }
  return load_players(in);
}

const std::vector<PlayerRecord>& canonical_players() {
  static const std::vector<PlayerRecord> players = [] {
    std::istringstream in{std::string(kCanonicalCsv)};
    return load_players(in);
  }();
  return players;
}

std::string_view canonical_csv() { return kCanonicalCsv; }

double arcsine_transform(double y, double n_at_bats) {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw std::domain_error("arcsine_transform: average " + std::to_string(y) +
                            " outside [0,1]");
  }
  return std::sqrt(n_at_bats) * std::asin(2.0 * y - 1.0);
}

double inverse_transform(double x, double n_at_bats) {
  const double v = 0.5 * (std::sin(x / std::sqrt(n_at_bats)) + 1.0);
  return std::clamp(v, 0.0, 1.0);
}

double refine_proportion(double y, double n_at_bats) {
  const double count = y * n_at_bats;
  const double snapped = std::round(count);
  // half a unit in the third decimal place, scaled by n
  if (std::fabs(count - snapped) <= 0.0005 * n_at_bats + 1e-9) {
    return snapped / n_at_bats;
  }
  return y;
}

std::vector<double> transformed_scores(std::span<const PlayerRecord> players,
                                       double n_at_bats) {
  std::vector<double> xs;
  xs.reserve(players.size());
  for (const PlayerRecord& p : players) {
    xs.push_back(arcsine_transform(refine_proportion(p.y45, n_at_bats),
                                   n_at_bats));
  }
  return xs;
}

}  // namespace shrink
