#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shrink {

/// One row of the 1970 batting table: average over the first 45 at-bats,
/// average over the remainder of the season, and the remainder at-bat count.
struct PlayerRecord {
  std::string name;
  double y45 = 0.0;
  double remainder_avg = 0.0;
  int remainder_ab = 0;
};

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parses `name,y45,remainder_avg,remainder_ab` CSV. Errors name the
/// offending row (1-based, header excluded).
std::vector<PlayerRecord> load_players(std::istream& in);
std::vector<PlayerRecord> load_players(const std::filesystem::path& file);

/// The bundled 18-player 1970 dataset.
const std::vector<PlayerRecord>& canonical_players();
std::string_view canonical_csv();

/// Variance-stabilizing score transform: sqrt(n) * asin(2y - 1).
/// Throws std::domain_error unless 0 <= y <= 1.
double arcsine_transform(double y, double n_at_bats = 45.0);

/// Inverse of arcsine_transform, clamped into [0,1]. Total function:
/// scores past the transform's range map to the boundary averages.
double inverse_transform(double x, double n_at_bats = 45.0);

/// Batting averages over n at-bats are rational (hits/n); a table printed
/// to three decimals denotes the underlying count. Recovers hits/n when
/// y*n is within printing distance of an integer, else returns y as given.
double refine_proportion(double y, double n_at_bats = 45.0);

/// Transformed scores for a roster, with proportion refinement applied.
std::vector<double> transformed_scores(std::span<const PlayerRecord> players,
                                       double n_at_bats = 45.0);

}  // namespace shrink
