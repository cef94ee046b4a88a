#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "shrink/dataset.hpp"

using namespace shrink;

namespace {

template <class Fn>
std::string thrown_message(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("canonical dataset matches the published table") {
  const auto& players = canonical_players();
  REQUIRE(players.size() == 18);
  CHECK(players[0].name == "Clemente");
  CHECK(players[0].y45 == doctest::Approx(0.400));
  CHECK(players[0].remainder_avg == doctest::Approx(0.346));
  CHECK(players[0].remainder_ab == 367);
  CHECK(players[17].name == "Alvis");

  double y_sum = 0.0, r_sum = 0.0;
  long ab_sum = 0;
  for (const auto& p : players) {
    y_sum += p.y45;
    r_sum += p.remainder_avg;
    ab_sum += p.remainder_ab;
  }
  CHECK(std::fabs(y_sum - 4.777) < 1e-9);
  CHECK(std::fabs(r_sum - 4.771) < 1e-9);
  CHECK(ab_sum == 6649);
}

TEST_CASE("load_players parses and validates") {
  SUBCASE("round trip of the embedded csv") {
    std::istringstream in{std::string(canonical_csv())};
    const auto players = load_players(in);
    CHECK(players.size() == 18);
  }
  SUBCASE("empty input") {
    std::istringstream in{""};
    CHECK_THROWS_AS(load_players(in), ParseError);
  }
  SUBCASE("header only") {
    std::istringstream in{"name,y45,remainder_avg,remainder_ab\n"};
    CHECK_THROWS_AS(load_players(in), ParseError);
  }
  SUBCASE("malformed row names its number") {
    const std::string msg = thrown_message([] {
      std::istringstream in{
          "name,y45,remainder_avg,remainder_ab\n"
          "Clemente,0.400,0.346,367\n"
          "Broken,x.y,0.3,10\n"};
      load_players(in);
    });
    CHECK(msg.find("row 2") != std::string::npos);
  }
  SUBCASE("out of range average rejected") {
    const std::string msg = thrown_message([] {
      std::istringstream in{
          "name,y45,remainder_avg,remainder_ab\n"
          "Bad,1.400,0.346,367\n"};
      load_players(in);
    });
    CHECK(msg.find("out of [0,1]") != std::string::npos);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_players(std::filesystem::path("no/such/file.csv")),
                    ParseError);
  }
}

TEST_CASE("arcsine transform") {
  CHECK(std::fabs(arcsine_transform(0.5)) < 1e-15);
  // sqrt(45) * asin(-0.2), high-precision reference
  CHECK(arcsine_transform(0.400) ==
        doctest::Approx(-1.3507499960855935).epsilon(1e-14));
  CHECK_THROWS_AS(arcsine_transform(-0.01), std::domain_error);
  CHECK_THROWS_AS(arcsine_transform(1.01), std::domain_error);
  CHECK_THROWS_AS(arcsine_transform(std::nan("")), std::domain_error);

  SUBCASE("strictly increasing") {
    double prev = arcsine_transform(0.0);
    for (int i = 1; i <= 100; ++i) {
      const double cur = arcsine_transform(i / 100.0);
      CHECK(cur > prev);
      prev = cur;
    }
  }

  SUBCASE("mean of the transformed canonical scores") {
    const auto xs = transformed_scores(canonical_players());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    CHECK(std::fabs(mean - (-3.3166)) < 0.0005);
  }
}

TEST_CASE("inverse transform") {
  CHECK(inverse_transform(0.0) == doctest::Approx(0.5));
  // shrinkage of Clemente's score with the fixed proportion, then invert
  CHECK(std::fabs(inverse_transform(-2.906) - 0.290) < 0.001);
  CHECK(inverse_transform(1e6) <= 1.0);
  CHECK(inverse_transform(-1e6) >= 0.0);

  SUBCASE("round trip identity") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 1000; ++i) {
      const double y = static_cast<double>(rng() >> 11) * 0x1p-53;
      const double back = inverse_transform(arcsine_transform(y));
      CHECK(std::fabs(back - y) < 1e-12);
    }
    CHECK(std::fabs(inverse_transform(arcsine_transform(0.156)) - 0.156) <
          1e-12);
  }
}

TEST_CASE("proportion refinement recovers hit counts") {
  CHECK(refine_proportion(0.400) == doctest::Approx(18.0 / 45).epsilon(1e-15));
  CHECK(refine_proportion(0.378) == doctest::Approx(17.0 / 45).epsilon(1e-15));
  CHECK(refine_proportion(0.222) == doctest::Approx(10.0 / 45).epsilon(1e-15));
  // not near any count over 45 at-bats: left untouched
  CHECK(refine_proportion(0.3) == doctest::Approx(0.3).epsilon(1e-15));
}
