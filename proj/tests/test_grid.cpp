#include <doctest.h>

#include "hgut/errors.hpp"
#include "hgut/grid.hpp"

using namespace hgut;

TEST_CASE("grid shape basics") {
  GridShape s({2, 3, 4});
  CHECK(s.n() == 3);
  CHECK(s.total_size() == 24);
  CHECK(s.max_side() == 4);
  CHECK(s.to_string() == "(2,3,4)");
  CHECK_THROWS_AS(GridShape({1, 2}), ArgumentError);
  CHECK_THROWS_AS(GridShape(std::vector<int>{}), ArgumentError);
}

TEST_CASE("row-major indexing round-trips") {
  GridShape s({3, 2, 4});
  for (std::int64_t idx = 0; idx < s.total_size(); ++idx) {
    CHECK(s.index_of(s.point_at(idx)) == idx);
  }
  // Last coordinate is fastest.
  CHECK(s.index_of({0, 0, 1}) == 1);
  CHECK(s.index_of({0, 1, 0}) == 4);
  CHECK(s.index_of({1, 0, 0}) == 8);
  CHECK_THROWS_AS(s.index_of({3, 0, 0}), ArgumentError);
}

TEST_CASE("sub shapes") {
  GridShape s({2, 3, 4});
  CHECK(s.sub_shape({0, 2}) == GridShape({2, 4}));
  CHECK_THROWS_AS(s.sub_shape({}), ArgumentError);
  CHECK_THROWS_AS(s.sub_shape({2, 0}), ArgumentError);  // must be sorted
}

TEST_CASE("restrictions") {
  Restriction rho({Restriction::kStar, 1, Restriction::kStar});
  CHECK(rho.num_stars() == 2);
  CHECK(rho.stars() == std::vector<int>{0, 2});
  CHECK(rho.to_string() == "(*,1,*)");
  GridShape s({2, 3, 2});
  rho.validate_against(s);
  Restriction bad({Restriction::kStar, 3, Restriction::kStar});
  CHECK_THROWS_AS(bad.validate_against(s), ArgumentError);
  CHECK(Restriction::all_stars(3).num_stars() == 3);
  CHECK(Restriction::fix_all({1, 2, 0}).num_stars() == 0);
}

TEST_CASE("subset enumeration") {
  CHECK(enumerate_subsets(3).size() == 8);
  CHECK(enumerate_subsets_of_size(4, 2).size() == 6);
  CHECK(enumerate_subsets_of_size(4, 0).size() == 1);
  CHECK(complement_of({1, 3}, 5) == std::vector<int>{0, 2, 4});
}
