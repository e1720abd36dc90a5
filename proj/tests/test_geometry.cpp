#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <vector>

#include "gkl/geometry.hpp"

using namespace gkl;

TEST_CASE("euclidean distance") {
  const double a[2] = {0.0, 0.0};
  const double b[2] = {3.0, 4.0};
  CHECK(euclidean_distance({a, 2}, {b, 2}) == doctest::Approx(5.0));
}

TEST_CASE("separation distance of {(0,0),(3,4)} is 2.5") {
  auto set = explicit_points({0.0, 0.0, 3.0, 4.0}, 2);
  CHECK(separation_distance(set) == doctest::Approx(2.5));
  auto one = explicit_points({0.0, 0.0}, 2);
  CHECK_THROWS_AS(separation_distance(one), std::invalid_argument);
}

TEST_CASE("fill distance of {0, 1} against {0, 0.25, 0.5, 0.75, 1}") {
  auto selected = explicit_points({0.0, 1.0}, 1);
  auto evaluation = explicit_points({0.0, 0.25, 0.5, 0.75, 1.0}, 1);
  CHECK(fill_distance(selected, evaluation) == doctest::Approx(0.5));
  auto empty = explicit_points({}, 1);
  CHECK_THROWS_AS(fill_distance(empty, evaluation), std::invalid_argument);
}

TEST_CASE("uniform grid includes endpoints and has the full tensor count") {
  auto grid = uniform_grid(3, 2);
  CHECK(grid.size() == 9);
  CHECK(grid.provenance.kind == CandidateSet::Provenance::Kind::UniformGrid);
  std::set<std::vector<double>> pts;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto p = grid.point(i);
    pts.insert({p.begin(), p.end()});
  }
  CHECK(pts.count({0.0, 0.0}) == 1);
  CHECK(pts.count({1.0, 1.0}) == 1);
  CHECK(pts.count({0.5, 0.5}) == 1);
  CHECK_THROWS_AS(uniform_grid(1, 1), std::invalid_argument);
}

TEST_CASE("random sampling is deterministic in the seed and lands in the unit cube") {
  auto a = sample_random(7, 500, 3);
  auto b = sample_random(7, 500, 3);
  auto c = sample_random(8, 500, 3);
  CHECK(a.coords == b.coords);
  CHECK(a.coords != c.coords);
  CHECK(a.size() == 500);
  for (double v : a.coords) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("slice projection replaces the axis coordinate, dedups and is idempotent") {
  auto set = explicit_points({0.1, 0.2, 0.9, 0.1, 0.2, 0.3, 0.5, 0.5, 0.5}, 3);
  auto proj = project_to_slice(set, 2, 0.5);
  // the first two points collide after projection
  CHECK(proj.size() == 2);
  for (std::size_t i = 0; i < proj.size(); ++i) CHECK(proj.point(i)[2] == 0.5);
  CHECK(proj.point(0)[0] == 0.1);
  CHECK(proj.point(0)[1] == 0.2);
  auto again = project_to_slice(proj, 2, 0.5);
  CHECK(again.coords == proj.coords);
  CHECK(proj.provenance.kind == CandidateSet::Provenance::Kind::SubdomainProjection);
  CHECK_THROWS_AS(project_to_slice(set, 3, 0.5), std::invalid_argument);
}

TEST_CASE("explicit points deduplicate keeping the first occurrence") {
  auto set = explicit_points({0.5, 0.25, 0.5, 0.75}, 1);
  CHECK(set.size() == 3);
  CHECK(set.point(0)[0] == 0.5);
  CHECK(set.point(1)[0] == 0.25);
  CHECK(set.point(2)[0] == 0.75);
}

TEST_CASE("fill distance shrinks and separation grows no larger as points are added") {
  auto evaluation = sample_random(3, 400, 2);
  auto pool = sample_random(4, 40, 2);
  double prev_fill = std::numeric_limits<double>::infinity();
  double prev_sep = std::numeric_limits<double>::infinity();
  std::vector<double> coords;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    auto p = pool.point(i);
    coords.insert(coords.end(), p.begin(), p.end());
    auto selected = explicit_points(coords, 2);
    const double fill = fill_distance(selected, evaluation);
    CHECK(fill <= prev_fill + 1e-15);
    prev_fill = fill;
    if (selected.size() >= 2) {
      const double sep = separation_distance(selected);
      CHECK(sep <= prev_sep + 1e-15);
      prev_sep = sep;
    }
  }
}

TEST_CASE("csv point loading round-trips") {
  const std::string path = "geometry_points_test.csv";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fputs("0.25,0.5\n0.75,0.125\n", f);
    std::fclose(f);
  }
  auto set = load_points_csv(path);
  CHECK(set.dim == 2);
  CHECK(set.size() == 2);
  CHECK(set.point(1)[1] == doctest::Approx(0.125));
  std::remove(path.c_str());
  CHECK_THROWS(load_points_csv("no_such_points_file.csv"));
}
