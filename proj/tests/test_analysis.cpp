#include <doctest.h>

#include <sstream>

#include "coarse/analysis.hpp"
#include "coarse/errors.hpp"
#include "support.hpp"

using namespace coarse;
using testing::V;
using J = Json;

TEST_CASE("trees and the line have only 0-thin bigons") {
  CHECK(bigon_thinness_scan(Space::free_tree(2), 3).maxWidth == 0);
  CHECK(bigon_thinness_scan(Space::line(), 5).maxWidth == 0);
}

TEST_CASE("grid scan finds the staircase width 2L") {
  const auto g = Space::grid(2);
  for (std::int64_t L : {1, 2, 3}) {
    const auto r = bigon_thinness_scan(g, L);
    CHECK(r.maxWidth == 2 * L);
    REQUIRE(r.witness.has_value());
    CHECK_NOTHROW(validate_bigon(g, *r.witness));
  }
}

TEST_CASE("exact-width bigon on the grid") {
  const auto g = Space::grid(2);
  const auto w = find_bigon_exact_width(g, 34);
  CHECK(w.delta == 34);
  CHECK(w.length() == 34);
  CHECK(bigon_width(g, w.gamma, w.gammaPrime) == 34);
  CHECK(*g.distance(w.gamma[static_cast<std::size_t>(w.t)], w.gammaPrime[static_cast<std::size_t>(w.t)], 40) == 34);
  CHECK_NOTHROW(validate_bigon(g, w));
  CHECK_NOTHROW(validate_bigon(g, w.swapped()));
  CHECK_NOTHROW(validate_bigon(g, w.reversed()));
  CHECK(w.reversed().t == w.length() - w.t);

  CHECK_THROWS_AS(find_bigon_exact_width(Space::free_tree(2), 2), StrategyUnavailable);
  CHECK_THROWS_AS(find_bigon_exact_width(g, 1), StrategyUnavailable);
}

TEST_CASE("validate_bigon rejects a non-geodesic or a wrong width") {
  const auto g = Space::grid(2);
  auto w = find_bigon_exact_width(g, 4);
  auto wrongWidth = w;
  wrongWidth.delta = 6;
  CHECK_THROWS_AS(validate_bigon(g, wrongWidth), InvariantViolation);
  auto detour = w;
  detour.gamma.insert(detour.gamma.begin() + 1, {V(g, J{-1, 0}), g.base()});
  CHECK_THROWS_AS(validate_bigon(g, detour), InvariantViolation);
}

TEST_CASE("bigon detour connects the two anchors") {
  const auto g = Space::grid(2);
  auto w = find_bigon_exact_width(g, 6);
  const auto path = bigon_detour(g, w);
  const auto t = static_cast<std::size_t>(w.t);
  CHECK(path.front() == w.gamma[t]);
  CHECK(path.back() == w.gammaPrime[t]);
  for (std::size_t i = 1; i < path.size(); ++i) CHECK(g.adjacent(path[i - 1], path[i]));
}

TEST_CASE("bottleneck witness for lambda 2") {
  const auto g = Space::grid(2);
  const auto w = bottleneck_witness(g, 2);
  CHECK(w.x == V(g, J{-13, 0}));
  CHECK(w.y == V(g, J{0, 0}));
  CHECK(w.z == V(g, J{13, 0}));
  std::int64_t gap = 1000;
  for (const auto& v : w.gamma) gap = std::min(gap, *g.distance(w.y, v, 1000));
  CHECK(gap == 13);
  CHECK(gap > 6 * 2);
  CHECK(w.lambdaBound >= 2);

  auto broken = w;
  broken.gamma.insert(broken.gamma.begin() + 1, V(g, J{-12, 0}));
  CHECK_THROWS_AS(validate_bottleneck(g, broken), InvariantViolation);
  CHECK_THROWS_AS(bottleneck_witness(Space::free_tree(2), 2), StrategyUnavailable);
}

TEST_CASE("horizontal displacement in bs(2)") {
  const auto b = Space::parse("bs:2");
  CHECK(hd(b, 1, 4) == 16);
  CHECK(hd(b, 0, 1) == 1);
  CHECK(hd(b, 1, 2) < 8);
  CHECK(hd(b, 2, 4) < 64);
  CHECK_THROWS(hd(Space::grid(2), 1, 1));
}

TEST_CASE("hd table has one row per height and reach") {
  std::ostringstream out;
  write_hd_csv(out, Space::parse("bs:2"), 1, 2);
  std::istringstream in(out.str());
  std::string line;
  int rows = 0;
  std::getline(in, line);
  CHECK(line.find("reach") != std::string::npos);
  while (std::getline(in, line)) rows += line.empty() ? 0 : 1;
  CHECK(rows == 4);
}
