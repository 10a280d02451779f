#include <doctest.h>

#include <random>

#include "coarse/errors.hpp"
#include "coarse/space.hpp"
#include "support.hpp"

using namespace coarse;
using testing::keys;
using testing::V;
using J = Json;

TEST_CASE("grid neighbors are the four unit steps") {
  const auto g = Space::parse("grid:2");
  CHECK(keys(g, g.neighbors(g.base())) == keys(g, {J{1, 0}, J{-1, 0}, J{0, 1}, J{0, -1}}));
}

TEST_CASE("grid variation neighbors at m=2") {
  const auto g = Space::parse("gridvar:2");
  const auto expected = keys(g, {J{2, 0}, J{-2, 0}, J{0, 2}, J{0, -2}, J{1, 1}, J{-1, -1}, J{1, -1}, J{-1, 1}});
  CHECK(keys(g, g.neighbors(g.base())) == expected);
}

TEST_CASE("lamplighter neighbors bundle a lamp change with a step") {
  const auto l = Space::parse("lamp:2");
  const auto expected = keys(l, {J{{"lamps", J::array()}, {"pos", 1}},
                                 J{{"lamps", J{J{0, 1}}}, {"pos", 1}},
                                 J{{"lamps", J::array()}, {"pos", -1}},
                                 J{{"lamps", J{J{-1, 1}}}, {"pos", -1}}});
  CHECK(keys(l, l.neighbors(l.base())) == expected);
}

TEST_CASE("bs right multiplication by a shifts by m^k") {
  const auto b = Space::parse("bs:2");
  const auto t1 = V(b, J{{"num", "0"}, {"exp", 0}, {"k", 1}});
  const auto expected = b.serialize(V(b, J{{"num", "2"}, {"exp", 0}, {"k", 1}}));
  CHECK(keys(b, b.neighbors(t1)).count(expected) == 1);
  CHECK(b.neighbors(t1).size() == 4);
}

TEST_CASE("distances on small examples") {
  const auto g = Space::parse("grid:2");
  CHECK(g.distance(g.base(), V(g, J{3, 4}), 10) == 7);
  CHECK_FALSE(g.distance(g.base(), V(g, J{3, 4}), 6).has_value());

  const auto l = Space::parse("lamp:2");
  const auto lit = V(l, J{{"lamps", J{J{0, 1}}}, {"pos", 0}});
  CHECK(l.distance(l.base(), lit, 4) == 2);
  CHECK(l.bfs_distance(l.base(), lit, 4) == 2);

  const auto b = Space::parse("bs:2");
  CHECK(b.distance(b.base(), V(b, J{{"num", "0"}, {"exp", 0}, {"k", 3}}), 5) == 3);

  for (const auto* spec : {"grid:3", "gridvar:3", "lamp:3", "bs:3", "line", "free-tree:2"}) {
    const auto s = Space::parse(spec);
    CHECK(s.distance(s.base(), s.base(), 0) == 0);
  }
}

TEST_CASE("geodesics follow the serialization tie-break") {
  const auto g = Space::parse("grid:2");
  const auto straight = g.geodesic(g.base(), V(g, J{2, 0}), 5);
  CHECK(keys(g, straight) == keys(g, {J{0, 0}, J{1, 0}, J{2, 0}}));
  const auto diag = g.geodesic(g.base(), V(g, J{1, 1}), 5);
  REQUIRE(diag.size() == 3);
  CHECK(g.serialize(diag[1]) == "[0,1]");
  CHECK(g.geodesic(g.base(), g.base(), 0).size() == 1);
  CHECK_THROWS_AS(g.geodesic(g.base(), V(g, J{5, 5}), 3), ExceedsCutoff);
}

TEST_CASE("ball sizes") {
  const auto g = Space::parse("grid:2");
  CHECK(g.ball(g.base(), 1).size() == 5);
  CHECK(g.ball(g.base(), 3).size() == 25);
  const auto t = Space::parse("free-tree:2");
  CHECK(t.ball(t.base(), 2).size() == 17);
  CHECK_THROWS_AS(g.ball(g.base(), 50, 100), ResourceLimit);
}

TEST_CASE("bs ball of radius 4 around t reaches the axis at 16") {
  const auto b = Space::parse("bs:2");
  const auto t1 = V(b, J{{"num", "0"}, {"exp", 0}, {"k", 1}});
  mpz_class widest = 0;
  for (const auto& v : b.ball(t1, 4)) {
    const auto& x = std::get<BsVertex>(v);
    if (x.exp == 0) widest = std::max(widest, mpz_class(abs(x.num)));
  }
  CHECK(widest == 16);
}

TEST_CASE("malformed specs and vertices are rejected") {
  for (const auto* bad : {"grid:0", "grid", "bogus", "lamp:0", "bs:0", "free-tree:0", "lamp:2:0"})
    CHECK_THROWS_AS(Space::parse(bad), MalformedInput);
  const auto g = Space::parse("grid:2");
  CHECK_THROWS_AS(g.from_json(J{1, 2, 3}), MalformedInput);
  CHECK_THROWS_AS(g.from_json(J{{"pos", 1}}), MalformedInput);
  const auto l = Space::parse("lamp:2");
  CHECK_THROWS_AS(l.from_json(J{{"lamps", J{J{0, 5}}}, {"pos", 0}}), MalformedInput);
  CHECK_THROWS_AS(g.distance(g.base(), l.base(), 3), MalformedInput);
}

TEST_CASE("serialization is bit-exact and round-trips") {
  const auto b = Space::parse("bs:2");
  const auto v = V(b, J{{"num", "3"}, {"exp", 1}, {"k", -2}});
  CHECK(b.serialize(v) == R"({"num":"3","exp":1,"k":-2})");
  const auto l = Space::parse("lamp:2");
  const auto lv = V(l, J{{"lamps", J{J{-1, 1}, J{2, 1}}}, {"pos", 4}});
  CHECK(l.serialize(lv) == R"({"lamps":[[-1,1],[2,1]],"pos":4})");
  CHECK_THROWS_AS(l.from_json(J{{"lamps", J{J{2, 1}, J{-1, 1}}}, {"pos", 4}}), MalformedInput);
  for (const auto* spec : {"grid:2", "gridvar:2", "lamp:2", "bs:2", "free-tree:2", "line"}) {
    const auto s = Space::parse(spec);
    for (const auto& x : s.ball(s.base(), 3)) CHECK(s.from_json(s.to_json(x)) == x);
  }
}

TEST_CASE("adjacency is symmetric and the metric axioms hold on samples") {
  for (const auto* spec : {"grid:2", "gridvar:3", "lamp:2", "lamp:3:2", "bs:2", "bs:3", "free-tree:2"}) {
    const auto s = Space::parse(spec);
    const auto ball = s.ball(s.base(), 2);
    for (const auto& v : ball)
      for (const auto& u : s.neighbors(v)) CHECK(s.adjacent(u, v));
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
    for (int i = 0; i < 40; ++i) {
      const auto& a = ball[pick(rng)];
      const auto& b = ball[pick(rng)];
      const auto& c = ball[pick(rng)];
      const auto ab = *s.bfs_distance(a, b, 8), ba = *s.bfs_distance(b, a, 8);
      CHECK(ab == ba);
      CHECK(ab <= *s.bfs_distance(a, c, 8) + *s.bfs_distance(c, b, 8));
      CHECK((ab == 0) == (a == b));
    }
  }
}

TEST_CASE("closed forms agree with BFS on radius-3 balls") {
  for (const auto* spec : {"grid:2", "grid:3", "lamp:2", "lamp:3", "line"}) {
    const auto s = Space::parse(spec);
    REQUIRE(s.has_closed_form());
    const auto ball = s.ball(s.base(), 3);
    std::size_t stride = ball.size() > 120 ? ball.size() / 120 : 1;
    for (std::size_t i = 0; i < ball.size(); i += stride)
      for (std::size_t j = 0; j < ball.size(); j += stride)
        CHECK(s.closed_form_distance(ball[i], ball[j]) == s.bfs_distance(ball[i], ball[j], 8));
  }
}

TEST_CASE("geodesics have exact length and adjacent steps") {
  for (const auto* spec : {"grid:2", "lamp:2", "bs:2", "gridvar:2", "free-tree:2"}) {
    const auto s = Space::parse(spec);
    const auto ball = s.ball(s.base(), 3);
    for (std::size_t i = 0; i < ball.size(); i += 7) {
      const auto path = s.geodesic(s.base(), ball[i], 6);
      CHECK(static_cast<std::int64_t>(path.size()) - 1 == *s.distance(s.base(), ball[i], 6));
      for (std::size_t k = 1; k < path.size(); ++k) CHECK(s.adjacent(path[k - 1], path[k]));
      CHECK(path.back() == ball[i]);
    }
  }
}

TEST_CASE("left translation is an isometry") {
  const auto l = Space::parse("lamp:2");
  const auto g = V(l, J{{"lamps", J{J{1, 1}, J{3, 1}}}, {"pos", 2}});
  const auto ball = l.ball(l.base(), 3);
  for (std::size_t i = 0; i + 1 < ball.size(); i += 5) {
    const auto d = l.distance(ball[i], ball[i + 1], 20);
    CHECK(l.distance(l.multiply(g, ball[i]), l.multiply(g, ball[i + 1]), 20) == d);
  }
  CHECK(l.multiply(g, l.inverse(g)) == l.base());
}

TEST_CASE("word length bound certifies bs elements beyond search range") {
  const auto b = Space::parse("bs:2");
  const auto far = bs::make(2, mpz_class(1) << 40, 0, 0);
  const auto bound = b.word_length_bound(b.base(), Vertex(far));
  REQUIRE(bound.has_value());
  CHECK(*bound >= 40);
  CHECK(*bound <= 3 * 41);
}
