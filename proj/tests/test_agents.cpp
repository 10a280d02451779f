#include <doctest.h>

#include "coarse/agents.hpp"
#include "coarse/errors.hpp"
#include "coarse/registry.hpp"
#include "support.hpp"

using namespace coarse;
using testing::Harness;
using testing::V;
using J = Json;

namespace {

std::int64_t d(const Space& s, const Vertex& a, const Vertex& b) { return *s.distance(a, b, 1000); }

MovePath move_robber(RobberAgent& robber, std::int64_t stage, const std::vector<Vertex>& cops, const Vertex& at) {
  const std::vector<MovePath> none;
  return robber.move(View{stage, cops, at, none});
}

std::vector<MovePath> move_cops(CopAgent& cop, const std::vector<Vertex>& cops, const Vertex& robber) {
  const std::vector<MovePath> none;
  return cop.move(View{1, cops, robber, none});
}

}  // namespace

// ---------------------------------------------------------------- cops

TEST_CASE("greedy cop closes sigma steps of l1 distance") {
  Harness h(Space::grid(2));
  h.ctx.params.sigma = 2;
  GreedyCop cop(CopConfig{1, 2, 1});
  cop.attach(h.ctx);
  const auto target = V(h.ctx.space, J{5, 5});
  const auto paths = move_cops(cop, {h.ctx.space.base()}, target);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].size() == 3);
  CHECK(d(h.ctx.space, paths[0].back(), target) == 8);
}

TEST_CASE("pursuit paths strictly approach the target") {
  for (const auto* spec : {"grid:2", "lamp:2", "bs:2", "free-tree:2"}) {
    const auto s = Space::parse(spec);
    const auto ball = s.ball(s.base(), 3);
    const auto& target = ball.back();
    const auto path = pursuit_path(s, s.base(), target, 2);
    for (std::size_t i = 1; i < path.size(); ++i) {
      CHECK(s.adjacent(path[i - 1], path[i]));
      CHECK(d(s, path[i], target) < d(s, path[i - 1], target));
    }
  }
}

TEST_CASE("pusher walks toward the robber and stops beside it") {
  Harness h(Space::line());
  PusherCop cop(CopConfig{1, 1, 1});
  cop.attach(h.ctx);
  const auto paths = move_cops(cop, {h.ctx.space.base()}, V(h.ctx.space, J{10}));
  CHECK(paths[0].back() == V(h.ctx.space, J{1}));
  Harness grid(Space::grid(2));
  CHECK_THROWS_AS(cop.attach(grid.ctx), StrategyUnavailable);
}

TEST_CASE("random cop takes legal walks") {
  Harness h(Space::parse("lamp:2"));
  h.ctx.params.sigma = 3;
  RandomCop cop(CopConfig{2, 3, 1});
  cop.attach(h.ctx);
  const auto placed = cop.place();
  CHECK(placed.size() == 2);
  const auto paths = move_cops(cop, placed, h.ctx.space.base());
  for (std::size_t i = 0; i < paths.size(); ++i)
    CHECK_FALSE(path_violation(h.ctx.space, paths[i], placed[i], 3, "sigma").has_value());
}

TEST_CASE("scripted cop reproduces a recorded game") {
  const auto l = Space::parse("lamp:2");
  RunOptions o;
  o.horizon = 30;
  o.seed = 4;
  auto original = make_cop("random:2", J{{"sigma", 2}, {"rho", 2}});
  LamplighterEvader r1;
  const auto t = run_match(l, *original, r1, o);
  ScriptedCop scripted(t);
  LamplighterEvader r2;
  const auto again = run_match(l, scripted, r2, o);
  REQUIRE(again.stages.size() == t.stages.size());
  for (std::size_t i = 0; i < t.stages.size(); ++i) CHECK(again.stages[i].copMoves == t.stages[i].copMoves);
}

// ---------------------------------------------------------------- bigon

TEST_CASE("bigon evader commits to psi = 96 sigma and a width-34 staircase") {
  Harness h(Space::grid(2), GameVariant::Strong);
  BigonEvader robber;
  h.negotiate(robber, 1, 1);
  CHECK(h.ctx.params.psi == 96);
  CHECK(robber.delta() == 34);
  CHECK(h.all_passed());
  const auto& w = robber.witness();
  CHECK(d(h.ctx.space, w.gamma.front(), w.gamma.back()) == 34);
}

TEST_CASE("bigon evader triggers below 5 lambda and not above") {
  Harness h(Space::grid(2), GameVariant::Strong);
  BigonEvader robber;
  h.negotiate(robber, 1, 1);
  const auto& s = h.ctx.space;
  const std::vector<Vertex> farCops{V(s, J{-100, -100})};
  const auto anchor = robber.place(farCops);
  const auto& c = std::get<GridVertex>(anchor).coords;

  // lambda = delta / 16 = 2.125: distance 10 = 5 lambda - 0.6, distance 14 = 5 lambda + 3.4.
  const std::vector<Vertex> distant{grid_vertex({c[0] - 14, c[1]})};
  CHECK(move_robber(robber, 1, distant, anchor).size() == 1);
  CHECK(robber.traversals() == 0);

  const std::vector<Vertex> close{grid_vertex({c[0] - 10, c[1]})};
  const auto path = move_robber(robber, 2, close, anchor);
  CHECK(path.size() > 1);
  CHECK(robber.traversals() == 1);
  CHECK(h.all_passed());
}

// ---------------------------------------------------------------- bottleneck

TEST_CASE("bottleneck evader keeps its two-state invariant") {
  Harness h(Space::grid(2));
  BottleneckEvader robber;
  h.negotiate(robber, 1, 1);
  CHECK(robber.lambda() == 2);
  CHECK(h.ctx.params.psi == 65);
  CHECK(h.ctx.params.bigR == 26);
  const auto& s = h.ctx.space;
  const auto& w = robber.witness();

  const std::vector<Vertex> away{V(s, J{0, -20})};
  CHECK(robber.place(away) == w.y);
  CHECK(move_robber(robber, 1, away, w.y) == MovePath{w.y});

  const std::vector<Vertex> near{V(s, J{0, -7})};
  const auto escape = move_robber(robber, 2, near, w.y);
  CHECK(escape.back() == w.x);

  const auto back = move_robber(robber, 3, away, w.x);
  CHECK(back.back() == w.y);
  CHECK(h.all_passed());
}

// ---------------------------------------------------------------- lamplighter

TEST_CASE("lamplighter evader positions and parameters for one cop") {
  Harness h(Space::parse("lamp:2"));
  LamplighterEvader robber;
  h.negotiate(robber, 1, 1);
  CHECK(robber.a(1) == 1);
  CHECK(robber.b(1) == 4);
  CHECK(robber.b(1) - robber.a(1) > 2);
  CHECK(h.ctx.params.psi == 9);
  CHECK(h.ctx.params.psi <= 10);
  CHECK(h.ctx.params.bigR == 9);

  const auto& s = h.ctx.space;
  const auto placed = robber.place({s.base()});
  CHECK(placed == V(s, J{{"lamps", J{J{1, 1}, J{4, 1}}}, {"pos", 1}}));

  const auto loop = move_robber(robber, 1, {s.base()}, placed);
  CHECK(static_cast<std::int64_t>(loop.size()) - 1 == robber.loop_length());
  CHECK(loop.back() == placed);
  CHECK(h.all_passed());
}

TEST_CASE("lamplighter evader survives greedy cops") {
  const auto l = Space::parse("lamp:2");
  RunOptions o;
  o.horizon = 60;
  o.seed = 2;
  auto cop = make_cop("greedy:2", J{{"sigma", 2}, {"rho", 2}});
  LamplighterEvader robber;
  const auto t = run_match(l, *cop, robber, o);
  CHECK(is_horizon(t.outcome));
  for (const auto& a : t.assertions) CHECK_MESSAGE(a.pass, a.name);
}

TEST_CASE("lamplighter evader refuses other spaces") {
  Harness h(Space::grid(2));
  LamplighterEvader robber;
  CHECK_THROWS_AS(h.negotiate(robber, 1, 1), StrategyUnavailable);
}

// ---------------------------------------------------------------- bs sheets

TEST_CASE("bs sheet evader constants") {
  Harness h(Space::parse("bs:2"), GameVariant::Strong);
  BsSheetEvader robber;
  h.negotiate(robber, 2, 7);
  CHECK(h.ctx.params.psi == 34);
  CHECK(h.ctx.params.bigR == (mpz_class(1) << 56) + 56 + 1);
}

TEST_CASE("bs sheet evader places on a cop-free sheet") {
  Harness h(Space::parse("bs:2"), GameVariant::Strong);
  BsSheetEvader robber;
  h.negotiate(robber, 2, 7);
  const Vertex climber = bs::make(2, 0, 0, 5);
  CHECK(robber.in_upper_part(0, climber));
  CHECK_FALSE(robber.in_upper_part(1, climber));
  CHECK(robber.place({climber}) == Vertex(bs::make(2, 1, 0, 56)));
  CHECK(robber.place({h.ctx.space.base()}) == Vertex(bs::make(2, 0, 0, 56)));
}

TEST_CASE("bs flee path for two cops has length 16 rho + 3") {
  Harness h(Space::parse("bs:3"), GameVariant::Strong);
  h.ctx.params.n = 2;
  BsSheetEvader robber;
  h.negotiate(robber, 2, 10);
  CHECK(robber.internal_rho() == 10);
  const auto path = robber.flee_path(0, 1, 1);
  CHECK(static_cast<std::int64_t>(path.size()) - 1 == 16 * 10 + 3);
  CHECK(path.front() == Vertex(bs::make(3, 0, 0, 80)));
  CHECK(path.back() == Vertex(bs::make(3, 1, 0, 80)));
  for (std::size_t i = 1; i < path.size(); ++i) CHECK(h.ctx.space.adjacent(path[i - 1], path[i]));
  for (const auto& x : path) CHECK(robber.in_sheets(x));
}

TEST_CASE("bs sheet evader needs more sheets than cops") {
  Harness h(Space::parse("bs:2"), GameVariant::Strong);
  h.ctx.params.n = 2;
  BsSheetEvader robber;
  CHECK_THROWS_AS(h.negotiate(robber, 2, 7), StrategyUnavailable);
}

// ---------------------------------------------------------------- greedy evader

TEST_CASE("greedy evader stays home when the cop is far") {
  Harness h(Space::grid(2));
  GreedyEvader robber(GreedyEvaderConfig{});
  h.negotiate(robber, 1, 1);
  const auto& s = h.ctx.space;
  const std::vector<Vertex> cops{V(s, J{40, 40})};
  CHECK(robber.place(cops) == s.base());
  CHECK(move_robber(robber, 1, cops, s.base()) == MovePath{s.base()});
}

TEST_CASE("greedy evader runs psi steps from an adjacent cop on the line") {
  Harness h(Space::line());
  GreedyEvaderConfig cfg;
  cfg.margin = 0;
  GreedyEvader robber(cfg);
  h.negotiate(robber, 1, 1);
  const auto& s = h.ctx.space;
  const auto path = move_robber(robber, 1, {s.base()}, V(s, J{1}));
  CHECK(path.back() == V(s, J{4}));
}

TEST_CASE("greedy evader is caught when surrounded") {
  Harness h(Space::grid(2));
  GreedyEvaderConfig cfg;
  cfg.psi = 1;
  GreedyEvader robber(cfg);
  h.negotiate(robber, 1, 1);
  const auto& s = h.ctx.space;
  const std::vector<Vertex> ring{V(s, J{2, 0}), V(s, J{-2, 0}), V(s, J{0, 2}), V(s, J{0, -2})};
  CHECK_THROWS_AS(move_robber(robber, 1, ring, s.base()), OracleCaught);
}

// ---------------------------------------------------------------- projection

TEST_CASE("projection evader sees and moves in one coordinate plane") {
  Harness h(Space::grid(3));
  ProjectionEvader robber(make_robber("greedy-evader"), 0, 1);
  h.negotiate(robber, 1, 1);
  const auto& s = h.ctx.space;
  CHECK(robber.project(V(s, J{5, 5, 9})) == grid_vertex({5, 5}));
  CHECK(robber.lift(grid_vertex({1, 0}), V(s, J{0, 0, 7})) == V(s, J{1, 0, 7}));
  const auto ball = s.ball(s.base(), 3);
  for (std::size_t i = 0; i + 1 < ball.size(); i += 3) {
    const auto planar = Space::grid(2).distance(robber.project(ball[i]), robber.project(ball[i + 1]), 100);
    CHECK(*planar <= d(s, ball[i], ball[i + 1]));
  }
  const auto path = move_robber(robber, 1, {V(s, J{2, 0, 0})}, V(s, J{0, 0, 4}));
  for (const auto& x : path) CHECK(std::get<GridVertex>(x).coords[2] == 4);
  CHECK_THROWS_AS(ProjectionEvader(make_robber("greedy-evader"), 1, 1), MalformedInput);
}

// ---------------------------------------------------------------- registry

TEST_CASE("registry resolves specs and rejects unknown ones") {
  CHECK(make_robber("greedy-evader:2")->id() == "greedy-evader");
  CHECK(make_robber("proj:0,2:bottleneck")->id() == "proj:bottleneck");
  CHECK(make_cop("greedy:3")->count() == 3);
  CHECK_THROWS_AS(make_robber("nope"), MalformedInput);
  CHECK_THROWS_AS(make_cop("greedy:0"), MalformedInput);
  CHECK_THROWS_AS(make_cop("scripted:/nonexistent/trace.jsonl"), MalformedInput);
}
