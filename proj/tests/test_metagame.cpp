#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "coarse/engine.hpp"
#include "coarse/errors.hpp"
#include "coarse/metagame.hpp"
#include "coarse/registry.hpp"
#include "support.hpp"

using namespace coarse;
using testing::Harness;
using J = Json;

namespace {

struct Played {
  std::unique_ptr<MetaRobber> robber;
  Trace trace;
};

Played play(const std::string& preset, const std::string& space, const std::string& cops, std::int64_t sigma,
            std::int64_t rho, std::int64_t horizon, std::uint64_t seed = 1) {
  auto cop = make_cop(cops, J{{"sigma", sigma}, {"rho", rho}});
  Played p{make_meta_robber(preset), {}};
  RunOptions o;
  o.variant = GameVariant::Strong;
  o.horizon = horizon;
  o.seed = seed;
  p.trace = run_match(Space::parse(space), *cop, *p.robber, o);
  return p;
}

bool passes(const std::vector<ObligationResult>& results, const std::string& name) {
  for (const auto& r : results)
    if (r.name == name) return r.pass;
  FAIL("missing obligation " << name);
  return false;
}

}  // namespace

TEST_CASE("z2 preset rounds rho up to a multiple of sigma") {
  {
    Harness h(Space::grid(2), GameVariant::Strong);
    auto robber = make_meta_robber("z2");
    h.negotiate(*robber, 1, 5);
    const auto& s = robber->setup();
    CHECK(s.rhoPrime == 5);
    CHECK(s.spacing == 20);
    CHECK(s.lambda == 5);
    CHECK(h.ctx.params.psi == 24);
    CHECK(h.ctx.params.bigR == 4 * 24 * 5);
    CHECK(s.oracleSigma == 2);
    CHECK(s.oracleRho == 3);
  }
  {
    Harness h(Space::grid(2), GameVariant::Strong);
    auto robber = make_meta_robber("z2");
    h.negotiate(*robber, 2, 5);
    CHECK(robber->setup().rhoPrime == 6);
    CHECK(robber->setup().lambda == 3);
    CHECK(h.ctx.params.psi == 48);
  }
}

TEST_CASE("lamplighter preset constants") {
  Harness h(Space::parse("lamp:2"), GameVariant::Strong);
  auto robber = make_meta_robber("lamplighter:2");
  h.negotiate(*robber, 1, 2);
  const auto& s = robber->setup();
  CHECK(s.oracleSigma == 10);
  CHECK(s.oracleRho == 32);
  CHECK(s.j == 2);
  CHECK(s.rhoPrime == 2);
  CHECK(s.lambda == 2);
  CHECK(h.ctx.params.psi == 91);
  CHECK(h.ctx.params.bigR == 194);
  CHECK(h.all_passed());
}

TEST_CASE("z2 meta robber meets every obligation") {
  auto p = play("z2", "grid:2", "greedy:2", 1, 4, 4 * 6 + 1);
  CHECK(is_horizon(p.trace.outcome));
  for (const auto& a : p.trace.assertions) CHECK_MESSAGE(a.pass, a.name << " " << a.detail);
  const auto& s = p.robber->setup();
  REQUIRE(p.robber->records().size() == 6);
  for (const auto& rec : p.robber->records()) {
    const auto d = *Space::grid(2).distance(rec.waypoints.front(), rec.waypoints.back(), 1000);
    CHECK(d <= 4 * 4 * Z2OracleParams::psi);
    CHECK(rec.walked <= s.lambda * s.psi);
    for (const auto& r : assert_meta_obligations(rec, p.robber->family(), s)) CHECK_MESSAGE(r.pass, r.name);
  }
}

TEST_CASE("lamplighter meta robber meets every obligation") {
  auto p = play("lamplighter:2", "lamp:2", "greedy", 1, 2, 13);
  CHECK(is_horizon(p.trace.outcome));
  for (const auto& a : p.trace.assertions) CHECK_MESSAGE(a.pass, a.name << " " << a.detail);
  CHECK(p.robber->records().size() == 6);
}

TEST_CASE("obligation checks catch mutated records") {
  auto p = play("z2", "grid:2", "random", 1, 4, 9);
  const auto& family = p.robber->family();
  const auto& s = p.robber->setup();
  REQUIRE_FALSE(p.robber->records().empty());
  const auto original = p.robber->records().front();
  CHECK(passes(assert_meta_obligations(original, family, s), "meta.b-projected-cops"));

  auto teleported = original;
  for (auto& c : teleported.copsAtEnd) c = grid_vertex({500, 500});
  CHECK_FALSE(passes(assert_meta_obligations(teleported, family, s), "meta.b-projected-cops"));

  auto crowded = original;
  crowded.copCheckpoints.push_back(crowded.robberCheckpoints.back());
  CHECK_FALSE(passes(assert_meta_obligations(crowded, family, s), "meta.c-separation"));

  auto long_walk = original;
  long_walk.walked = s.lambda * s.psi + 1;
  CHECK_FALSE(passes(assert_meta_obligations(long_walk, family, s), "meta.a-walk"));

  auto escaped = original;
  escaped.robberCheckpoints.push_back(grid_vertex({100000, 0}));
  CHECK_FALSE(passes(assert_meta_obligations(escaped, family, s), "meta.d-ball"));
}

TEST_CASE("a stationary cop has zero projected displacement") {
  auto p = play("z2", "grid:2", "random", 1, 4, 9);
  auto rec = p.robber->records().front();
  rec.copsAtEnd = rec.copsAtStart;
  const auto results = assert_meta_obligations(rec, p.robber->family(), p.robber->setup());
  for (const auto& r : results)
    if (r.name == "meta.b-projected-cops") CHECK(r.detail.rfind("max=0", 0) == 0);
}

TEST_CASE("custom preset files") {
  const std::string path = "meta_preset_test.json";
  {
    std::ofstream out(path);
    out << R"({"family": "lamplighter:2", "oracle": "lamplighter"})";
  }
  auto robber = make_meta_robber("custom:" + path);
  CHECK(robber->family().name == "lamplighter:2");
  {
    std::ofstream out(path);
    out << R"({"family": "lamplighter:2"})";
  }
  CHECK_THROWS_AS(make_meta_robber("custom:" + path), MalformedInput);
  std::remove(path.c_str());
  CHECK_THROWS_AS(make_meta_robber("custom:/nonexistent.json"), MalformedInput);
  CHECK_THROWS_AS(make_meta_robber("hyperbolic"), MalformedInput);
}

TEST_CASE("meta robber refuses a space other than its family's") {
  auto p = play("z2", "lamp:2", "greedy", 1, 4, 5);
  REQUIRE(is_forfeit(p.trace.outcome));
  CHECK(std::get<Forfeit>(p.trace.outcome).kind == ForfeitKind::StrategyUnavailable);
}
