// Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic only.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "coarse/agents.hpp"
#include "coarse/analysis.hpp"
#include "coarse/engine.hpp"
#include "coarse/homothety.hpp"
#include "coarse/metagame.hpp"
#include "coarse/registry.hpp"

using namespace coarse;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::vector<std::string> problems;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (problems.size() < 5) problems.push_back(what);
  }
};

int failures = 0;

void report(const char* id, Verdict& v, Clock::time_point start) {
  const auto secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("%s %s  %s [%.1fs]\n", id, v.pass ? "PASS" : "FAIL", v.detail.str().c_str(), secs);
  for (const auto& p : v.problems) std::printf("    %s\n", p.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

RunOptions options(GameVariant variant, std::int64_t horizon, std::uint64_t seed) {
  RunOptions o;
  o.variant = variant;
  o.horizon = horizon;
  o.seed = seed;
  return o;
}

std::string tag(const std::string& cop, std::uint64_t seed) { return cop + " seed " + std::to_string(seed); }

/// Common per-match checks: the game ran to the horizon and no assertion failed.
void check_clean(Verdict& v, const Space& space, const Trace& t, const std::string& label) {
  v.require(!is_captured(t.outcome), label + ": captured");
  v.require(!is_forfeit(t.outcome), label + ": forfeit " + outcome_to_json(space, t.outcome).dump());
  for (const auto& a : t.assertions)
    if (!a.pass) {
      v.require(false, label + ": stage " + std::to_string(a.stage) + " " + a.name + " " + a.detail);
      break;
    }
}

bool all_in_ball(const Trace& t) {
  return std::all_of(t.stages.begin(), t.stages.end(), [](const StageRecord& s) { return s.inBall; });
}

std::size_t count_named(const Trace& t, const std::string& prefix) {
  return static_cast<std::size_t>(std::count_if(t.assertions.begin(), t.assertions.end(),
                                                [&](const AssertionRecord& a) { return a.name.rfind(prefix, 0) == 0; }));
}

const std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};

// ------------------------------------------------------------------ A1

void a1() {
  const auto start = Clock::now();
  Verdict v;
  const auto space = Space::parse("lamp:2");
  std::size_t matches = 0, checks = 0;
  for (std::int64_t n = 1; n <= 3; ++n)
    for (std::int64_t sigma = 1; sigma <= 3; ++sigma)
      for (std::int64_t rho = 1; rho <= 3; ++rho)
        for (const std::string kind : {"greedy", "random"})
          for (auto seed : kSeeds) {
            const std::string copSpec = kind + ":" + std::to_string(n);
            auto cop = make_cop(copSpec, Json{{"sigma", sigma}, {"rho", rho}});
            LamplighterEvader robber;
            const auto t = run_match(space, *cop, robber, options(GameVariant::Weak, 500, seed));
            const auto label = "n=" + std::to_string(n) + " s=" + std::to_string(sigma) + " r=" +
                               std::to_string(rho) + " " + tag(copSpec, seed);
            check_clean(v, space, t, label);
            const auto psi = 2 * (sigma + rho + n + 1) + 1;
            v.require(t.header.params.psi == psi, label + ": psi " + std::to_string(t.header.params.psi));
            v.require(t.header.params.bigR == psi, label + ": R " + t.header.params.bigR.get_str());
            v.require(static_cast<std::int64_t>(t.stages.size()) == 500, label + ": stopped early");
            v.require(all_in_ball(t), label + ": left B_R");
            v.require(count_named(t, "lamplighter.mismatch") == 500, label + ": mismatch not checked every stage");
            checks += t.assertions.size();
            ++matches;
          }
  v.detail << matches << " matches, " << checks << " assertion records, psi = R = 2(s+r+n+1)+1";
  report("A1", v, start);
}

// ------------------------------------------------------------------ A2

void a2() {
  const auto start = Clock::now();
  Verdict v;
  const auto space = Space::parse("bs:2");
  const std::int64_t sigma = 2, rho = 7, n = 1;
  // One flee walks at most 3n + 16 rho vertices at speed psi.
  const std::int64_t perStep = (3 * n + 16 * rho + 33) / 34;
  const std::int64_t horizon = std::max<std::int64_t>(400, 20 * perStep);
  std::int64_t flees = 0;
  std::size_t matches = 0;
  for (const std::string kind : {"greedy", "random"})
    for (auto seed : kSeeds) {
      auto cop = make_cop(kind, Json{{"sigma", sigma}, {"rho", rho}});
      BsSheetEvader robber;
      const auto t = run_match(space, *cop, robber, options(GameVariant::Strong, horizon, seed));
      const auto label = tag(kind, seed);
      check_clean(v, space, t, label);
      v.require(t.header.params.psi == 34, label + ": psi " + std::to_string(t.header.params.psi));
      v.require(all_in_ball(t), label + ": left B_R");
      v.require(count_named(t, "bs.in-sheets") == t.stages.size(), label + ": sheet region not checked every stage");
      flees += robber.flee_count();
      ++matches;
    }
  const auto hd14 = hd(space, 1, 4);
  v.require(hd14 == 16, "hd(bs:2, 1, 4) = " + hd14.get_str());
  std::string bands;
  for (std::int64_t r : {1, 2}) {
    const auto value = hd(space, r, 2 * r);
    const mpz_class bound = mpz_class(1) << static_cast<unsigned>(3 * r);
    v.require(value < bound, "hd(bs:2, " + std::to_string(r) + ", " + std::to_string(2 * r) + ") = " + value.get_str());
    bands += " hd(" + std::to_string(r) + "," + std::to_string(2 * r) + ")=" + value.get_str() + "<" + bound.get_str();
  }
  v.detail << matches << " matches, horizon " << horizon << ", " << flees << " flees; hd(1,4)=" << hd14.get_str()
           << ";" << bands;
  report("A2", v, start);
}

// ------------------------------------------------------------------ A3

void a3() {
  const auto start = Clock::now();
  Verdict v;
  const auto space = Space::parse("grid:2");
  std::size_t matches = 0, metaStages = 0, obligations = 0;
  for (std::int64_t n : {1, 2})
    for (std::int64_t rho : {4, 8})
      for (const std::string kind : {"greedy", "random"})
        for (auto seed : kSeeds) {
          auto cop = make_cop(kind + ":" + std::to_string(n), Json{{"sigma", 1}, {"rho", rho}});
          auto robber = make_meta_robber("z2");
          const std::int64_t lambda = rho;
          const auto t = run_match(space, *cop, *robber, options(GameVariant::Strong, 16 * lambda + 1, seed));
          const auto label = "n=" + std::to_string(n) + " rho=" + std::to_string(rho) + " " + tag(kind, seed);
          check_clean(v, space, t, label);
          const auto& s = robber->setup();
          v.require(t.header.params.psi == 4 * Z2OracleParams::psi * 1, label + ": psi " + std::to_string(t.header.params.psi));
          v.require(t.header.params.bigR == 4 * Z2OracleParams::R * rho, label + ": R " + t.header.params.bigR.get_str());
          v.require(s.lambda == lambda, label + ": lambda " + std::to_string(s.lambda));
          v.require(robber->records().size() >= 15, label + ": only " + std::to_string(robber->records().size()) + " meta-stages");
          for (const auto& rec : robber->records())
            for (const auto& r : assert_meta_obligations(rec, robber->family(), s)) {
              v.require(r.pass, label + ": meta-stage " + std::to_string(rec.index) + " " + r.name + " " + r.detail);
              ++obligations;
            }
          metaStages += robber->records().size();
          ++matches;
        }
  v.detail << matches << " matches, " << metaStages << " meta-stages, " << obligations
           << " obligations re-checked; psi=4*psi0*sigma, R=4*R0*rho (oracle success is empirical)";
  report("A3", v, start);
}

// ------------------------------------------------------------------ A4

void a4() {
  const auto start = Clock::now();
  Verdict v;
  const auto family = lamplighter_family(LampGroup::cyclic(2));
  v.require(family.A == 1 && family.B == 2, "A, B = " + family.A.get_str() + ", " + family.B.get_str());
  v.require(family.sigma_bar() == 10, "sigma bar = " + family.sigma_bar().get_str());
  v.require(family.rho_bar() == 32, "rho bar = " + family.rho_bar().get_str());
  const auto space = Space::parse("lamp:2");
  std::size_t metaStages = 0;
  std::int64_t j = 0, psi = 0;
  std::string R;
  for (auto seed : kSeeds) {
    auto cop = make_cop("greedy", Json{{"sigma", 1}, {"rho", 2}});
    auto robber = make_meta_robber("lamplighter:2");
    const auto t = run_match(space, *cop, *robber, options(GameVariant::Strong, 17, seed));
    const auto label = tag("greedy", seed);
    check_clean(v, space, t, label);
    const auto& s = robber->setup();
    j = s.j;
    psi = s.psi;
    R = s.R.get_str();
    v.require(s.j == 2, label + ": j = " + std::to_string(s.j));
    v.require(robber->records().size() >= 5, label + ": only " + std::to_string(robber->records().size()) + " meta-stages");
    for (const auto& rec : robber->records())
      for (const auto& r : assert_meta_obligations(rec, robber->family(), s))
        v.require(r.pass, label + ": meta-stage " + std::to_string(rec.index) + " " + r.name + " " + r.detail);
    metaStages += robber->records().size();
  }
  v.detail << "sigma bar=" << family.sigma_bar().get_str() << " rho bar=" << family.rho_bar().get_str() << ", j=" << j
           << " psi=" << psi << " R=" << R << ", " << metaStages << " meta-stages over 5 seeds";
  report("A4", v, start);
}

// ------------------------------------------------------------------ A5

void a5() {
  const auto start = Clock::now();
  Verdict v;
  const auto space = Space::parse("grid:2");
  std::size_t matches = 0, caseChecks = 0;
  std::int64_t traversals = 0;
  for (const std::string kind : {"greedy", "random"})
    for (auto seed : kSeeds) {
      auto cop = make_cop(kind, Json{{"sigma", 1}, {"rho", 1}});
      BigonEvader robber;
      const auto t = run_match(space, *cop, robber, options(GameVariant::Strong, 1000, seed));
      const auto label = tag(kind, seed);
      check_clean(v, space, t, label);
      v.require(t.header.params.psi == 96, label + ": psi " + std::to_string(t.header.params.psi));
      v.require(robber.delta() == 34, label + ": delta " + std::to_string(robber.delta()));
      try {
        validate_bigon(space, robber.witness());
      } catch (const std::exception& e) {
        v.require(false, label + ": " + e.what());
      }
      v.require(all_in_ball(t), label + ": left B_R");
      caseChecks += count_named(t, "bigon.case-");
      traversals += robber.traversals();
      ++matches;
    }
  v.require(caseChecks > 0, "no case assertions were exercised");
  v.detail << matches << " matches, delta=34, " << traversals << " traversals, " << caseChecks
           << " case assertions with positive slack";
  report("A5", v, start);
}

// ------------------------------------------------------------------ A6

void a6() {
  const auto start = Clock::now();
  Verdict v;
  const auto space = Space::parse("grid:2");
  const auto w = bottleneck_witness(space, 2);
  const auto L = static_cast<std::int64_t>(w.etaMinus.size()) - 1;
  std::int64_t M = 0;
  for (const auto& p : w.gamma) M = std::max(M, std::get<GridVertex>(p).coords[1]);
  v.require(L == 13 && M == 13, "witness L=" + std::to_string(L) + " M=" + std::to_string(M));
  std::size_t matches = 0, invariants = 0;
  for (const std::string kind : {"greedy", "random"})
    for (auto seed : kSeeds) {
      auto cop = make_cop(kind, Json{{"sigma", 1}, {"rho", 1}});
      BottleneckEvader robber;
      const auto t = run_match(space, *cop, robber, options(GameVariant::Weak, 500, seed));
      const auto label = tag(kind, seed);
      check_clean(v, space, t, label);
      v.require(robber.lambda() == 2, label + ": lambda " + std::to_string(robber.lambda()));
      const auto checked = count_named(t, "bottleneck.invariant");
      v.require(checked == t.stages.size(), label + ": invariant checked " + std::to_string(checked) + " times");
      invariants += checked;
      ++matches;
    }
  v.detail << matches << " matches, lambda=2, L=M=" << L << ", invariant held after " << invariants << " robber moves";
  report("A6", v, start);
}

// ------------------------------------------------------------------ A7

std::string band(const VerificationReport& r, std::int64_t j) {
  const auto* d = r.find(j, "def2");
  return d && d->worstSlack ? d->worstSlack->get_str() : "n/a";
}

void a7() {
  const auto start = Clock::now();
  Verdict v;

  const auto z2 = z2_scaling_family({2, 4, 8});
  SampleSpec zs;
  zs.js = {1, 2, 3};
  zs.radius = 5;
  const auto zr = verify_family(z2, zs);
  v.require(zr.violations() == 0, "z2: " + std::to_string(zr.violations()) + " violations");
  for (const auto& jr : zr.perJ) {
    v.require(jr.deltaSampling.rfind("exhaustive", 0) == 0, "z2 j=" + std::to_string(jr.j) + " not exhaustive");
    const auto* d = zr.find(jr.j, "def2");
    v.require(d && d->worstSlack && *d->worstSlack == 0,
              "z2 rho=" + std::to_string(jr.rho) + ": bi-Lipschitz band not attained, slack " + band(zr, jr.j));
  }

  const auto lamp = lamplighter_family(LampGroup::cyclic(2));
  SampleSpec ls;
  ls.js = {2, 3};
  ls.radius = 5;
  const auto lr = verify_family(lamp, ls);
  for (const auto& jr : lr.perJ) {
    std::uint64_t bad = 0;
    for (const auto& i : jr.inequalities) bad += i.violationCount;
    std::string witness;
    if (const auto* d = lr.find(jr.j, "def2"); d && !d->violations.empty())
      witness = " e.g. x=" + d->violations.front().x.dump() + " y=" + d->violations.front().y.dump();
    v.require(bad == 0, "lamplighter j=" + std::to_string(jr.j) + ": " + std::to_string(bad) +
                            " violations, worst def2 slack " + band(lr, jr.j) + witness);
  }

  // Exact band of d_Gamma / j - d_Delta over all pairs (e, g), g in B(5).
  std::string measured;
  for (std::int64_t j : {2, 3}) {
    const auto D = lamp.delta(j);
    const auto e = D.base();
    const auto ie = lamp.iota(j, e);
    mpq_class lo, hi;
    bool first = true;
    for (const auto& g : D.ball(e, 5)) {
      const auto dD = *D.distance(e, g, 64);
      const auto dG = *lamp.gamma.distance(ie, lamp.iota(j, g), 64 * j);
      const mpq_class diff = mpq_class(dG, j) - dD;
      if (first || diff < lo) lo = diff;
      if (first || diff > hi) hi = diff;
      first = false;
    }
    lo.canonicalize();
    hi.canonicalize();
    measured += " j=" + std::to_string(j) + ":[" + lo.get_str() + "," + hi.get_str() + "]";
  }
  v.detail << "z2 violations " << zr.violations() << " (def2 slack 0 at rho 2,4,8); lamplighter violations "
           << lr.violations() << " (def2 worst slack j=2 " << band(lr, 2) << ", j=3 " << band(lr, 3)
           << "); d_Gamma/j - d_Delta over (e,g), g in B(5):" << measured;
  report("A7", v, start);
}

// ------------------------------------------------------------------ A8

void a8() {
  const auto start = Clock::now();
  Verdict v;
  const auto space = Space::line();
  std::size_t matches = 0;
  for (auto seed : kSeeds) {
    PusherCop cop(CopConfig{1, 1, 1});
    GreedyEvader robber(GreedyEvaderConfig{1, 3, 10, false});
    const auto t = run_match(space, cop, robber, options(GameVariant::Weak, 200, seed));
    const auto label = "seed " + std::to_string(seed);
    v.require(!is_forfeit(t.outcome), label + ": forfeit " + outcome_to_json(space, t.outcome).dump());
    v.require(t.header.params.psi == 3 && t.header.params.bigR == 10, label + ": parameters");
    for (const auto& s : t.stages)
      if (s.stage > 100 && s.inBall) {
        v.require(false, label + ": robber in B_R at stage " + std::to_string(s.stage));
        break;
      }
    ++matches;
  }
  v.detail << matches << " matches of pusher vs greedy-evader: robber outside B_10 for stages 101..200";
  report("A8", v, start);
}

// ------------------------------------------------------------------ A9

void a9() {
  const auto start = Clock::now();
  Verdict v;

  const auto lamp = Space::parse("lamp:2");
  const auto e = lamp.base();
  const auto ball = lamp.ball(e, 8);
  // BFS from the identity covers every u^-1 w with u, w in B(8).
  const auto table = lamp.ball_distances(e, 16);
  std::uint64_t pairs = 0, mismatches = 0;
  for (const auto& u : ball) {
    const auto ui = lamp.inverse(u);
    for (const auto& w : ball) {
      const auto it = table.find(lamp.multiply(ui, w));
      const auto closed = lamp.closed_form_distance(u, w);
      if (it == table.end() || !closed || *closed != it->second) {
        if (++mismatches <= 3) v.require(false, "lamp: " + lamp.serialize(u) + " " + lamp.serialize(w));
      }
      ++pairs;
    }
  }
  // Direct pairwise searches on a sample, independent of translation.
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
  std::uint64_t direct = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto& u = ball[pick(rng)];
    const auto& w = ball[pick(rng)];
    const auto bfs = lamp.bfs_distance(u, w, 16);
    const auto closed = lamp.closed_form_distance(u, w);
    if (!bfs || !closed || *bfs != *closed) {
      ++mismatches;
      v.require(false, "lamp direct: " + lamp.serialize(u) + " " + lamp.serialize(w));
    }
    ++direct;
  }

  const auto grid = Space::parse("grid:2");
  std::uniform_int_distribution<std::int64_t> coord(-12, 12);
  std::uint64_t gridMismatches = 0;
  for (int i = 0; i < 10'000; ++i) {
    const auto u = grid_vertex({coord(rng), coord(rng)});
    const auto w = grid_vertex({coord(rng), coord(rng)});
    const auto bfs = grid.bfs_distance(u, w, 100);
    const auto closed = grid.closed_form_distance(u, w);
    if (!bfs || !closed || *bfs != *closed) {
      ++gridMismatches;
      v.require(false, "grid: " + grid.serialize(u) + " " + grid.serialize(w));
    }
  }
  v.detail << "lamp:2 B(8) has " << ball.size() << " vertices, " << pairs << " pairs + " << direct
           << " direct BFS pairs, " << mismatches << " mismatches; grid 10000 pairs, " << gridMismatches
           << " mismatches";
  report("A9", v, start);
}

// ------------------------------------------------------------------ A10

/// Widest bigon with endpoints in B(0, L) by enumerating every geodesic
/// between every endpoint pair. Two geodesics can pass through any two points
/// of the same level set, so the width is the largest level-set diameter.
std::int64_t brute_force_width(const Space& grid, std::int64_t L) {
  const auto ball = grid.ball(grid.base(), L);
  std::int64_t best = 0;
  for (const auto& w : ball) {
    const auto toW = grid.ball_distances(w, 2 * L);
    for (const auto& u : ball) {
      const auto d = toW.at(u);
      std::vector<std::set<std::string>> levelKeys(static_cast<std::size_t>(d) + 1);
      std::vector<std::vector<Vertex>> levels(static_cast<std::size_t>(d) + 1);
      MovePath path{u};
      std::function<void()> extend = [&] {
        const auto t = path.size() - 1;
        if (static_cast<std::int64_t>(t) == d) {
          for (std::size_t i = 0; i < path.size(); ++i)
            if (levelKeys[i].insert(grid.serialize(path[i])).second) levels[i].push_back(path[i]);
          return;
        }
        for (const auto& nb : grid.neighbors(path.back())) {
          const auto it = toW.find(nb);
          if (it == toW.end() || it->second != d - static_cast<std::int64_t>(t) - 1) continue;
          path.push_back(nb);
          extend();
          path.pop_back();
        }
      };
      extend();
      for (const auto& level : levels)
        for (std::size_t a = 0; a < level.size(); ++a)
          for (std::size_t b = a + 1; b < level.size(); ++b)
            best = std::max(best, *grid.bfs_distance(level[a], level[b], 4 * L));
    }
  }
  return best;
}

void a10() {
  const auto start = Clock::now();
  Verdict v;
  const auto tree = bigon_thinness_scan(Space::free_tree(2), 6);
  v.require(tree.maxWidth == 0, "free-tree:2 radius 6 width " + std::to_string(tree.maxWidth));
  v.detail << "free-tree:2 r=6 -> " << tree.maxWidth << "; grid:2";
  const auto grid = Space::grid(2);
  for (std::int64_t L = 2; L <= 5; ++L) {
    const auto scanned = bigon_thinness_scan(grid, L).maxWidth;
    const auto brute = brute_force_width(grid, L);
    v.require(scanned == 2 * L && brute == 2 * L, "grid L=" + std::to_string(L) + " scan " + std::to_string(scanned) +
                                                       " brute force " + std::to_string(brute));
    v.detail << " L=" << L << "->" << scanned << "/" << brute;
  }
  v.detail << " (scanner/brute force)";
  report("A10", v, start);
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const std::pair<const char*, void (*)()> criteria[] = {{"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},
                                                          {"A5", a5}, {"A6", a6}, {"A7", a7}, {"A8", a8},
                                                          {"A9", a9}, {"A10", a10}};
  for (const auto& [id, criterion] : criteria) {
    try {
      criterion();
    } catch (const std::exception& e) {
      std::printf("%s FAIL  aborted: %s\n", id, e.what());
      ++failures;
    }
  }
  const auto secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("%d of 10 criteria failed [%.1fs total]\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
