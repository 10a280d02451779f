#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "coarse/space.hpp"

namespace testing {

inline coarse::Vertex V(const coarse::Space& s, const coarse::Json& j) { return s.from_json(j); }

/// Serialized, sorted vertex set for order-independent comparisons.
inline std::set<std::string> keys(const coarse::Space& s, const std::vector<coarse::Vertex>& vs) {
  std::set<std::string> out;
  for (const auto& v : vs) out.insert(s.serialize(v));
  return out;
}

inline std::set<std::string> keys(const coarse::Space& s, std::initializer_list<coarse::Json> js) {
  std::set<std::string> out;
  for (const auto& j : js) out.insert(s.serialize(s.from_json(j)));
  return out;
}

}  // namespace testing

#include <random>

#include "coarse/game.hpp"

namespace testing {

/// Stand-alone match context for driving a single agent by hand.
struct Harness {
  std::mt19937_64 rng{1};
  coarse::AssertionLog log;
  coarse::MatchContext ctx;

  explicit Harness(coarse::Space space, coarse::GameVariant variant = coarse::GameVariant::Weak)
      : ctx{std::move(space), variant, {}, &rng, &log} {
    ctx.params.v = ctx.space.base();
    ctx.params.horizon = 100;
    ctx.params.n = 1;
  }

  /// Negotiates a robber's parameters in the order of the context's variant.
  void negotiate(coarse::RobberAgent& robber, std::int64_t sigma, std::int64_t rho) {
    robber.attach(ctx);
    auto& p = ctx.params;
    p.sigma = sigma;
    if (ctx.variant == coarse::GameVariant::Weak) {
      p.rho = rho;
      p.psi = robber.choose_psi(coarse::WeakPsiQuery{sigma, rho});
    } else {
      p.psi = robber.choose_psi(coarse::StrongPsiQuery{sigma});
      p.rho = rho;
    }
    p.bigR = robber.choose_radius(coarse::RadiusQuery{sigma, p.psi, rho});
  }

  bool all_passed() const { return log.failures() == 0; }
};

}  // namespace testing
