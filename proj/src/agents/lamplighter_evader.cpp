#include "coarse/agents.hpp"
#include "coarse/errors.hpp"

namespace coarse {

std::int64_t LamplighterEvader::choose_psi(const WeakPsiQuery& q) {
  if (space().kind() != SpaceKind::Lamplighter)
    throw StrategyUnavailable("lamplighter evader needs a lamplighter space");
  n_ = ctx().params.n;
  sigma_ = q.sigma;
  rho_ = q.rho;
  if (b(1) <= a(n_))
    throw InvariantViolation("positions a_i and b_i overlap: n=" + std::to_string(n_) +
                             " exceeds sigma+rho+1");
  psi_ = loop_length() + 1;
  log().check("lamplighter.remark-bound", psi_ <= 2 * n_ * (n_ + sigma_ + rho_ + 2),
              "psi=" + std::to_string(psi_));
  return psi_;
}

mpz_class LamplighterEvader::choose_radius(const RadiusQuery&) { return psi_; }

Vertex LamplighterEvader::place(const std::vector<Vertex>& cops) {
  LampVertex r;
  for (std::int64_t i = 1; i <= n_; ++i) {
    const auto& c = std::get<LampVertex>(cops[static_cast<std::size_t>(i - 1)]);
    r.set_state(a(i), flip(c.state_at(a(i))));
    r.set_state(b(i), flip(c.state_at(b(i))));
  }
  r.pos = a(1);
  return r;
}

MovePath LamplighterEvader::move(const View& view) {
  auto r = std::get<LampVertex>(view.robber);
  if (r.pos != a(1)) throw InvariantViolation("robber is not at a_1 between loops");
  const auto& power = space().lamps();

  // Which cop owns each special position.
  auto owner = [&](std::int64_t x) -> std::int64_t {
    for (std::int64_t i = 1; i <= n_; ++i)
      if (x == a(i) || x == b(i)) return i;
    return 0;
  };
  auto cop = [&](std::int64_t i) -> const LampVertex& {
    return std::get<LampVertex>(view.cops[static_cast<std::size_t>(i - 1)]);
  };

  bool atMostOne = true;
  for (std::int64_t i = 1; i <= n_; ++i) {
    const auto& c = cop(i);
    const int matches = (c.state_at(a(i)) == r.state_at(a(i))) + (c.state_at(b(i)) == r.state_at(b(i)));
    atMostOne = atMostOne && matches <= 1;
  }
  log().check("lamplighter.at-most-one-match", atMostOne);

  MovePath path{Vertex(r)};
  for (std::int64_t x = a(1); x <= b(n_); ++x) {
    const auto current = r.state_at(x);
    auto target = current;
    if (const auto i = owner(x); i != 0) {
      const auto ci = cop(i).state_at(x);
      if (current == ci) target = flip(ci);
    }
    // Multiplying by current^-1 * target replaces the lamp at x.
    r.set_state(x, power.multiply(current, power.multiply(power.inverse(current), target)));
    r.pos = x + 1;
    path.push_back(Vertex(r));
  }
  for (auto x = b(n_); x >= a(1); --x) {
    r.pos = x;
    path.push_back(Vertex(r));
  }

  bool mismatch = true;
  for (std::int64_t i = 1; i <= n_; ++i) {
    const auto& c = cop(i);
    mismatch = mismatch && c.state_at(a(i)) != r.state_at(a(i)) && c.state_at(b(i)) != r.state_at(b(i));
  }
  log().check("lamplighter.mismatch", mismatch);
  bool inBall = true;
  for (const auto& x : path) inBall = inBall && in_ball(space(), ctx().params.v, x, psi_);
  log().check("lamplighter.in-ball", inBall);
  log().check("lamplighter.loop-length", static_cast<std::int64_t>(path.size()) - 1 == psi_ - 1);
  return path;
}

}  // namespace coarse
