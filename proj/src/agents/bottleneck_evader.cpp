#include <algorithm>

#include "coarse/agents.hpp"
#include "coarse/errors.hpp"

namespace coarse {

namespace {

MovePath reversed(MovePath p) {
  std::reverse(p.begin(), p.end());
  return p;
}

MovePath join(MovePath a, const MovePath& b) {
  a.insert(a.end(), b.begin() + 1, b.end());
  return a;
}

std::int64_t length(const MovePath& p) { return static_cast<std::int64_t>(p.size()) - 1; }

}  // namespace

std::int64_t BottleneckEvader::choose_psi(const WeakPsiQuery& q) {
  lambda_ = q.sigma + q.rho;
  witness_ = bottleneck_witness(space(), lambda_);
  const auto& w = *witness_;
  log().check("bottleneck.lambda-bound", w.lambdaBound >= lambda_,
              "bound=" + std::to_string(w.lambdaBound) + " lambda=" + std::to_string(lambda_));
  psi_ = std::max(length(w.etaMinus), length(w.gamma) + length(w.etaPlus));
  return psi_;
}

mpz_class BottleneckEvader::choose_radius(const RadiusQuery&) {
  const auto& w = *witness_;
  const auto& v = ctx().params.v;
  std::int64_t far = 0;
  for (const auto* p : {&w.gamma, &w.etaMinus, &w.etaPlus})
    for (const auto& x : *p) far = std::max(far, *space().distance(v, x, std::int64_t{1} << 30));
  R_ = far;
  return R_;
}

std::int64_t BottleneckEvader::cop_distance(const std::vector<Vertex>& cops, const Vertex& x) const {
  const auto cutoff = 4 * lambda_;
  std::int64_t best = cutoff + 1;
  for (const auto& c : cops)
    if (auto d = space().distance(c, x, cutoff)) best = std::min(best, *d);
  return best;
}

bool BottleneckEvader::blocked(const MovePath& path, const std::vector<Vertex>& cops) const {
  for (const auto& c : cops)
    for (const auto& x : path)
      if (space().distance(c, x, lambda_ - 1)) return true;
  return false;
}

Vertex BottleneckEvader::place(const std::vector<Vertex>& cops) {
  const auto& w = *witness_;
  return cop_distance(cops, w.y) >= 4 * lambda_ ? w.y : w.x;
}

MovePath BottleneckEvader::move(const View& view) {
  const auto& w = *witness_;
  const auto& cops = view.cops;
  const bool near = cop_distance(cops, w.y) < 4 * lambda_;
  MovePath out{view.robber};

  auto choose = [&](const MovePath& direct, const MovePath& around, const char* what) {
    const bool bd = blocked(direct, cops);
    const bool ba = blocked(around, cops);
    log().check(std::string("bottleneck.unblocked-") + what, !(bd && ba),
                std::string("direct=") + (bd ? "blocked" : "clear") + " around=" + (ba ? "blocked" : "clear"));
    return bd ? around : direct;
  };

  if (view.robber == w.y && near) {
    out = choose(reversed(w.etaMinus), join(w.etaPlus, reversed(w.gamma)), "escape");
  } else if (view.robber == w.x && !near) {
    out = choose(w.etaMinus, join(w.gamma, reversed(w.etaPlus)), "return");
  } else if (!(view.robber == w.x) && !(view.robber == w.y)) {
    throw InvariantViolation("robber is at neither x nor y");
  }

  const auto& end = out.back();
  const bool nearAfter = cop_distance(cops, w.y) < 4 * lambda_;
  log().check("bottleneck.invariant", nearAfter ? end == w.x : end == w.y);
  bool inBall = true;
  for (const auto& x : out) inBall = inBall && in_ball(space(), ctx().params.v, x, R_);
  log().check("bottleneck.in-ball", inBall);
  return out;
}

}  // namespace coarse
