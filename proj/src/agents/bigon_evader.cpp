#include <algorithm>

#include "coarse/agents.hpp"
#include "coarse/errors.hpp"

namespace coarse {

namespace {

std::string stats(std::int64_t count, std::int64_t minSlack) {
  return "checks=" + std::to_string(count) + " minSlack=" + std::to_string(minSlack);
}

}  // namespace

std::int64_t BigonEvader::dist(const Vertex& a, const Vertex& b) const {
  const auto cutoff = 8 * witness_->delta;
  auto d = space().distance(a, b, cutoff);
  return d ? *d : cutoff + 1;
}

mpz_class BigonEvader::choose_radius(const RadiusQuery& q) {
  psi_ = q.psi;
  const auto rhoEff = std::max(q.rho, q.sigma);
  const auto delta = 32 * rhoEff + 1;
  try {
    witness_ = find_bigon_exact_width(space(), delta, searchRadius_);
  } catch (const StrategyUnavailable&) {
    witness_ = find_bigon_exact_width(space(), delta + 1, searchRadius_);
  }
  const auto& w = *witness_;
  log().check("bigon.width", 16 * 2 * q.rho < w.delta && w.delta > 32 * q.rho,
              "delta=" + std::to_string(w.delta) + " rho=" + std::to_string(q.rho));
  log().check("bigon.anchor-distance", dist(w.gamma[w.t], w.gammaPrime[w.t]) == w.delta);
  std::int64_t far = 0;
  const auto v = ctx().params.v;
  for (const auto* side : {&w.gamma, &w.gammaPrime})
    for (const auto& x : *side) {
      auto d = space().distance(v, x, std::int64_t{1} << 30);
      if (!d) throw InvariantViolation("bigon vertex unreachable from base");
      far = std::max(far, *d);
    }
  R_ = far + w.delta;
  return R_;
}

BigonWitness BigonEvader::oriented() const { return atP_ ? *witness_ : witness_->swapped(); }

bool BigonEvader::blocked(const BigonWitness& w, const std::vector<Vertex>& cops) const {
  for (const auto& c : cops)
    for (auto s = w.t; s <= w.length(); ++s)
      if (16 * dist(c, w.gamma[s]) < 2 * w.delta) return true;
  return false;
}

Vertex BigonEvader::place(const std::vector<Vertex>& cops) {
  const auto& w = *witness_;
  auto clear = [&](const Vertex& a) {
    return std::all_of(cops.begin(), cops.end(), [&](const Vertex& c) { return 16 * dist(c, a) > 5 * w.delta; });
  };
  if (clear(w.gamma[w.t])) {
    atP_ = true;
  } else if (clear(w.gammaPrime[w.t])) {
    atP_ = false;
  } else {
    log().check("bigon.placement", false, "both anchors within 5 lambda of a cop");
    throw InvariantViolation("no anchor clear of the cops");
  }
  log().check("bigon.placement", true);
  return oriented().gamma[w.t];
}

void BigonEvader::check_cases(const Traversal& tr, std::size_t index, const Vertex& r,
                              const std::vector<Vertex>& cops,
                              std::map<char, std::pair<std::int64_t, std::int64_t>>& acc, bool& covered) {
  const auto& w = tr.oriented;
  const auto l = w.length();
  const auto delta = w.delta;
  const auto& pPrime = w.gammaPrime[w.t];
  char which = 0;
  if (index <= tr.gammaEnd) {
    which = 'a';
  } else if (w.t + delta <= l) {
    if (16 * dist(r, w.gamma[w.t + delta]) <= 9 * delta) which = 'b';
    else if (16 * dist(r, w.gammaPrime[w.t + delta]) <= 7 * delta) which = 'c';
    else if (16 * dist(r, pPrime) <= 9 * delta) which = 'd';
  } else {
    const auto dp = dist(r, pPrime);
    if (16 * dp <= 9 * delta) which = 'd';
    else which = 'e';
  }
  if (!which) {
    covered = false;
    return;
  }
  for (const auto& c : cops) {
    const auto slack = 16 * dist(r, c) - delta;
    auto& [count, minSlack] = acc[which];
    minSlack = count == 0 ? slack : std::min(minSlack, slack);
    ++count;
  }
}

MovePath BigonEvader::move(const View& view) {
  const auto& cops = view.cops;
  if (!active_) {
    const auto w = oriented();
    const auto& anchor = w.gamma[w.t];
    std::optional<Vertex> trigger;
    for (const auto& c : cops)
      if (16 * dist(c, anchor) < 5 * w.delta) {
        trigger = c;
        break;
      }
    if (!trigger) return {view.robber};

    log().check("bigon.trigger-band", 16 * dist(*trigger, anchor) > 4 * w.delta,
                "d=" + std::to_string(dist(*trigger, anchor)));
    const auto plus = w;
    const auto minus = w.reversed();
    const bool bPlus = blocked(plus, cops);
    const bool bMinus = blocked(minus, cops);
    bool claims = true;
    auto clear_beyond = [&](const BigonWitness& x) {
      for (auto s = x.t + 1; s <= x.length(); ++s)
        if (16 * dist(*trigger, x.gamma[s]) <= 2 * x.delta) return false;
      return true;
    };
    if (bMinus) claims = claims && clear_beyond(plus);
    if (bPlus) claims = claims && clear_beyond(minus);
    log().check("bigon.exclusivity", !(bPlus && bMinus) && claims,
                std::string("blocked+=") + (bPlus ? "1" : "0") + " blocked-=" + (bMinus ? "1" : "0"));

    Traversal tr;
    tr.oriented = bPlus ? minus : plus;
    tr.path = bigon_detour(space(), tr.oriented);
    tr.gammaEnd = static_cast<std::size_t>(std::min(tr.oriented.t + tr.oriented.delta, tr.oriented.length()) -
                                           tr.oriented.t);
    active_ = std::move(tr);
    ++traversals_;
  } else if (!(active_->path[active_->cursor] == view.robber)) {
    throw InvariantViolation("robber left its traversal path");
  }

  auto& tr = *active_;
  std::map<char, std::pair<std::int64_t, std::int64_t>> acc;
  bool covered = true;
  // Cop paths of this stage against the stationary robber.
  for (const auto& path : view.lastCopMoves) check_cases(tr, tr.cursor, view.robber, path, acc, covered);

  const auto end = std::min(tr.cursor + static_cast<std::size_t>(psi_), tr.path.size() - 1);
  MovePath out(tr.path.begin() + static_cast<std::ptrdiff_t>(tr.cursor),
               tr.path.begin() + static_cast<std::ptrdiff_t>(end) + 1);
  bool inBall = true;
  for (std::size_t i = tr.cursor; i <= end; ++i) {
    check_cases(tr, i, tr.path[i], cops, acc, covered);
    inBall = inBall && in_ball(space(), ctx().params.v, tr.path[i], R_);
  }
  tr.cursor = end;

  log().check("bigon.case-coverage", covered);
  for (const auto& [which, entry] : acc)
    log().check(std::string("bigon.case-") + which, entry.second > 0, stats(entry.first, entry.second));
  log().check("bigon.in-ball", inBall);

  if (tr.cursor + 1 == tr.path.size()) {
    const auto& arrival = tr.path.back();
    std::int64_t gap = -1;
    for (const auto& c : cops) {
      const auto d = dist(c, arrival);
      gap = gap < 0 ? d : std::min(gap, d);
    }
    log().check("bigon.arrival-gap", 16 * gap > 10 * tr.oriented.delta, "d=" + std::to_string(gap));
    atP_ = !atP_;
    active_.reset();
  }
  return out;
}

}  // namespace coarse
