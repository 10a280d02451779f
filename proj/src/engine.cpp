#include "coarse/engine.hpp"

#include <algorithm>
#include <sstream>

namespace coarse {

namespace {

constexpr std::int64_t kBfsBallCheckLimit = 4000;
constexpr std::int64_t kBfsBallCheckLimitBs = 14;

struct SideFailure {
  Side side;
  ForfeitKind kind;
  std::string message;
};

template <class F>
auto guarded(Side side, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ProtocolError& e) {
    throw SideFailure{e.side(), ForfeitKind::Protocol, e.what()};
  } catch (const StrategyUnavailable& e) {
    throw SideFailure{side, ForfeitKind::StrategyUnavailable, e.what()};
  } catch (const InvariantViolation& e) {
    throw SideFailure{side, ForfeitKind::Invariant, e.what()};
  } catch (const OracleCaught& e) {
    throw SideFailure{side, ForfeitKind::OracleFailure, e.what()};
  } catch (const AssertionFailure& e) {
    throw SideFailure{side, ForfeitKind::Assertion, e.what()};
  } catch (const ExceedsCutoff& e) {
    throw SideFailure{side, ForfeitKind::Invariant, std::string("cutoff exceeded: ") + e.what()};
  } catch (const ResourceLimit& e) {
    throw SideFailure{side, ForfeitKind::Invariant, std::string("resource limit: ") + e.what()};
  } catch (const MalformedInput& e) {
    throw SideFailure{side, ForfeitKind::Protocol, std::string("malformed: ") + e.what()};
  }
}

void require_positive(Side side, const char* name, std::int64_t value) {
  if (value < 1)
    throw ProtocolError(side, std::string(name) + " must be positive, got " + std::to_string(value));
}

bool within(const Space& space, const Vertex& a, const Vertex& b, std::int64_t reach) {
  return space.distance(a, b, reach).has_value();
}

}  // namespace

std::optional<Captured> check_cop_moves(const Space& space, const GameParams& params,
                                        const std::vector<MovePath>& copMoves,
                                        const Vertex& robber, std::int64_t stage) {
  for (std::size_t i = 0; i < copMoves.size(); ++i)
    for (std::size_t k = 1; k < copMoves[i].size(); ++k)
      if (within(space, copMoves[i][k], robber, params.rho))
        return Captured{stage, static_cast<std::int64_t>(i), robber};
  return std::nullopt;
}

std::optional<Captured> check_robber_move(const Space& space, const GameParams& params,
                                          const std::vector<Vertex>& cops,
                                          const MovePath& robberMove, std::int64_t stage) {
  for (const auto& r : robberMove)
    for (std::size_t i = 0; i < cops.size(); ++i)
      if (within(space, cops[i], r, params.rho))
        return Captured{stage, static_cast<std::int64_t>(i), r};
  return std::nullopt;
}

std::int64_t min_cop_distance(const Space& space, const GameParams& params,
                              const std::vector<Vertex>& cops, const Vertex& robber) {
  const auto cutoff = capture_cutoff(params);
  std::int64_t best = cutoff + 1;
  for (const auto& c : cops)
    if (auto d = space.distance(c, robber, std::min(best - 1, cutoff))) best = std::min(best, *d);
  return best;
}

bool in_ball(const Space& space, const Vertex& center, const Vertex& x, const mpz_class& R) {
  if (auto d = space.closed_form_distance(center, x)) return mpz_class(static_cast<long>(*d)) <= R;
  if (auto w = space.word_length_bound(center, x); w && *w <= R) return true;
  if (!R.fits_slong_p()) return false;
  const auto r = R.get_si();
  if (space.lower_bound(center, x) > r) return false;
  const auto limit =
      space.kind() == SpaceKind::BaumslagSolitar ? kBfsBallCheckLimitBs : kBfsBallCheckLimit;
  if (r > limit) return false;
  return space.bfs_distance(center, x, r).has_value();
}

bool is_captured(const Outcome& o) { return std::holds_alternative<Captured>(o); }
bool is_horizon(const Outcome& o) { return std::holds_alternative<HorizonReached>(o); }
bool is_forfeit(const Outcome& o) { return std::holds_alternative<Forfeit>(o); }

Trace run_match(const Space& space, CopAgent& cop, RobberAgent& robber, const RunOptions& opts) {
  if (opts.horizon < 1) throw MalformedInput("horizon must be at least 1");

  std::mt19937_64 rng(opts.seed);
  AssertionLog log(opts.mode);
  MatchContext ctx{space, opts.variant, {}, &rng, &log};
  ctx.params.v = space.base();
  ctx.params.horizon = opts.horizon;

  Trace trace;
  auto& h = trace.header;
  h.space = space.spec();
  h.variant = opts.variant;
  h.seed = opts.seed;
  h.copSpec = opts.copSpec;
  h.robberSpec = opts.robberSpec;
  h.agentOptions = opts.agentOptions;

  GameState state;
  std::vector<std::int64_t> ballVisits;
  bool lastInBall = false;
  std::int64_t stage = 0;

  auto finish = [&](Outcome outcome) {
    trace.outcome = std::move(outcome);
    trace.assertions = log.records();
    h.params = ctx.params;
    return trace;
  };

  try {
    guarded(Side::Cop, [&] { cop.attach(ctx); });
    guarded(Side::Robber, [&] { robber.attach(ctx); });
    auto& p = ctx.params;
    p.n = guarded(Side::Cop, [&] { return cop.count(); });
    require_positive(Side::Cop, "n", p.n);
    if (opts.variant == GameVariant::Weak) {
      p.sigma = guarded(Side::Cop, [&] { return cop.choose_sigma(); });
      require_positive(Side::Cop, "sigma", p.sigma);
      p.rho = guarded(Side::Cop, [&] { return cop.choose_rho(WeakRhoQuery{p.sigma}); });
      require_positive(Side::Cop, "rho", p.rho);
      p.psi = guarded(Side::Robber, [&] { return robber.choose_psi(WeakPsiQuery{p.sigma, p.rho}); });
      require_positive(Side::Robber, "psi", p.psi);
    } else {
      p.sigma = guarded(Side::Cop, [&] { return cop.choose_sigma(); });
      require_positive(Side::Cop, "sigma", p.sigma);
      p.psi = guarded(Side::Robber, [&] { return robber.choose_psi(StrongPsiQuery{p.sigma}); });
      require_positive(Side::Robber, "psi", p.psi);
      p.rho = guarded(Side::Cop, [&] { return cop.choose_rho(StrongRhoQuery{p.sigma, p.psi}); });
      require_positive(Side::Cop, "rho", p.rho);
    }
    p.bigR = guarded(Side::Robber,
                     [&] { return robber.choose_radius(RadiusQuery{p.sigma, p.psi, p.rho}); });
    if (p.bigR < 1) throw ProtocolError(Side::Robber, "R must be positive, got " + p.bigR.get_str());
    h.params = p;
    if (opts.observer) opts.observer(trace, state);

    auto cops = guarded(Side::Cop, [&] { return cop.place(); });
    if (static_cast<std::int64_t>(cops.size()) != p.n)
      throw ProtocolError(Side::Cop, "placed " + std::to_string(cops.size()) + " cops, expected " +
                                         std::to_string(p.n));
    for (const auto& c : cops)
      if (!space.contains(c)) throw ProtocolError(Side::Cop, "cop placed outside the space");
    auto r = guarded(Side::Robber, [&] { return robber.place(cops); });
    if (!space.contains(r)) throw ProtocolError(Side::Robber, "robber placed outside the space");
    h.placed = true;
    h.placementCops = cops;
    h.placementRobber = r;
    state.cops = cops;
    state.robber = r;

    for (std::size_t i = 0; i < cops.size(); ++i)
      if (within(space, cops[i], r, p.rho)) {
        if (opts.observer) opts.observer(trace, state);
        return finish(Captured{0, static_cast<std::int64_t>(i), r});
      }
    lastInBall = in_ball(space, p.v, r, p.bigR);
    if (lastInBall) ballVisits.push_back(0);
    if (opts.observer) opts.observer(trace, state);

    std::vector<MovePath> lastCopMoves;
    for (stage = 1; stage <= opts.horizon; ++stage) {
      log.set_stage(stage);
      state.stage = stage;
      View copView{stage, state.cops, state.robber, lastCopMoves};
      auto copMoves = guarded(Side::Cop, [&] { return cop.move(copView); });
      if (static_cast<std::int64_t>(copMoves.size()) != p.n)
        throw ProtocolError(Side::Cop, "expected " + std::to_string(p.n) + " cop paths, got " +
                                           std::to_string(copMoves.size()));
      for (std::size_t i = 0; i < copMoves.size(); ++i)
        if (auto why = path_violation(space, copMoves[i], state.cops[i], p.sigma, "sigma"))
          throw ProtocolError(Side::Cop, "cop " + std::to_string(i) + ": " + *why);

      StageRecord rec;
      rec.stage = stage;
      rec.copMoves = copMoves;
      if (auto cap = check_cop_moves(space, p, copMoves, state.robber, stage)) {
        rec.robberMove = {state.robber};
        for (std::size_t i = 0; i < copMoves.size(); ++i) state.cops[i] = copMoves[i].back();
        rec.minCopDist = min_cop_distance(space, p, state.cops, state.robber);
        rec.inBall = in_ball(space, p.v, state.robber, p.bigR);
        trace.stages.push_back(std::move(rec));
        if (opts.observer) opts.observer(trace, state);
        return finish(*cap);
      }
      for (std::size_t i = 0; i < copMoves.size(); ++i) state.cops[i] = copMoves[i].back();
      lastCopMoves = copMoves;

      View robberView{stage, state.cops, state.robber, lastCopMoves};
      auto robberMove = guarded(Side::Robber, [&] { return robber.move(robberView); });
      if (auto why = path_violation(space, robberMove, state.robber, p.psi, "psi"))
        throw ProtocolError(Side::Robber, "robber: " + *why);
      rec.robberMove = robberMove;
      auto cap = check_robber_move(space, p, state.cops, robberMove, stage);
      state.robber = robberMove.back();
      rec.minCopDist = min_cop_distance(space, p, state.cops, state.robber);
      rec.inBall = in_ball(space, p.v, state.robber, p.bigR);
      lastInBall = rec.inBall;
      if (rec.inBall) ballVisits.push_back(stage);
      trace.stages.push_back(std::move(rec));
      if (opts.observer) opts.observer(trace, state);
      if (cap) return finish(*cap);
    }
    return finish(HorizonReached{opts.horizon, ballVisits, lastInBall});
  } catch (const SideFailure& f) {
    return finish(Forfeit{f.side, f.kind, stage, f.message});
  } catch (const ProtocolError& e) {
    return finish(Forfeit{e.side(), ForfeitKind::Protocol, stage, e.what()});
  }
}

ReplayResult replay_trace(const Space& space, const Trace& trace,
                          std::optional<std::int64_t> rho) {
  ReplayResult res;
  GameParams p = trace.header.params;
  if (rho) p.rho = *rho;
  auto diverge = [&](std::int64_t stage, std::string why) {
    res.ok = false;
    res.divergentStage = stage;
    res.reason = std::move(why);
    return res;
  };

  const bool recordedForfeit = is_forfeit(trace.outcome);
  if (!trace.header.placed) {
    if (!recordedForfeit) return diverge(0, "trace has no placement but no forfeit either");
    res.outcome = trace.outcome;
    return res;
  }

  auto cops = trace.header.placementCops;
  auto robber = trace.header.placementRobber;
  if (static_cast<std::int64_t>(cops.size()) != p.n) return diverge(0, "placement cop count");
  std::optional<Captured> captured;
  for (std::size_t i = 0; i < cops.size() && !captured; ++i)
    if (within(space, cops[i], robber, p.rho))
      captured = Captured{0, static_cast<std::int64_t>(i), robber};

  std::vector<std::int64_t> ballVisits;
  bool lastInBall = false;
  if (!captured) {
    lastInBall = in_ball(space, p.v, robber, p.bigR);
    if (lastInBall) ballVisits.push_back(0);
  }

  std::int64_t s = 0;
  for (const auto& rec : trace.stages) {
    if (captured) return diverge(s + 1, "stage recorded after capture");
    ++s;
    if (rec.stage != s) return diverge(s, "stage numbering");
    if (static_cast<std::int64_t>(rec.copMoves.size()) != p.n) return diverge(s, "cop path count");
    for (std::size_t i = 0; i < rec.copMoves.size(); ++i)
      if (auto why = path_violation(space, rec.copMoves[i], cops[i], p.sigma, "sigma"))
        return diverge(s, "cop " + std::to_string(i) + ": " + *why);
    captured = check_cop_moves(space, p, rec.copMoves, robber, s);
    for (std::size_t i = 0; i < cops.size(); ++i) cops[i] = rec.copMoves[i].back();
    if (captured) {
      if (!(rec.robberMove.size() == 1 && rec.robberMove.front() == robber)) {
        if (!rho) return diverge(s, "robber moved after a cop-path capture");
        // A smaller reach can miss the cop-path capture; keep re-simulating.
        captured.reset();
      } else {
        if (!rho) {
          if (rec.minCopDist != min_cop_distance(space, p, cops, robber))
            return diverge(s, "minCopDist mismatch");
        }
        continue;
      }
    }
    if (auto why = path_violation(space, rec.robberMove, robber, p.psi, "psi"))
      return diverge(s, "robber: " + *why);
    captured = check_robber_move(space, p, cops, rec.robberMove, s);
    robber = rec.robberMove.back();
    const bool inBall = in_ball(space, p.v, robber, p.bigR);
    if (!rho) {
      if (rec.minCopDist != min_cop_distance(space, p, cops, robber))
        return diverge(s, "minCopDist mismatch");
      if (rec.inBall != inBall) return diverge(s, "inBall mismatch");
    }
    lastInBall = inBall;
    if (inBall) ballVisits.push_back(s);
  }

  if (captured) {
    res.outcome = *captured;
  } else if (recordedForfeit) {
    const auto& f = std::get<Forfeit>(trace.outcome);
    if (f.stage != s + 1 && !(f.stage == s && s == 0))
      return diverge(s, "forfeit stage does not follow the recorded stages");
    res.outcome = trace.outcome;
    return res;
  } else {
    if (s != p.horizon) return diverge(s, "trace ends before the horizon");
    res.outcome = HorizonReached{s, ballVisits, lastInBall};
  }

  if (rho) {
    if (is_captured(res.outcome) && !is_captured(trace.outcome))
      return diverge(std::get<Captured>(res.outcome).stage,
                     "capture under reach " + std::to_string(*rho) + " absent from the original");
    return res;
  }
  if (outcome_to_json(space, res.outcome) != outcome_to_json(space, trace.outcome))
    return diverge(s, "outcome mismatch");
  return res;
}

namespace {

/// First capture stage under a chosen cop-checkpoint reading.
std::optional<std::int64_t> first_capture(const Space& space, const Trace& trace,
                                          bool intermediateCops) {
  const auto& p = trace.header.params;
  if (!trace.header.placed) return std::nullopt;
  auto cops = trace.header.placementCops;
  auto robber = trace.header.placementRobber;
  for (const auto& c : cops)
    if (within(space, c, robber, p.rho)) return 0;
  for (const auto& rec : trace.stages) {
    for (std::size_t i = 0; i < rec.copMoves.size(); ++i) {
      const auto& path = rec.copMoves[i];
      const std::size_t from = intermediateCops ? 1 : path.size() - 1;
      for (std::size_t k = std::max<std::size_t>(from, 1); k < path.size(); ++k)
        if (within(space, path[k], robber, p.rho)) return rec.stage;
      cops[i] = path.back();
    }
    if (!intermediateCops)
      for (const auto& c : cops)
        if (within(space, c, robber, p.rho)) return rec.stage;
    for (const auto& r : rec.robberMove)
      for (const auto& c : cops)
        if (within(space, c, r, p.rho)) return rec.stage;
    robber = rec.robberMove.back();
  }
  return std::nullopt;
}

std::string stage_text(std::optional<std::int64_t> s) {
  return s ? std::to_string(*s) : std::string("none");
}

}  // namespace

AuditResult audit_capture_readings(const Space& space, const Trace& trace) {
  const auto symmetric = first_capture(space, trace, true);
  const auto endpoint = first_capture(space, trace, false);
  if (symmetric == endpoint) return {};
  return {false, "symmetric reading captures at " + stage_text(symmetric) +
                     ", endpoint reading at " + stage_text(endpoint)};
}

AuditResult audit_edge_subdivision(const Space& space, const Trace& trace) {
  // In the subdivided graph every distance doubles and the reach becomes 2rho;
  // an edge midpoint m of {a,b} sits at 1 + 2 min(d(a,c), d(b,c)) from c.
  const auto& p = trace.header.params;
  if (!trace.header.placed) return {};
  const auto vertexCapture = first_capture(space, trace, true);
  auto midpointHit = [&](const Vertex& a, const Vertex& b, const Vertex& c) {
    const auto da = space.distance(a, c, p.rho);
    const auto db = space.distance(b, c, p.rho);
    std::int64_t m = p.rho + 1;
    if (da) m = std::min(m, *da);
    if (db) m = std::min(m, *db);
    return 1 + 2 * m <= 2 * p.rho;
  };
  auto cops = trace.header.placementCops;
  auto robber = trace.header.placementRobber;
  for (const auto& rec : trace.stages) {
    if (vertexCapture && rec.stage > *vertexCapture) break;
    for (std::size_t i = 0; i < rec.copMoves.size(); ++i) {
      const auto& path = rec.copMoves[i];
      for (std::size_t k = 1; k < path.size(); ++k)
        if (midpointHit(path[k - 1], path[k], robber) &&
            !(vertexCapture && *vertexCapture <= rec.stage))
          return {false, "cop edge midpoint captures at stage " + std::to_string(rec.stage)};
      cops[i] = path.back();
    }
    for (std::size_t k = 1; k < rec.robberMove.size(); ++k)
      for (const auto& c : cops)
        if (midpointHit(rec.robberMove[k - 1], rec.robberMove[k], c) &&
            !(vertexCapture && *vertexCapture <= rec.stage))
          return {false, "robber edge midpoint captures at stage " + std::to_string(rec.stage)};
    robber = rec.robberMove.back();
  }
  return {};
}

}  // namespace coarse
