#include <algorithm>
#include <random>

#include "coarse/agents.hpp"
#include "coarse/errors.hpp"

namespace coarse {

namespace {

/// Largest distance for which pursuit falls back to an exact geodesic search
/// in spaces without a closed form.
std::int64_t exact_pursuit_cutoff(const Space& space) {
  return space.kind() == SpaceKind::BaumslagSolitar ? 12 : 40;
}

/// Neighbor minimizing `score`, ties broken by serialization; nullopt if no
/// neighbor beats `current`.
template <class Score>
std::optional<Vertex> best_step(const Space& space, const Vertex& x, std::int64_t current, Score score) {
  std::optional<Vertex> best;
  std::int64_t bestScore = current;
  std::string bestKey;
  for (auto& y : space.neighbors(x)) {
    const auto s = score(y);
    if (s >= current || s > bestScore) continue;
    std::string key = space.serialize(y);
    if (!best || s < bestScore || key < bestKey) {
      best = std::move(y);
      bestScore = s;
      bestKey = std::move(key);
    }
  }
  return best;
}

}  // namespace

MovePath pursuit_path(const Space& space, const Vertex& from, const Vertex& target, std::int64_t steps) {
  MovePath path{from};
  if (steps <= 0 || from == target) return path;
  if (space.has_closed_form()) {
    Vertex x = from;
    auto d = *space.closed_form_distance(x, target);
    while (d > 0 && static_cast<std::int64_t>(path.size()) <= steps) {
      auto next = best_step(space, x, d, [&](const Vertex& y) { return *space.closed_form_distance(y, target); });
      if (!next) break;
      x = *next;
      --d;
      path.push_back(x);
    }
    return path;
  }
  const auto cutoff = exact_pursuit_cutoff(space);
  if (auto d = space.distance(from, target, cutoff)) {
    auto geo = space.geodesic(from, target, *d);
    if (static_cast<std::int64_t>(geo.size()) > steps + 1) geo.resize(static_cast<std::size_t>(steps + 1));
    return geo;
  }
  Vertex x = from;
  auto e = space.estimate(x, target);
  while (static_cast<std::int64_t>(path.size()) <= steps) {
    auto next = best_step(space, x, e, [&](const Vertex& y) { return space.estimate(y, target); });
    if (!next) break;
    x = *next;
    e = space.estimate(x, target);
    path.push_back(x);
  }
  return path;
}

std::vector<Vertex> GreedyCop::place() {
  return std::vector<Vertex>(static_cast<std::size_t>(cfg_.n), space().base());
}

std::vector<MovePath> GreedyCop::move(const View& view) {
  std::vector<MovePath> out;
  for (const auto& c : view.cops) out.push_back(pursuit_path(space(), c, view.robber, cfg_.sigma));
  return out;
}

namespace {

Vertex random_walk(const Space& space, Vertex x, std::int64_t steps, std::mt19937_64& rng, MovePath* trail) {
  for (std::int64_t i = 0; i < steps; ++i) {
    auto nb = space.neighbors(x);
    std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
    x = nb[pick(rng)];
    if (trail) trail->push_back(x);
  }
  return x;
}

}  // namespace

std::vector<Vertex> RandomCop::place() {
  std::vector<Vertex> out;
  for (std::int64_t i = 0; i < cfg_.n; ++i)
    out.push_back(random_walk(space(), space().base(), 2 * cfg_.sigma, *ctx().rng, nullptr));
  return out;
}

std::vector<MovePath> RandomCop::move(const View& view) {
  std::vector<MovePath> out;
  for (const auto& c : view.cops) {
    MovePath p{c};
    random_walk(space(), c, cfg_.sigma, *ctx().rng, &p);
    out.push_back(std::move(p));
  }
  return out;
}

void PusherCop::attach(MatchContext& ctx) {
  if (ctx.space.kind() != SpaceKind::Line) throw StrategyUnavailable("pusher cops only play on the line");
  CopAgent::attach(ctx);
}

std::vector<Vertex> PusherCop::place() {
  return std::vector<Vertex>(static_cast<std::size_t>(cfg_.n), space().base());
}

std::vector<MovePath> PusherCop::move(const View& view) {
  const auto r = std::get<GridVertex>(view.robber).coords[0];
  std::vector<MovePath> out;
  for (const auto& c : view.cops) {
    auto x = std::get<GridVertex>(c).coords[0];
    MovePath p{c};
    const auto steps = std::min<std::int64_t>(cfg_.sigma, std::abs(r - x));
    for (std::int64_t i = 0; i < steps; ++i) {
      x += r > x ? 1 : -1;
      p.push_back(grid_vertex({x}));
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Vertex> ScriptedCop::place() {
  if (!trace_.header.placed) throw ProtocolError(Side::Cop, "scripted trace has no placement");
  return trace_.header.placementCops;
}

std::vector<MovePath> ScriptedCop::move(const View& view) {
  const auto idx = static_cast<std::size_t>(view.stage - 1);
  if (idx < trace_.stages.size()) return trace_.stages[idx].copMoves;
  std::vector<MovePath> stay;
  for (const auto& c : view.cops) stay.push_back({c});
  return stay;
}

}  // namespace coarse
