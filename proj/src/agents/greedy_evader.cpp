#include <algorithm>
#include <deque>
#include <unordered_map>

#include "coarse/agents.hpp"
#include "coarse/errors.hpp"

namespace coarse {

std::int64_t GreedyEvader::clearance(const std::vector<Vertex>& cops, const Vertex& x, std::int64_t cap) const {
  std::int64_t best = cap;
  for (const auto& c : cops)
    if (auto d = space().distance(c, x, best)) best = std::min(best, *d);
  return best;
}

bool GreedyEvader::allowed(const Vertex& x) const {
  return !cfg_.confine || in_ball(space(), ctx().params.v, x, cfg_.R);
}

Vertex GreedyEvader::place(const std::vector<Vertex>& cops) {
  const auto need = cfg_.margin + ctx().params.sigma;
  const auto base = ctx().params.v;
  std::vector<Vertex> layer{base};
  std::unordered_map<Vertex, bool, VertexHash> seen{{base, true}};
  const std::int64_t maxRadius = cfg_.confine && cfg_.R.fits_slong_p() ? cfg_.R.get_si() : 4 * (need + 1) + 64;
  for (std::int64_t r = 0; r <= maxRadius && !layer.empty(); ++r) {
    std::sort(layer.begin(), layer.end(),
              [&](const Vertex& a, const Vertex& b) { return space().serialize(a) < space().serialize(b); });
    for (const auto& x : layer)
      if (allowed(x) && clearance(cops, x, need + 1) > need) return x;
    std::vector<Vertex> next;
    for (const auto& x : layer)
      for (auto& y : space().neighbors(x))
        if (seen.emplace(y, true).second) next.push_back(std::move(y));
    layer = std::move(next);
  }
  throw OracleCaught("no placement farther than " + std::to_string(need) + " from the cops");
}

MovePath GreedyEvader::move(const View& view) {
  const auto sigma = ctx().params.sigma;
  const auto margin = cfg_.margin;
  const auto cap = margin + sigma + cfg_.psi;
  const auto& cops = view.cops;
  const auto& start = view.robber;
  if (clearance(cops, start, margin + 1) <= margin) throw OracleCaught("a cop is within the margin");

  struct Node {
    std::optional<Vertex> parent;
    std::int64_t depth;
    std::int64_t clear;
  };
  std::unordered_map<Vertex, Node, VertexHash> nodes;
  nodes.emplace(start, Node{std::nullopt, 0, clearance(cops, start, cap)});
  std::deque<Vertex> queue{start};
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    const auto depth = nodes.at(x).depth;
    if (depth == cfg_.psi) continue;
    for (auto& y : space().neighbors(x)) {
      if (nodes.count(y) || !allowed(y)) continue;
      const auto c = clearance(cops, y, cap);
      if (c <= margin) continue;
      nodes.emplace(y, Node{x, depth + 1, c});
      queue.push_back(std::move(y));
    }
  }

  const auto base = ctx().params.v;
  std::optional<Vertex> best;
  std::int64_t bestClear = 0, bestBase = 0;
  std::string bestKey;
  for (const auto& [x, node] : nodes) {
    if (node.clear <= margin + sigma) continue;
    const auto toBase = space().estimate(base, x);
    std::string key = space().serialize(x);
    const bool better = !best || node.clear > bestClear ||
                        (node.clear == bestClear && (toBase < bestBase || (toBase == bestBase && key < bestKey)));
    if (better) {
      best = x;
      bestClear = node.clear;
      bestBase = toBase;
      bestKey = std::move(key);
    }
  }
  if (!best) throw OracleCaught("every reachable endpoint is within " + std::to_string(margin + sigma) + " of a cop");

  MovePath path;
  for (std::optional<Vertex> x = best; x; x = nodes.at(*x).parent) path.push_back(*x);
  std::reverse(path.begin(), path.end());

  bool margins = true;
  for (const auto& x : path)
    for (const auto& c : cops)
      margins = margins && !space().distance(c, x, margin).has_value();
  log().check("greedy.margin", margins);
  return path;
}

}  // namespace coarse
