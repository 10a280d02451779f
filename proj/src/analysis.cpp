#include "coarse/analysis.hpp"

#include <algorithm>
#include <ostream>

#include "coarse/errors.hpp"

namespace coarse {

namespace {

std::int64_t exact_distance(const Space& space, const Vertex& a, const Vertex& b,
                            std::int64_t cutoff) {
  auto d = space.distance(a, b, cutoff);
  if (!d) throw ExceedsCutoff("distance exceeds " + std::to_string(cutoff));
  return *d;
}

MovePath concat(MovePath a, const MovePath& b) {
  a.insert(a.end(), b.begin() + 1, b.end());
  return a;
}

bool is_grid_like(const Space& space) {
  return space.kind() == SpaceKind::Grid && space.dimension() >= 2;
}

Vertex plane_point(const Space& space, std::int64_t x, std::int64_t y) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(space.dimension()), 0);
  c[0] = x;
  c[1] = y;
  return grid_vertex(std::move(c));
}

/// Straight lattice segment between two points sharing one coordinate.
void walk_to(const Space& space, MovePath& path, std::int64_t x, std::int64_t y) {
  const auto& last = std::get<GridVertex>(path.back()).coords;
  std::int64_t cx = last[0], cy = last[1];
  while (cx != x) {
    cx += cx < x ? 1 : -1;
    path.push_back(plane_point(space, cx, cy));
  }
  while (cy != y) {
    cy += cy < y ? 1 : -1;
    path.push_back(plane_point(space, cx, cy));
  }
}

/// Distances from the base, from a closed form when available.
class BaseDistance {
 public:
  BaseDistance(const Space& space, std::int64_t radius, std::size_t limit) : space_(space) {
    if (!space.has_closed_form()) table_ = space.ball_distances(space.base(), radius, limit);
  }
  std::int64_t operator()(const Vertex& x) const {
    if (!table_) return *space_.closed_form_distance(space_.base(), x);
    auto it = table_->find(x);
    return it == table_->end() ? -1 : it->second;
  }

 private:
  const Space& space_;
  std::optional<DistanceMap> table_;
};

struct SliceWidth {
  std::int64_t width = 0;
  std::int64_t level = 0;
  Vertex x, y;
};

/// Widest slice of the geodesic interval between the base and g. Every vertex
/// reachable from g by steps that lower the base distance lies on a geodesic.
SliceWidth interval_width(const Space& space, const BaseDistance& dist, const Vertex& g) {
  const auto dg = dist(g);
  SliceWidth best{0, 0, g, g};
  std::vector<Vertex> level{g};
  for (std::int64_t k = dg; k > 0; --k) {
    for (std::size_t i = 0; i < level.size(); ++i)
      for (std::size_t j = i + 1; j < level.size(); ++j) {
        const auto cutoff = 2 * std::min(k, dg - k);
        const auto d = exact_distance(space, level[i], level[j], cutoff);
        if (d > best.width) best = {d, k, level[i], level[j]};
      }
    std::vector<Vertex> next;
    std::unordered_map<Vertex, bool, VertexHash> seen;
    for (const auto& x : level)
      for (auto& y : space.neighbors(x))
        if (dist(y) == k - 1 && seen.emplace(y, true).second) next.push_back(std::move(y));
    level = std::move(next);
  }
  return best;
}

BigonWitness witness_from_slice(const Space& space, const Vertex& g, const SliceWidth& s) {
  const auto e = space.base();
  const auto dg = exact_distance(space, e, g, std::int64_t{1} << 40);
  BigonWitness w;
  w.gamma = concat(space.geodesic(e, s.x, dg), space.geodesic(s.x, g, dg));
  w.gammaPrime = concat(space.geodesic(e, s.y, dg), space.geodesic(s.y, g, dg));
  w.delta = s.width;
  w.t = s.level;
  return w;
}

}  // namespace

BigonWitness BigonWitness::swapped() const {
  BigonWitness w = *this;
  std::swap(w.gamma, w.gammaPrime);
  return w;
}

BigonWitness BigonWitness::reversed() const {
  BigonWitness w = *this;
  std::reverse(w.gamma.begin(), w.gamma.end());
  std::reverse(w.gammaPrime.begin(), w.gammaPrime.end());
  w.t = length() - t;
  return w;
}

MovePath bigon_detour(const Space& space, const BigonWitness& w) {
  const auto l = w.length();
  const auto far = std::min(w.t + w.delta, l);
  MovePath path(w.gamma.begin() + w.t, w.gamma.begin() + far + 1);
  if (w.t + w.delta <= l) {
    const auto cross = space.geodesic(w.gamma[far], w.gammaPrime[far], w.delta);
    path.insert(path.end(), cross.begin() + 1, cross.end());
  }
  for (auto i = far - 1; i >= w.t; --i) path.push_back(w.gammaPrime[i]);
  return path;
}

std::int64_t bigon_width(const Space& space, const MovePath& gamma, const MovePath& gammaPrime) {
  if (gamma.size() != gammaPrime.size()) throw MalformedInput("bigon sides differ in length");
  const auto l = static_cast<std::int64_t>(gamma.size()) - 1;
  std::int64_t width = 0;
  for (std::int64_t t = 0; t <= l; ++t) {
    const auto cutoff = 2 * std::min(t, l - t);
    width = std::max(width, exact_distance(space, gamma[t], gammaPrime[t], cutoff));
  }
  return width;
}

void validate_bigon(const Space& space, const BigonWitness& w) {
  auto fail = [](const std::string& why) { throw InvariantViolation("invalid bigon: " + why); };
  if (w.gamma.empty() || w.gamma.size() != w.gammaPrime.size()) fail("side lengths differ");
  if (!(w.gamma.front() == w.gammaPrime.front()) || !(w.gamma.back() == w.gammaPrime.back()))
    fail("endpoints differ");
  const auto l = w.length();
  for (const auto* side : {&w.gamma, &w.gammaPrime})
    for (std::size_t i = 1; i < side->size(); ++i)
      if (!space.adjacent((*side)[i - 1], (*side)[i])) fail("non-adjacent step");
  if (exact_distance(space, w.gamma.front(), w.gamma.back(), l) != l) fail("sides not geodesic");
  if (w.t < 0 || w.t > l) fail("t out of range");
  if (bigon_width(space, w.gamma, w.gammaPrime) != w.delta) fail("width differs from delta");
  if (exact_distance(space, w.gamma[w.t], w.gammaPrime[w.t], w.delta) != w.delta)
    fail("width not attained at t");
}

ScanResult bigon_thinness_scan(const Space& space, std::int64_t radius, std::size_t limit) {
  if (radius < 0) throw MalformedInput("negative radius");
  // Left translation is an isometry, so pairs (u, w) in B(r) reduce to pairs
  // (base, g) with g in B(2r).
  BaseDistance dist(space, 2 * radius, limit);
  const auto vertices = space.ball(space.base(), 2 * radius, limit);
  ScanResult result;
  std::optional<Vertex> bestG;
  SliceWidth best;
  for (const auto& g : vertices) {
    const auto s = interval_width(space, dist, g);
    if (s.width > best.width) {
      best = s;
      bestG = g;
    }
  }
  result.maxWidth = best.width;
  if (bestG) result.witness = witness_from_slice(space, *bestG, best);
  return result;
}

BigonWitness find_bigon_exact_width(const Space& space, std::int64_t delta,
                                    std::int64_t searchRadius) {
  if (delta < 1) throw MalformedInput("delta must be positive");
  if (space.kind() == SpaceKind::FreeTree || space.kind() == SpaceKind::Line)
    throw StrategyUnavailable("geodesics are unique in " + space.spec() + "; all bigons are 0-thin");
  BigonWitness w;
  if (is_grid_like(space)) {
    if (delta % 2 != 0)
      throw StrategyUnavailable("staircase bigons on " + space.spec() + " have even width; delta " +
                                std::to_string(delta) + " is odd");
    const auto L = delta / 2;
    w.gamma = {plane_point(space, 0, 0)};
    walk_to(space, w.gamma, L, 0);
    walk_to(space, w.gamma, L, L);
    w.gammaPrime = {plane_point(space, 0, 0)};
    walk_to(space, w.gammaPrime, 0, L);
    walk_to(space, w.gammaPrime, L, L);
    w.delta = delta;
    w.t = L;
  } else {
    BaseDistance dist(space, searchRadius, kDefaultBallLimit);
    std::optional<BigonWitness> found;
    for (const auto& g : space.ball(space.base(), searchRadius)) {
      const auto s = interval_width(space, dist, g);
      if (s.width == delta) {
        found = witness_from_slice(space, g, s);
        break;
      }
    }
    if (!found)
      throw StrategyUnavailable("no bigon of width " + std::to_string(delta) + " with endpoints in B(" +
                                std::to_string(searchRadius) + ") of " + space.spec());
    w = *found;
  }
  validate_bigon(space, w);
  return w;
}

BottleneckWitness bottleneck_witness(const Space& space, std::int64_t lambda) {
  if (lambda < 1) throw MalformedInput("lambda must be positive");
  if (!is_grid_like(space))
    throw StrategyUnavailable("no bottleneck witness provider for " + space.spec());
  const auto L = 6 * lambda + 1;
  const auto M = L;
  BottleneckWitness w;
  w.x = plane_point(space, -L, 0);
  w.y = plane_point(space, 0, 0);
  w.z = plane_point(space, L, 0);
  w.gamma = {w.x};
  walk_to(space, w.gamma, -L, M);
  walk_to(space, w.gamma, L, M);
  walk_to(space, w.gamma, L, 0);
  w.etaMinus = {w.x};
  walk_to(space, w.etaMinus, 0, 0);
  w.etaPlus = {w.y};
  walk_to(space, w.etaPlus, L, 0);
  std::int64_t gap = -1;
  for (const auto& v : w.gamma) {
    const auto d = *space.closed_form_distance(w.y, v);
    gap = gap < 0 ? d : std::min(gap, d);
  }
  w.lambdaBound = (gap - 1) / 6;
  validate_bottleneck(space, w);
  return w;
}

void validate_bottleneck(const Space& space, const BottleneckWitness& w) {
  auto fail = [](const std::string& why) { throw InvariantViolation("invalid bottleneck: " + why); };
  const auto big = std::int64_t{1} << 40;
  const auto dxy = exact_distance(space, w.x, w.y, big);
  const auto dyz = exact_distance(space, w.y, w.z, big);
  const auto dxz = exact_distance(space, w.x, w.z, big);
  if (dxy != dyz || 2 * dxy != dxz) fail("y is not a midpoint of x and z");
  auto check_path = [&](const MovePath& p, const Vertex& from, const Vertex& to) {
    if (p.empty() || !(p.front() == from) || !(p.back() == to)) fail("path endpoints");
    for (std::size_t i = 1; i < p.size(); ++i)
      if (!space.adjacent(p[i - 1], p[i])) fail("non-adjacent step");
  };
  check_path(w.gamma, w.x, w.z);
  check_path(w.etaMinus, w.x, w.y);
  check_path(w.etaPlus, w.y, w.z);
  if (static_cast<std::int64_t>(w.etaMinus.size()) - 1 != dxy ||
      static_cast<std::int64_t>(w.etaPlus.size()) - 1 != dyz)
    fail("halves are not geodesic");
  for (const auto& v : w.gamma)
    if (space.distance(w.y, v, 6 * w.lambdaBound)) fail("gamma passes within 6 lambda of y");
}

mpz_class hd(const Space& space, std::int64_t H, std::int64_t reach) {
  if (space.kind() != SpaceKind::BaumslagSolitar) throw MalformedInput("hd needs a bs space");
  if (H < 0 || reach < 0) throw MalformedInput("H and reach must be nonnegative");
  const int m = space.modulus();
  mpq_class best = 0;
  for (const auto& v : space.ball(space.base(), reach)) {
    const auto& b = std::get<BsVertex>(v);
    mpq_class q(abs(b.num), bs::power(m, b.exp));
    q.canonicalize();
    if (q > best) best = q;
  }
  mpz_class result = 0;
  for (std::int64_t h = 0; h <= H; ++h) {
    mpq_class scaled = best * mpq_class(bs::power(m, h));
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    result = std::max(result, c);
  }
  return result;
}

Json bigon_to_json(const Space& space, const BigonWitness& w) {
  Json g = Json::array(), gp = Json::array();
  for (const auto& v : w.gamma) g.push_back(space.to_json(v));
  for (const auto& v : w.gammaPrime) gp.push_back(space.to_json(v));
  return Json{{"delta", w.delta}, {"t", w.t}, {"length", w.length()}, {"gamma", g}, {"gammaPrime", gp}};
}

Json scan_to_json(const Space& space, const ScanResult& r) {
  return Json{{"maxWidth", r.maxWidth},
              {"witness", r.witness ? bigon_to_json(space, *r.witness) : Json(nullptr)}};
}

void write_hd_csv(std::ostream& out, const Space& space, std::int64_t maxH, std::int64_t maxReach) {
  out << "H,reach,value\n";
  for (std::int64_t h = 0; h <= maxH; ++h)
    for (std::int64_t r = 1; r <= maxReach; ++r) out << h << ',' << r << ',' << hd(space, h, r).get_str() << '\n';
}

}  // namespace coarse
