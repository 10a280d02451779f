#include "coarse/space.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "coarse/errors.hpp"

namespace coarse {

struct Space::Impl {
  SpaceKind kind;
  int dim = 0;   // grid, line
  int m = 0;     // gridvar, bs
  int rank = 0;  // tree
  std::optional<LampPower> lamps;
  std::string lampSource;  // group part of the spec string
  std::vector<std::pair<std::int64_t, std::int64_t>> gridVarSteps;
};

namespace {

std::int64_t abs64(std::int64_t x) { return x < 0 ? -x : x; }

const char* kind_label(SpaceKind k) {
  switch (k) {
    case SpaceKind::Grid: return "grid";
    case SpaceKind::GridVariation: return "gridvar";
    case SpaceKind::Lamplighter: return "lamp";
    case SpaceKind::BaumslagSolitar: return "bs";
    case SpaceKind::Line: return "line";
    case SpaceKind::FreeTree: return "free-tree";
  }
  return "?";
}

std::size_t expected_index(SpaceKind k) {
  switch (k) {
    case SpaceKind::Grid:
    case SpaceKind::Line: return 0;
    case SpaceKind::GridVariation: return 1;
    case SpaceKind::Lamplighter: return 2;
    case SpaceKind::BaumslagSolitar: return 3;
    case SpaceKind::FreeTree: return 4;
  }
  return 0;
}

char inverse_letter(char c) {
  return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : static_cast<char>(c - 'A' + 'a');
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw MalformedInput("bad " + what + ": " + s);
    return v;
  } catch (const std::logic_error&) {
    throw MalformedInput("bad " + what + ": " + s);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

// Lamplighter distance via the hull walk: lamp x is changed exactly when the
// edge {x, x+1} is traversed, so the walk must cover the edges of all
// differing positions and join the two lamplighter positions.
std::int64_t lamp_distance(const LampVertex& u, const LampVertex& w) {
  std::int64_t lo = std::min(u.pos, w.pos);
  std::int64_t hi = std::max(u.pos, w.pos);
  bool any = false;
  std::int64_t dmin = 0, dmax = 0;
  auto note = [&](std::int64_t p) {
    if (!any) {
      dmin = dmax = p;
      any = true;
    } else {
      dmin = std::min(dmin, p);
      dmax = std::max(dmax, p);
    }
  };
  std::size_t i = 0, k = 0;
  const auto& a = u.lamps;
  const auto& b = w.lamps;
  while (i < a.size() || k < b.size()) {
    if (k == b.size() || (i < a.size() && a[i].first < b[k].first)) {
      note(a[i].first);
      ++i;
    } else if (i == a.size() || b[k].first < a[i].first) {
      note(b[k].first);
      ++k;
    } else {
      if (a[i].second != b[k].second) note(a[i].first);
      ++i;
      ++k;
    }
  }
  if (any) {
    lo = std::min(lo, dmin);
    hi = std::max(hi, dmax + 1);
  }
  const std::int64_t n = u.pos, n2 = w.pos;
  return std::min((n - lo) + (hi - lo) + (hi - n2), (hi - n) + (hi - lo) + (n2 - lo));
}

std::int64_t tree_distance(const TreeVertex& u, const TreeVertex& w) {
  std::size_t c = 0;
  while (c < u.word.size() && c < w.word.size() && u.word[c] == w.word[c]) ++c;
  return static_cast<std::int64_t>(u.word.size() + w.word.size() - 2 * c);
}

std::int64_t l1(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += abs64(a[i] - b[i]);
  return s;
}

// Rational q = num / m^exp with exp possibly negative during arithmetic.
struct Dyadic {
  mpz_class num;
  std::int64_t exp = 0;
};

void reduce(int m, mpz_class& num, std::int64_t& exp) {
  if (m == 1) {
    exp = 0;
    return;
  }
  if (exp < 0) {
    num *= bs::power(m, -exp);
    exp = 0;
  }
  if (num == 0) {
    exp = 0;
    return;
  }
  mpz_class mm = m;
  while (exp > 0 && mpz_divisible_p(num.get_mpz_t(), mm.get_mpz_t())) {
    num /= mm;
    --exp;
  }
}

Dyadic add(int m, const Dyadic& x, const Dyadic& y) {
  if (m == 1) return {x.num + y.num, 0};
  const std::int64_t e = std::max(x.exp, y.exp);
  Dyadic r{x.num * bs::power(m, e - x.exp) + y.num * bs::power(m, e - y.exp), e};
  reduce(m, r.num, r.exp);
  return r;
}

// x * m^e
Dyadic scale(int m, const Dyadic& x, std::int64_t e) {
  if (m == 1) return x;
  Dyadic r{x.num, x.exp - e};
  reduce(m, r.num, r.exp);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- bs helpers

namespace bs {

mpz_class power(int m, std::int64_t e) {
  if (e < 0) throw MalformedInput("negative exponent");
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(e));
  return r;
}

BsVertex make(int m, mpz_class num, std::int64_t exp, std::int64_t k) {
  BsVertex v{std::move(num), exp, k};
  reduce(m, v.num, v.exp);
  return v;
}

BsVertex shift_a(int m, const BsVertex& v, const mpz_class& count) {
  // q + count * m^k
  Dyadic q{v.num, v.exp};
  Dyadic step = scale(m, Dyadic{count, 0}, v.k);
  Dyadic r = add(m, q, step);
  return BsVertex{r.num, r.exp, v.k};
}

BsVertex shift_t(const BsVertex& v, std::int64_t count) { return BsVertex{v.num, v.exp, v.k + count}; }

mpz_class ladder_length(int m, const BsVertex& g) {
  // Word t^{-e} a^{d_0} t a^{d_1} ... t a^{d_{s-1}} t a^{D} t^{k+e-s}; the
  // digits are balanced base-m digits of num, D the remaining quotient.
  if (m == 1) return abs(g.num) + (g.k < 0 ? -g.k : g.k);
  mpz_class rem = g.num;
  mpz_class digitCost = 0;
  mpz_class best = -1;
  const mpz_class mm = m;
  for (std::int64_t s = 0;; ++s) {
    mpz_class tail = g.k + g.exp - s;
    if (tail < 0) tail = -tail;
    mpz_class cand = g.exp + digitCost + s + abs(rem) + tail;
    if (best < 0 || cand < best) best = cand;
    if (rem == 0) break;
    mpz_class d;
    mpz_fdiv_r(d.get_mpz_t(), rem.get_mpz_t(), mm.get_mpz_t());
    if (2 * d > mm || (2 * d == mm && rem < 0)) d -= mm;
    digitCost += abs(d);
    rem = (rem - d) / mm;
  }
  return best;
}

}  // namespace bs

// ---------------------------------------------------------------- factories

Space Space::grid(int dimension) {
  if (dimension < 1) throw MalformedInput("grid dimension must be at least 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::Grid;
  impl->dim = dimension;
  return Space(impl);
}

Space Space::line() {
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::Line;
  impl->dim = 1;
  return Space(impl);
}

Space Space::grid_variation(int m) {
  if (m < 1) throw MalformedInput("gridvar modulus must be at least 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::GridVariation;
  impl->m = m;
  for (std::int64_t x = -m; x <= m; ++x) {
    const std::int64_t r = m - abs64(x);
    for (std::int64_t y : {-r, r}) {
      const std::int64_t s = x + y;
      if (s != -m && s != 0 && s != m) continue;
      std::pair<std::int64_t, std::int64_t> step{x, y};
      if (std::find(impl->gridVarSteps.begin(), impl->gridVarSteps.end(), step) ==
          impl->gridVarSteps.end())
        impl->gridVarSteps.push_back(step);
    }
  }
  return Space(impl);
}

Space Space::lamplighter(LampGroup group, int j) {
  if (group.trivial()) throw MalformedInput("lamp group must be nontrivial");
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::Lamplighter;
  impl->lampSource = group.name().rfind("Z/", 0) == 0 ? group.name().substr(2) : group.name();
  impl->lamps.emplace(std::move(group), j);
  return Space(impl);
}

Space Space::baumslag_solitar(int m) {
  if (m < 1) throw MalformedInput("BS parameter must be at least 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::BaumslagSolitar;
  impl->m = m;
  return Space(impl);
}

Space Space::free_tree(int rank) {
  if (rank < 1 || rank > 26) throw MalformedInput("free tree rank must be in 1..26");
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::FreeTree;
  impl->rank = rank;
  return Space(impl);
}

Space Space::parse(const std::string& spec) {
  if (spec == "line") return line();
  auto parts = split(spec, ':');
  const std::string& head = parts[0];
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) throw MalformedInput("bad space spec: " + spec);
  };
  auto as_int = [&](std::size_t i) {
    const auto v = parse_int(parts[i], "space parameter");
    if (v < 1 || v > (1 << 20)) throw MalformedInput("space parameter out of range: " + spec);
    return static_cast<int>(v);
  };
  if (head == "grid") {
    need(2, 2);
    return grid(as_int(1));
  }
  if (head == "gridvar") {
    need(2, 2);
    return grid_variation(as_int(1));
  }
  if (head == "bs") {
    need(2, 2);
    return baumslag_solitar(as_int(1));
  }
  if (head == "free-tree") {
    need(2, 2);
    return free_tree(as_int(1));
  }
  if (head == "lamp") {
    need(2, 3);
    const int j = parts.size() == 3 ? as_int(2) : 1;
    if (!parts[1].empty() && parts[1][0] == '@') {
      auto g = LampGroup::load(parts[1].substr(1));
      auto s = lamplighter(g, j);
      auto impl = std::make_shared<Impl>(*s.impl_);
      impl->lampSource = parts[1];
      return Space(impl);
    }
    return lamplighter(LampGroup::cyclic(static_cast<std::uint32_t>(as_int(1))), j);
  }
  throw MalformedInput("unknown space kind: " + spec);
}

// ---------------------------------------------------------------- accessors

SpaceKind Space::kind() const { return impl_->kind; }

std::string Space::spec() const {
  switch (impl_->kind) {
    case SpaceKind::Grid: return "grid:" + std::to_string(impl_->dim);
    case SpaceKind::GridVariation: return "gridvar:" + std::to_string(impl_->m);
    case SpaceKind::BaumslagSolitar: return "bs:" + std::to_string(impl_->m);
    case SpaceKind::Line: return "line";
    case SpaceKind::FreeTree: return "free-tree:" + std::to_string(impl_->rank);
    case SpaceKind::Lamplighter: {
      std::string s = "lamp:" + impl_->lampSource;
      if (impl_->lamps->exponent() != 1) s += ":" + std::to_string(impl_->lamps->exponent());
      return s;
    }
  }
  return kind_label(impl_->kind);
}

int Space::dimension() const { return impl_->dim; }
int Space::modulus() const { return impl_->m; }
int Space::rank() const { return impl_->rank; }

const LampPower& Space::lamps() const {
  if (!impl_->lamps) throw MalformedInput("not a lamplighter space");
  return *impl_->lamps;
}

Vertex Space::base() const {
  switch (impl_->kind) {
    case SpaceKind::Grid:
    case SpaceKind::Line: return GridVertex{std::vector<std::int64_t>(impl_->dim, 0)};
    case SpaceKind::GridVariation: return GridVarVertex{};
    case SpaceKind::Lamplighter: return LampVertex{};
    case SpaceKind::BaumslagSolitar: return BsVertex{mpz_class(0), 0, 0};
    case SpaceKind::FreeTree: return TreeVertex{};
  }
  return GridVertex{};
}

bool Space::contains(const Vertex& v) const {
  if (v.index() != expected_index(impl_->kind)) return false;
  switch (impl_->kind) {
    case SpaceKind::Grid:
    case SpaceKind::Line:
      return std::get<GridVertex>(v).coords.size() == static_cast<std::size_t>(impl_->dim);
    case SpaceKind::GridVariation: {
      const auto& g = std::get<GridVarVertex>(v);
      std::int64_t s = (g.a + g.b) % impl_->m;
      return s == 0;
    }
    case SpaceKind::Lamplighter: {
      const auto& l = std::get<LampVertex>(v);
      for (std::size_t i = 0; i < l.lamps.size(); ++i) {
        if (l.lamps[i].second == 0 || l.lamps[i].second >= impl_->lamps->order()) return false;
        if (i > 0 && l.lamps[i - 1].first >= l.lamps[i].first) return false;
      }
      return true;
    }
    case SpaceKind::BaumslagSolitar: {
      const auto& b = std::get<BsVertex>(v);
      if (b.exp < 0) return false;
      if (b.num == 0) return b.exp == 0;
      if (b.exp == 0) return true;
      if (impl_->m == 1) return false;
      mpz_class mm = impl_->m;
      return !mpz_divisible_p(b.num.get_mpz_t(), mm.get_mpz_t());
    }
    case SpaceKind::FreeTree: {
      const auto& w = std::get<TreeVertex>(v).word;
      for (std::size_t i = 0; i < w.size(); ++i) {
        const char c = w[i];
        const bool lower = c >= 'a' && c < 'a' + impl_->rank;
        const bool upper = c >= 'A' && c < 'A' + impl_->rank;
        if (!lower && !upper) return false;
        if (i > 0 && w[i - 1] == inverse_letter(c)) return false;
      }
      return true;
    }
  }
  return false;
}

void Space::require(const Vertex& v) const {
  if (!contains(v)) throw MalformedInput("vertex is not valid for space " + spec());
}

// ---------------------------------------------------------------- adjacency

std::vector<Vertex> Space::neighbors(const Vertex& v) const {
  std::vector<Vertex> out;
  switch (impl_->kind) {
    case SpaceKind::Grid:
    case SpaceKind::Line: {
      const auto& g = std::get<GridVertex>(v);
      out.reserve(2 * g.coords.size());
      for (std::size_t i = 0; i < g.coords.size(); ++i)
        for (int s : {1, -1}) {
          GridVertex n = g;
          n.coords[i] += s;
          out.emplace_back(std::move(n));
        }
      break;
    }
    case SpaceKind::GridVariation: {
      const auto& g = std::get<GridVarVertex>(v);
      for (auto [x, y] : impl_->gridVarSteps) out.emplace_back(GridVarVertex{g.a + x, g.b + y});
      break;
    }
    case SpaceKind::Lamplighter: {
      const auto& l = std::get<LampVertex>(v);
      const auto& P = *impl_->lamps;
      out.reserve(2 * P.order());
      const std::uint32_t here = l.state_at(l.pos);
      for (std::uint32_t s = 0; s < P.order(); ++s) {
        LampVertex n = l;
        n.set_state(l.pos, P.multiply(here, s));
        n.pos = l.pos + 1;
        out.emplace_back(std::move(n));
      }
      const std::uint32_t left = l.state_at(l.pos - 1);
      for (std::uint32_t s = 0; s < P.order(); ++s) {
        LampVertex n = l;
        n.pos = l.pos - 1;
        n.set_state(n.pos, P.multiply(left, s));
        out.emplace_back(std::move(n));
      }
      break;
    }
    case SpaceKind::BaumslagSolitar: {
      const auto& b = std::get<BsVertex>(v);
      out.emplace_back(bs::shift_a(impl_->m, b, 1));
      out.emplace_back(bs::shift_a(impl_->m, b, -1));
      out.emplace_back(bs::shift_t(b, 1));
      out.emplace_back(bs::shift_t(b, -1));
      break;
    }
    case SpaceKind::FreeTree: {
      const auto& w = std::get<TreeVertex>(v).word;
      for (int i = 0; i < 2 * impl_->rank; ++i) {
        const char c = i < impl_->rank ? static_cast<char>('a' + i)
                                       : static_cast<char>('A' + i - impl_->rank);
        if (!w.empty() && w.back() == inverse_letter(c))
          out.emplace_back(TreeVertex{w.substr(0, w.size() - 1)});
        else
          out.emplace_back(TreeVertex{w + c});
      }
      break;
    }
  }
  return out;
}

bool Space::adjacent(const Vertex& u, const Vertex& w) const {
  if (has_closed_form()) return *closed_form_distance(u, w) == 1;
  for (const auto& n : neighbors(u))
    if (n == w) return true;
  return false;
}

// ---------------------------------------------------------------- distances

bool Space::has_closed_form() const {
  switch (impl_->kind) {
    case SpaceKind::Grid:
    case SpaceKind::Line:
    case SpaceKind::Lamplighter:
    case SpaceKind::FreeTree: return true;
    default: return false;
  }
}

std::optional<std::int64_t> Space::closed_form_distance(const Vertex& u, const Vertex& w) const {
  if (u.index() != w.index() || u.index() != expected_index(impl_->kind))
    throw MalformedInput("vertices from different spaces");
  switch (impl_->kind) {
    case SpaceKind::Grid:
    case SpaceKind::Line: return l1(std::get<GridVertex>(u).coords, std::get<GridVertex>(w).coords);
    case SpaceKind::Lamplighter: return lamp_distance(std::get<LampVertex>(u), std::get<LampVertex>(w));
    case SpaceKind::FreeTree: return tree_distance(std::get<TreeVertex>(u), std::get<TreeVertex>(w));
    default: return std::nullopt;
  }
}

std::int64_t Space::lower_bound(const Vertex& u, const Vertex& w) const {
  if (auto d = closed_form_distance(u, w)) return *d;
  if (impl_->kind == SpaceKind::BaumslagSolitar)
    return abs64(std::get<BsVertex>(u).k - std::get<BsVertex>(w).k);
  if (impl_->kind == SpaceKind::GridVariation) {
    const auto& a = std::get<GridVarVertex>(u);
    const auto& b = std::get<GridVarVertex>(w);
    const std::int64_t s = abs64(a.a - b.a) + abs64(a.b - b.b);
    return (s + impl_->m - 1) / impl_->m;
  }
  return 0;
}

std::optional<mpz_class> Space::word_length_bound(const Vertex& u, const Vertex& w) const {
  if (auto d = closed_form_distance(u, w)) return mpz_class(static_cast<long>(*d));
  if (impl_->kind == SpaceKind::BaumslagSolitar) {
    const auto g = std::get<BsVertex>(multiply(inverse(u), w));
    return bs::ladder_length(impl_->m, g);
  }
  return std::nullopt;
}

std::int64_t Space::estimate(const Vertex& u, const Vertex& w) const {
  if (auto d = closed_form_distance(u, w)) return *d;
  if (auto b = word_length_bound(u, w)) {
    if (b->fits_slong_p()) return b->get_si();
    return std::numeric_limits<std::int64_t>::max() / 4;
  }
  return lower_bound(u, w);
}

std::optional<std::int64_t> Space::distance(const Vertex& u, const Vertex& w,
                                            std::int64_t cutoff) const {
  if (cutoff < 0) throw MalformedInput("negative cutoff");
  if (auto d = closed_form_distance(u, w)) {
    if (*d <= cutoff) return d;
    return std::nullopt;
  }
  if (lower_bound(u, w) > cutoff) return std::nullopt;
  return bfs_distance(u, w, cutoff);
}

std::optional<std::int64_t> Space::bfs_distance(const Vertex& u, const Vertex& w,
                                                std::int64_t cutoff) const {
  if (u.index() != w.index() || u.index() != expected_index(impl_->kind))
    throw MalformedInput("vertices from different spaces");
  if (u == w) return 0;
  DistanceMap seen[2];
  std::vector<Vertex> frontier[2];
  std::int64_t radius[2] = {0, 0};
  seen[0].emplace(u, 0);
  seen[1].emplace(w, 0);
  frontier[0].push_back(u);
  frontier[1].push_back(w);
  while (radius[0] + radius[1] < cutoff) {
    const int s = frontier[0].size() <= frontier[1].size() ? 0 : 1;
    const int o = 1 - s;
    std::vector<Vertex> next;
    std::int64_t best = -1;
    for (const auto& x : frontier[s]) {
      for (auto& y : neighbors(x)) {
        if (seen[s].count(y)) continue;
        auto hit = seen[o].find(y);
        if (hit != seen[o].end()) {
          const std::int64_t d = radius[s] + 1 + hit->second;
          if (best < 0 || d < best) best = d;
        }
        seen[s].emplace(y, radius[s] + 1);
        next.push_back(std::move(y));
      }
    }
    ++radius[s];
    if (best >= 0) return best <= cutoff ? std::optional<std::int64_t>(best) : std::nullopt;
    if (next.empty()) return std::nullopt;
    frontier[s] = std::move(next);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- geodesic, ball

MovePath Space::geodesic(const Vertex& u, const Vertex& w, std::int64_t bound) const {
  const auto d = distance(u, w, bound);
  if (!d) throw ExceedsCutoff("geodesic endpoints are farther apart than the bound");
  MovePath path{u};
  if (*d == 0) return path;
  std::optional<DistanceMap> table;
  if (!has_closed_form()) table = ball_distances(w, *d);
  auto dist_to_target = [&](const Vertex& x) -> std::int64_t {
    if (table) {
      auto it = table->find(x);
      return it == table->end() ? -1 : it->second;
    }
    return *closed_form_distance(x, w);
  };
  Vertex x = u;
  for (std::int64_t remaining = *d; remaining > 0; --remaining) {
    std::optional<Vertex> pick;
    std::string pickKey;
    for (auto& y : neighbors(x)) {
      if (dist_to_target(y) != remaining - 1) continue;
      std::string key = serialize(y);
      if (!pick || key < pickKey) {
        pick = std::move(y);
        pickKey = std::move(key);
      }
    }
    x = *pick;
    path.push_back(x);
  }
  return path;
}

DistanceMap Space::ball_distances(const Vertex& center, std::int64_t r, std::size_t limit) const {
  DistanceMap dist;
  dist.emplace(center, 0);
  std::vector<Vertex> frontier{center};
  for (std::int64_t layer = 0; layer < r && !frontier.empty(); ++layer) {
    std::vector<Vertex> next;
    for (const auto& x : frontier)
      for (auto& y : neighbors(x)) {
        if (dist.count(y)) continue;
        dist.emplace(y, layer + 1);
        if (dist.size() > limit) throw ResourceLimit("ball exceeds vertex limit");
        next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  return dist;
}

std::vector<Vertex> Space::ball(const Vertex& center, std::int64_t r, std::size_t limit) const {
  std::unordered_map<Vertex, char, VertexHash> seen;
  std::vector<Vertex> order{center};
  seen.emplace(center, 1);
  std::size_t begin = 0;
  for (std::int64_t layer = 0; layer < r; ++layer) {
    const std::size_t end = order.size();
    for (std::size_t i = begin; i < end; ++i)
      for (auto& y : neighbors(order[i])) {
        if (!seen.emplace(y, 1).second) continue;
        if (seen.size() > limit) throw ResourceLimit("ball exceeds vertex limit");
        order.push_back(std::move(y));
      }
    begin = end;
    if (begin == order.size()) break;
  }
  return order;
}

// ---------------------------------------------------------------- serialization

Json Space::to_json(const Vertex& v) const {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, GridVertex>) {
          return Json(x.coords);
        } else if constexpr (std::is_same_v<T, GridVarVertex>) {
          return Json::array({x.a, x.b});
        } else if constexpr (std::is_same_v<T, LampVertex>) {
          Json lamps = Json::array();
          for (const auto& [p, s] : x.lamps) lamps.push_back(Json::array({p, s}));
          Json j = Json::object();
          j["lamps"] = std::move(lamps);
          j["pos"] = x.pos;
          return j;
        } else if constexpr (std::is_same_v<T, BsVertex>) {
          Json j = Json::object();
          j["num"] = x.num.get_str();
          j["exp"] = x.exp;
          j["k"] = x.k;
          return j;
        } else {
          return Json(x.word);
        }
      },
      v);
}

std::string Space::serialize(const Vertex& v) const { return to_json(v).dump(); }

Vertex Space::from_json(const Json& j) const {
  Vertex v;
  try {
    switch (impl_->kind) {
      case SpaceKind::Grid:
      case SpaceKind::Line: {
        if (!j.is_array()) throw MalformedInput("grid vertex must be an array");
        GridVertex g;
        for (const auto& c : j) {
          if (!c.is_number_integer()) throw MalformedInput("grid coordinate must be an integer");
          g.coords.push_back(c.get<std::int64_t>());
        }
        v = std::move(g);
        break;
      }
      case SpaceKind::GridVariation: {
        if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
          throw MalformedInput("gridvar vertex must be [a,b]");
        v = GridVarVertex{j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
        break;
      }
      case SpaceKind::Lamplighter: {
        if (!j.is_object() || !j.contains("lamps") || !j.contains("pos"))
          throw MalformedInput("lamp vertex must have lamps and pos");
        LampVertex l;
        l.pos = j.at("pos").get<std::int64_t>();
        for (const auto& e : j.at("lamps")) {
          if (!e.is_array() || e.size() != 2) throw MalformedInput("lamp entry must be [pos,state]");
          l.lamps.emplace_back(e[0].get<std::int64_t>(), e[1].get<std::uint32_t>());
        }
        v = std::move(l);
        break;
      }
      case SpaceKind::BaumslagSolitar: {
        if (!j.is_object()) throw MalformedInput("bs vertex must be an object");
        BsVertex b;
        const auto s = j.at("num").get<std::string>();
        if (b.num.set_str(s, 10) != 0) throw MalformedInput("bad bs numerator: " + s);
        b.exp = j.at("exp").get<std::int64_t>();
        b.k = j.at("k").get<std::int64_t>();
        v = std::move(b);
        break;
      }
      case SpaceKind::FreeTree: {
        if (!j.is_string()) throw MalformedInput("tree vertex must be a string");
        v = TreeVertex{j.get<std::string>()};
        break;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("bad vertex encoding: ") + e.what());
  }
  require(v);
  return v;
}

// ---------------------------------------------------------------- group structure

Vertex Space::multiply(const Vertex& g, const Vertex& h) const {
  switch (impl_->kind) {
    case SpaceKind::Grid:
    case SpaceKind::Line: {
      GridVertex r = std::get<GridVertex>(g);
      const auto& b = std::get<GridVertex>(h).coords;
      for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += b[i];
      return r;
    }
    case SpaceKind::GridVariation: {
      const auto& a = std::get<GridVarVertex>(g);
      const auto& b = std::get<GridVarVertex>(h);
      return GridVarVertex{a.a + b.a, a.b + b.b};
    }
    case SpaceKind::Lamplighter: {
      const auto& a = std::get<LampVertex>(g);
      const auto& b = std::get<LampVertex>(h);
      LampVertex r = a;
      for (const auto& [p, s] : b.lamps) {
        const std::int64_t at = p + a.pos;
        r.set_state(at, impl_->lamps->multiply(a.state_at(at), s));
      }
      r.pos = a.pos + b.pos;
      return r;
    }
    case SpaceKind::BaumslagSolitar: {
      const auto& a = std::get<BsVertex>(g);
      const auto& b = std::get<BsVertex>(h);
      const int m = impl_->m;
      Dyadic q = add(m, scale(m, Dyadic{b.num, b.exp}, a.k), Dyadic{a.num, a.exp});
      return BsVertex{q.num, q.exp, a.k + b.k};
    }
    case SpaceKind::FreeTree: {
      std::string w = std::get<TreeVertex>(g).word;
      for (char c : std::get<TreeVertex>(h).word) {
        if (!w.empty() && w.back() == inverse_letter(c))
          w.pop_back();
        else
          w.push_back(c);
      }
      return TreeVertex{w};
    }
  }
  return g;
}

Vertex Space::inverse(const Vertex& g) const {
  switch (impl_->kind) {
    case SpaceKind::Grid:
    case SpaceKind::Line: {
      GridVertex r = std::get<GridVertex>(g);
      for (auto& c : r.coords) c = -c;
      return r;
    }
    case SpaceKind::GridVariation: {
      const auto& a = std::get<GridVarVertex>(g);
      return GridVarVertex{-a.a, -a.b};
    }
    case SpaceKind::Lamplighter: {
      const auto& a = std::get<LampVertex>(g);
      LampVertex r;
      r.pos = -a.pos;
      for (const auto& [p, s] : a.lamps) r.lamps.emplace_back(p - a.pos, impl_->lamps->inverse(s));
      return r;
    }
    case SpaceKind::BaumslagSolitar: {
      const auto& a = std::get<BsVertex>(g);
      const int m = impl_->m;
      Dyadic q = scale(m, Dyadic{-a.num, a.exp}, -a.k);
      return BsVertex{q.num, q.exp, -a.k};
    }
    case SpaceKind::FreeTree: {
      std::string w = std::get<TreeVertex>(g).word;
      std::reverse(w.begin(), w.end());
      for (auto& c : w) c = inverse_letter(c);
      return TreeVertex{w};
    }
  }
  return g;
}

}  // namespace coarse
