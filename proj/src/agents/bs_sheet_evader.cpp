#include <algorithm>

#include "coarse/agents.hpp"
#include "coarse/errors.hpp"

namespace coarse {

namespace {

bool within(const Space& space, const Vertex& a, const Vertex& b, std::int64_t r) {
  if (space.lower_bound(a, b) > r) return false;
  return space.distance(a, b, r).has_value();
}

mpq_class shadow(int m, const BsVertex& v) {
  mpq_class q(v.num, bs::power(m, v.exp));
  q.canonicalize();
  return q;
}

}  // namespace

std::int64_t BsSheetEvader::choose_psi(const StrongPsiQuery& q) {
  if (space().kind() != SpaceKind::BaumslagSolitar) throw StrategyUnavailable("bs-sheet evader needs a bs space");
  m_ = space().modulus();
  const auto n = ctx().params.n;
  if (m_ < n + 1)
    throw StrategyUnavailable("bs:" + std::to_string(m_) + " has " + std::to_string(m_) + " sheets, " +
                              std::to_string(n) + " cops need " + std::to_string(n + 1));
  n_ = m_ - 1;
  sigma_ = std::max(q.sigma, n_ + 1);
  psi_ = 17 * sigma_;
  return psi_;
}

mpz_class BsSheetEvader::choose_radius(const RadiusQuery& q) {
  rho_ = std::max(q.rho, 3 * sigma_ + 1);
  R_ = mpz_class(n_) * bs::power(2, 8 * rho_) + 8 * rho_ + n_;
  return R_;
}

std::vector<Vertex> BsSheetEvader::with_phantoms(const std::vector<Vertex>& cops) const {
  auto all = cops;
  while (static_cast<std::int64_t>(all.size()) < n_) all.push_back(space().base());
  return all;
}

Vertex BsSheetEvader::sheet_top(std::int64_t i) const { return bs::make(m_, i, 0, 8 * rho_); }

bool BsSheetEvader::in_upper_part(std::int64_t i, const Vertex& v) const {
  const auto& b = std::get<BsVertex>(v);
  if (b.exp != 0 || b.k < (rho_ + 1) / 2 || b.k > 8 * rho_) return false;
  const mpz_class step = bs::power(m_, b.k);
  const mpz_class diff = b.num - i;
  if (diff % step != 0) return false;
  const mpz_class N = diff / step;
  return N >= 0 && N <= mpz_class(n_) * bs::power(2, 8 * rho_ - b.k);
}

bool BsSheetEvader::in_sheets(const Vertex& v) const {
  const auto& b = std::get<BsVertex>(v);
  if (b.exp != 0 || b.k < 0 || b.k > 8 * rho_) return false;
  const mpz_class step = bs::power(m_, b.k);
  const mpz_class width = mpz_class(n_) * bs::power(m_, 8 * rho_ - b.k);
  for (std::int64_t i = 0; i <= n_; ++i) {
    const mpz_class diff = b.num - i;
    if (diff % step != 0) continue;
    const mpz_class N = diff / step;
    if (N >= 0 && N <= width) return true;
  }
  return false;
}

MovePath BsSheetEvader::flee_path(std::int64_t i, std::int64_t j, std::int64_t k) const {
  auto cur = std::get<BsVertex>(sheet_top(i));
  MovePath path{Vertex(cur)};
  auto a = [&](std::int64_t count) {
    const mpz_class dir = count < 0 ? -1 : 1;
    for (std::int64_t s = 0; s < std::abs(count); ++s) {
      cur = bs::shift_a(m_, cur, dir);
      path.push_back(Vertex(cur));
    }
  };
  auto t = [&](std::int64_t count) {
    const std::int64_t dir = count < 0 ? -1 : 1;
    for (std::int64_t s = 0; s < std::abs(count); ++s) {
      cur = bs::shift_t(cur, dir);
      path.push_back(Vertex(cur));
    }
  };
  a(k);
  t(-8 * rho_);
  a(j - i);
  t(8 * rho_);
  a(-k);
  return path;
}

bool BsSheetEvader::path_blocked(std::int64_t i, std::int64_t j, std::int64_t k,
                                 const std::vector<Vertex>& cops) const {
  const mpz_class offset = mpz_class(k) * bs::power(m_, 8 * rho_);
  const mpq_class lo(offset + std::min(i, j)), hi(offset + std::max(i, j));
  const mpq_class margin(2 * bs::power(2, 3 * rho_));
  for (const auto& c : cops) {
    const auto q = shadow(m_, std::get<BsVertex>(c));
    mpq_class gap = 0;
    if (q < lo) gap = lo - q;
    if (q > hi) gap = q - hi;
    if (gap < margin) return true;
  }
  return false;
}

Vertex BsSheetEvader::place(const std::vector<Vertex>& cops) {
  const auto all = with_phantoms(cops);
  for (std::int64_t i = 0; i <= n_; ++i) {
    const bool free = std::none_of(all.begin(), all.end(), [&](const Vertex& c) { return in_upper_part(i, c); });
    if (free) {
      log().check("bs.placement", true);
      sheet_ = i;
      return sheet_top(i);
    }
  }
  log().check("bs.placement", false, "every upper part holds a cop");
  throw InvariantViolation("no cop-free sheet for placement");
}

MovePath BsSheetEvader::move(const View& view) {
  const auto cops = with_phantoms(view.cops);
  if (pending_.empty()) {
    if (!(view.robber == sheet_top(sheet_))) throw InvariantViolation("robber is not at its sheet top");
    bool trigger = false;
    for (const auto& c : cops)
      trigger = trigger || in_upper_part(sheet_, c) || within(space(), c, view.robber, 3 * rho_);
    if (!trigger) {
      log().check("bs.in-sheets", in_sheets(view.robber));
      log().check("bs.in-ball", in_ball(space(), ctx().params.v, view.robber, R_));
      return {view.robber};
    }

    std::optional<std::int64_t> dest;
    for (std::int64_t j = 0; j <= n_ && !dest; ++j) {
      if (j == sheet_) continue;
      if (std::none_of(cops.begin(), cops.end(), [&](const Vertex& c) { return in_upper_part(j, c); })) dest = j;
    }
    log().check("bs.safe-sheet", dest.has_value());
    if (!dest) throw InvariantViolation("no cop-free destination sheet");

    std::vector<std::int64_t> open;
    for (std::int64_t k = 0; k <= n_; ++k)
      if (!path_blocked(sheet_, *dest, k, cops)) open.push_back(k);
    log().check("bs.safe-path", !open.empty(), "open paths=" + std::to_string(open.size()));
    if (open.empty()) throw InvariantViolation("every flee path is blocked");

    std::int64_t chosen = open.front();
    for (const auto k : open) {
      const auto p = flee_path(sheet_, *dest, k);
      const bool clear = std::none_of(p.begin(), p.end(), [&](const Vertex& x) {
        return std::any_of(cops.begin(), cops.end(), [&](const Vertex& c) { return within(space(), c, x, 2 * rho_); });
      });
      if (clear) {
        chosen = k;
        break;
      }
    }
    pending_ = flee_path(sheet_, *dest, chosen);
    cursor_ = 0;
    target_ = *dest;
    ++flees_;
    const auto len = static_cast<std::int64_t>(pending_.size()) - 1;
    log().check("bs.path-length", len == 2 * chosen + 16 * rho_ + std::abs(*dest - sheet_) && len <= 3 * n_ + 16 * rho_,
                "length=" + std::to_string(len));
    log().check("bs.endpoint", pending_.back() == sheet_top(*dest));
  }

  const auto end = std::min(cursor_ + static_cast<std::size_t>(psi_), pending_.size() - 1);
  MovePath out(pending_.begin() + static_cast<std::ptrdiff_t>(cursor_),
               pending_.begin() + static_cast<std::ptrdiff_t>(end) + 1);
  cursor_ = end;
  bool inSheets = true, inBall = true;
  for (const auto& x : out) {
    inSheets = inSheets && in_sheets(x);
    inBall = inBall && in_ball(space(), ctx().params.v, x, R_);
  }
  log().check("bs.in-sheets", inSheets);
  log().check("bs.in-ball", inBall);
  if (cursor_ + 1 == pending_.size()) {
    sheet_ = target_;
    pending_.clear();
  }
  return out;
}

}  // namespace coarse
