#include "coarse/agents.hpp"
#include "coarse/errors.hpp"

namespace coarse {

ProjectionEvader::ProjectionEvader(std::unique_ptr<RobberAgent> inner, int first, int second)
    : inner_(std::move(inner)), first_(first), second_(second) {
  if (first_ < 0 || second_ < 0 || first_ == second_) throw MalformedInput("projection needs two distinct coordinates");
}

void ProjectionEvader::attach(MatchContext& ctx) {
  if (ctx.space.kind() != SpaceKind::Grid || ctx.space.dimension() < 2 ||
      std::max(first_, second_) >= ctx.space.dimension())
    throw StrategyUnavailable("projection needs grid:n with both coordinates below n");
  RobberAgent::attach(ctx);
  innerCtx_ = std::make_unique<MatchContext>(MatchContext{Space::grid(2), ctx.variant, ctx.params, ctx.rng, ctx.log});
  sync();
  inner_->attach(*innerCtx_);
}

void ProjectionEvader::sync() {
  innerCtx_->variant = ctx().variant;
  innerCtx_->params = ctx().params;
  innerCtx_->params.v = project(ctx().params.v);
}

Vertex ProjectionEvader::project(const Vertex& v) const {
  const auto& c = std::get<GridVertex>(v).coords;
  return grid_vertex({c[static_cast<std::size_t>(first_)], c[static_cast<std::size_t>(second_)]});
}

Vertex ProjectionEvader::lift(const Vertex& planar, const Vertex& ambient) const {
  auto c = std::get<GridVertex>(ambient).coords;
  const auto& p = std::get<GridVertex>(planar).coords;
  c[static_cast<std::size_t>(first_)] = p[0];
  c[static_cast<std::size_t>(second_)] = p[1];
  return grid_vertex(std::move(c));
}

std::int64_t ProjectionEvader::choose_psi(const WeakPsiQuery& q) {
  sync();
  return inner_->choose_psi(q);
}

std::int64_t ProjectionEvader::choose_psi(const StrongPsiQuery& q) {
  sync();
  return inner_->choose_psi(q);
}

mpz_class ProjectionEvader::choose_radius(const RadiusQuery& q) {
  sync();
  innerCtx_->params.psi = q.psi;
  innerCtx_->params.rho = q.rho;
  return inner_->choose_radius(q);
}

Vertex ProjectionEvader::place(const std::vector<Vertex>& cops) {
  sync();
  std::vector<Vertex> planar;
  for (const auto& c : cops) planar.push_back(project(c));
  return lift(inner_->place(planar), ctx().params.v);
}

MovePath ProjectionEvader::move(const View& view) {
  sync();
  std::vector<Vertex> cops;
  for (const auto& c : view.cops) cops.push_back(project(c));
  std::vector<MovePath> moves;
  for (const auto& m : view.lastCopMoves) {
    MovePath p;
    for (const auto& x : m) p.push_back(project(x));
    moves.push_back(std::move(p));
  }
  const auto robber = project(view.robber);
  const auto planar = inner_->move(View{view.stage, cops, robber, moves});
  MovePath out;
  for (const auto& x : planar) out.push_back(lift(x, view.robber));
  return out;
}

}  // namespace coarse
