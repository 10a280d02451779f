#include "coarse/metagame.hpp"

#include <algorithm>
#include <fstream>

#include "coarse/agents.hpp"
#include "coarse/engine.hpp"
#include "coarse/errors.hpp"
#include "coarse/registry.hpp"

namespace coarse {

namespace {

std::int64_t ceil_int(const mpq_class& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  if (!c.fits_slong_p()) throw InvariantViolation("constant overflow");
  return c.get_si();
}

mpz_class ceil_mpz(const mpq_class& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return c;
}

/// True iff d(a, b) < bound.
bool closer_than(const Space& space, const Vertex& a, const Vertex& b, std::int64_t bound) {
  return bound > 0 && space.distance(a, b, bound - 1).has_value();
}

std::int64_t far_distance(const Space& space, const Vertex& a, const Vertex& b) {
  auto d = space.distance(a, b, std::int64_t{1} << 30);
  if (!d) throw ExceedsCutoff("distance beyond search range");
  return *d;
}

}  // namespace

std::vector<ObligationResult> assert_meta_obligations(const MetaStageRecord& rec,
                                                      const QuasiHomothetyFamily& family,
                                                      const MetaSetup& s) {
  const auto& G = family.gamma;
  const auto D = family.delta(s.j);
  std::vector<ObligationResult> out;
  auto add = [&](const char* name, bool ok, std::string detail = {}) { out.push_back({name, ok, std::move(detail)}); };
  const auto budget = s.lambda * s.psi;

  if (!rec.waypoints.empty()) {
    const auto d = far_distance(G, rec.waypoints.front(), rec.waypoints.back());
    add("meta.a-displacement", d <= budget, "d=" + std::to_string(d) + " budget=" + std::to_string(budget));
  }
  add("meta.a-walk", rec.walked <= budget, "walked=" + std::to_string(rec.walked) + " budget=" + std::to_string(budget));

  if (!rec.copsAtEnd.empty()) {
    std::int64_t worst = 0;
    for (std::size_t i = 0; i < rec.copsAtStart.size(); ++i) {
      const auto a = family.pi(s.j, rec.copsAtStart[i]);
      const auto b = family.pi(s.j, rec.copsAtEnd[i]);
      worst = std::max(worst, far_distance(D, a, b));
    }
    add("meta.b-projected-cops", worst <= s.oracleSigma,
        "max=" + std::to_string(worst) + " bound=" + std::to_string(s.oracleSigma));
  }

  std::vector<Vertex> projected;
  for (const auto& c : rec.copsAtStart) projected.push_back(family.pi(s.j, c));
  bool margin = true;
  for (const auto& x : rec.oraclePath)
    for (const auto& c : projected) margin = margin && !D.distance(c, x, s.oracleRho).has_value();
  add("meta.oracle-margin", margin);

  const auto sep = s.rhoPrime + s.sigma;
  bool separated = true;
  std::string where;
  for (const auto& r : rec.robberCheckpoints)
    for (const auto& c : rec.copCheckpoints)
      if (separated && closer_than(G, r, c, sep)) {
        separated = false;
        where = "robber " + G.serialize(r) + " cop " + G.serialize(c);
      }
  add("meta.c-separation", separated, separated ? "bound=" + std::to_string(sep) : where);

  bool boundary = true;
  for (const auto& c : rec.copsAtStart) boundary = boundary && !closer_than(G, rec.robberStart, c, 2 * s.rhoPrime);
  add("meta.c-boundary", boundary, "bound=" + std::to_string(2 * s.rhoPrime));

  bool inBall = true;
  const auto v = G.base();
  for (const auto& r : rec.robberCheckpoints) inBall = inBall && in_ball(G, v, r, s.R);
  add("meta.d-ball", inBall, "R=" + s.R.get_str());

  if (s.spacing) {
    const auto sp = *s.spacing;
    bool pretend = true, step = true;
    for (std::size_t i = 0; i < rec.copsAtStart.size(); ++i) {
      const auto p0 = family.iota(s.j, family.pi(s.j, rec.copsAtStart[i]));
      pretend = pretend && far_distance(G, p0, rec.copsAtStart[i]) <= sp;
      if (!rec.copsAtEnd.empty()) {
        const auto p1 = family.iota(s.j, family.pi(s.j, rec.copsAtEnd[i]));
        pretend = pretend && far_distance(G, p1, rec.copsAtEnd[i]) <= sp;
        step = step && far_distance(G, p0, p1) <= 2 * sp;
      }
    }
    add("meta.z2-pretend", pretend, "bound=" + std::to_string(sp));
    add("meta.z2-projected-move", step, "bound=" + std::to_string(2 * sp));
  }
  return out;
}

MetaRobber::MetaRobber(QuasiHomothetyFamily family, RobberFactory oracle, Preset preset, std::string name)
    : family_(std::move(family)), factory_(std::move(oracle)), preset_(preset), name_(std::move(name)) {}

std::unique_ptr<RobberAgent> MetaRobber::make_oracle(const Space& delta, MatchContext& octx, std::int64_t& psi,
                                                     mpz_class& R) {
  octx.space = delta;
  octx.variant = GameVariant::Weak;
  octx.params = GameParams{};
  octx.params.n = ctx().params.n;
  octx.params.v = delta.base();
  octx.params.sigma = setup_.oracleSigma;
  octx.params.rho = setup_.oracleRho;
  octx.params.horizon = ctx().params.horizon;
  octx.rng = ctx().rng;
  octx.log = ctx().log;
  auto oracle = factory_();
  oracle->attach(octx);
  psi = oracle->choose_psi(WeakPsiQuery{setup_.oracleSigma, setup_.oracleRho});
  octx.params.psi = psi;
  R = oracle->choose_radius(RadiusQuery{setup_.oracleSigma, psi, setup_.oracleRho});
  octx.params.bigR = R;
  return oracle;
}

std::int64_t MetaRobber::choose_psi(const StrongPsiQuery& q) {
  if (!(ctx().space.spec() == family_.gamma.spec()))
    throw StrategyUnavailable("meta robber for " + family_.name + " plays on " + family_.gamma.spec());
  sigma_ = q.sigma;
  setup_.sigma = q.sigma;
  if (preset_ == Preset::Z2) {
    setup_.oracleSigma = Z2OracleParams::sigma;
    setup_.oracleRho = Z2OracleParams::rho;
  } else {
    setup_.oracleSigma = ceil_int(family_.sigma_bar());
    setup_.oracleRho = ceil_int(family_.rho_bar());
  }
  MatchContext reference{family_.gamma, GameVariant::Weak, {}, nullptr, nullptr};
  make_oracle(family_.delta(family_.firstJ), reference, setup_.oraclePsi, setup_.oracleR);
  if (preset_ == Preset::Z2)
    setup_.psi = 4 * setup_.oraclePsi * q.sigma;
  else
    setup_.psi = ceil_int(q.sigma * (family_.A * setup_.oraclePsi + family_.B));
  return setup_.psi;
}

mpz_class MetaRobber::choose_radius(const RadiusQuery& q) {
  if (preset_ == Preset::Z2) {
    const auto rp = ((q.rho + sigma_ - 1) / sigma_) * sigma_;
    setup_.rhoPrime = rp;
    setup_.spacing = 4 * rp;
    setup_.j = family_.index_for_reach(4 * rp);
    setup_.lambda = rp / sigma_;
  } else {
    setup_.j = family_.index_for_reach(std::max(q.rho, sigma_));
    setup_.rhoPrime = family_.rho(setup_.j);
    setup_.lambda = (setup_.rhoPrime + sigma_ - 1) / sigma_;
  }
  delta_ = family_.delta(setup_.j);
  oracleCtx_ = std::make_unique<MatchContext>(MatchContext{*delta_, GameVariant::Weak, {}, nullptr, nullptr});
  std::int64_t psiJ = 0;
  mpz_class RJ;
  oracle_ = make_oracle(*delta_, *oracleCtx_, psiJ, RJ);
  log().check("meta.oracle-psi-bound", psiJ <= setup_.oraclePsi,
              "psi_j=" + std::to_string(psiJ) + " psi=" + std::to_string(setup_.oraclePsi));
  log().check("meta.oracle-radius-bound", RJ <= setup_.oracleR);
  if (preset_ == Preset::Z2)
    setup_.R = 4 * setup_.oracleR * setup_.rhoPrime;
  else
    setup_.R = ceil_mpz(setup_.rhoPrime * (family_.A * mpq_class(setup_.oracleR) + 2 * family_.A + 3 * family_.B));
  return setup_.R;
}

Vertex MetaRobber::place(const std::vector<Vertex>& cops) {
  std::vector<Vertex> projected;
  for (const auto& c : cops) projected.push_back(pi(c));
  oracleRobber_ = oracle_->place(projected);
  return iota(oracleRobber_);
}

void MetaRobber::close_record(const std::vector<Vertex>& copsNow) {
  auto rec = std::move(*open_);
  open_.reset();
  rec.copsAtEnd = copsNow;
  for (const auto& r : assert_meta_obligations(rec, family_, setup_)) log().check(r.name, r.pass, r.detail);
  records_.push_back(std::move(rec));
}

MovePath MetaRobber::move(const View& view) {
  if (open_)
    for (const auto& path : view.lastCopMoves)
      open_->copCheckpoints.insert(open_->copCheckpoints.end(), path.begin(), path.end());

  if ((view.stage - 1) % setup_.lambda == 0) {
    if (open_) close_record(view.cops);
    log().check("meta.robber-on-image", view.robber == iota(oracleRobber_));

    MetaStageRecord rec;
    rec.index = ++metaIndex_;
    rec.firstStage = view.stage;
    rec.copsAtStart = view.cops;
    rec.copCheckpoints = view.cops;
    rec.robberStart = view.robber;
    rec.robberCheckpoints = {view.robber};

    std::vector<Vertex> projected;
    for (const auto& c : view.cops) projected.push_back(pi(c));
    const std::vector<MovePath> noMoves;
    const View oracleView{metaIndex_, projected, oracleRobber_, noMoves};
    auto path = oracle_->move(oracleView);
    if (auto why = path_violation(*delta_, path, oracleRobber_, oracleCtx_->params.psi, "psi"))
      throw InvariantViolation("oracle returned an illegal path: " + *why);
    rec.oraclePath = path;
    for (const auto& x : path) rec.waypoints.push_back(iota(x));
    plan_ = {rec.waypoints.front()};
    for (std::size_t i = 1; i < rec.waypoints.size(); ++i) {
      const auto& a = rec.waypoints[i - 1];
      const auto& b = rec.waypoints[i];
      const auto geo = family_.gamma.geodesic(a, b, far_distance(family_.gamma, a, b));
      plan_.insert(plan_.end(), geo.begin() + 1, geo.end());
    }
    rec.walked = static_cast<std::int64_t>(plan_.size()) - 1;
    cursor_ = 0;
    oracleRobber_ = path.back();
    open_ = std::move(rec);
  }

  const auto end = std::min(cursor_ + static_cast<std::size_t>(setup_.psi), plan_.size() - 1);
  MovePath out(plan_.begin() + static_cast<std::ptrdiff_t>(cursor_),
               plan_.begin() + static_cast<std::ptrdiff_t>(end) + 1);
  cursor_ = end;
  if (!(out.front() == view.robber)) throw InvariantViolation("meta robber lost track of its plan");
  open_->robberCheckpoints.insert(open_->robberCheckpoints.end(), out.begin() + 1, out.end());
  return out;
}

std::unique_ptr<MetaRobber> make_meta_robber(const std::string& preset) {
  if (preset == "z2") {
    RobberFactory oracle = [] {
      GreedyEvaderConfig cfg;
      cfg.margin = Z2OracleParams::margin;
      cfg.psi = Z2OracleParams::psi;
      cfg.R = Z2OracleParams::R;
      cfg.confine = true;
      return std::unique_ptr<RobberAgent>(std::make_unique<GreedyEvader>(cfg));
    };
    return std::make_unique<MetaRobber>(z2_scaling_family(), oracle, MetaRobber::Preset::Z2, "meta:z2");
  }
  const std::string lamp = "lamplighter:";
  if (preset.rfind(lamp, 0) == 0) {
    RobberFactory oracle = [] { return std::unique_ptr<RobberAgent>(std::make_unique<LamplighterEvader>()); };
    return std::make_unique<MetaRobber>(parse_family(preset), oracle, MetaRobber::Preset::Generic, "meta:" + preset);
  }
  const std::string custom = "custom:";
  if (preset.rfind(custom, 0) == 0) {
    const auto file = preset.substr(custom.size());
    std::ifstream in(file);
    if (!in) throw MalformedInput("cannot open meta preset file " + file);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const std::exception& e) {
      throw MalformedInput("bad meta preset file " + file + ": " + e.what());
    }
    if (!j.contains("family") || !j.contains("oracle")) throw MalformedInput("meta preset needs family and oracle");
    const auto family = parse_family(j.at("family").get<std::string>());
    const auto spec = j.at("oracle").get<std::string>();
    const Json options = j.value("oracleOptions", Json::object());
    make_robber(spec, options);  // validate eagerly
    RobberFactory oracle = [spec, options] { return make_robber(spec, options); };
    return std::make_unique<MetaRobber>(family, oracle, MetaRobber::Preset::Generic, "meta:" + preset);
  }
  throw MalformedInput("unknown meta preset: " + preset);
}

}  // namespace coarse
