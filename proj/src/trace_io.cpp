#include <istream>
#include <ostream>
#include <sstream>

#include "coarse/engine.hpp"

namespace coarse {

namespace {

Json big_to_json(const mpz_class& v) {
  if (v.fits_slong_p()) return Json(static_cast<std::int64_t>(v.get_si()));
  return Json(v.get_str());
}

mpz_class big_from_json(const Json& j) {
  if (j.is_number_integer()) return mpz_class(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    mpz_class v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw MalformedInput("bad integer string");
    return v;
  }
  throw MalformedInput("expected an integer");
}

Json path_to_json(const Space& space, const MovePath& path) {
  Json arr = Json::array();
  for (const auto& v : path) arr.push_back(space.to_json(v));
  return arr;
}

MovePath path_from_json(const Space& space, const Json& j) {
  if (!j.is_array() || j.empty()) throw MalformedInput("path must be a nonempty array");
  MovePath path;
  for (const auto& v : j) path.push_back(space.from_json(v));
  return path;
}

Side side_from(const std::string& s) {
  if (s == "cop") return Side::Cop;
  if (s == "robber") return Side::Robber;
  throw MalformedInput("unknown side " + s);
}

ForfeitKind kind_from(const std::string& s) {
  for (auto k : {ForfeitKind::Protocol, ForfeitKind::StrategyUnavailable, ForfeitKind::Invariant,
                 ForfeitKind::OracleFailure, ForfeitKind::Assertion})
    if (s == forfeit_kind_name(k)) return k;
  throw MalformedInput("unknown forfeit kind " + s);
}

Outcome outcome_from_json(const Space& space, const Json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "captured")
    return Captured{j.at("stage").get<std::int64_t>(), j.at("copIndex").get<std::int64_t>(),
                    space.from_json(j.at("atVertex"))};
  if (type == "horizon")
    return HorizonReached{j.at("stages").get<std::int64_t>(),
                          j.at("ballVisitStages").get<std::vector<std::int64_t>>(),
                          j.at("lastInBall").get<bool>()};
  if (type == "forfeit")
    return Forfeit{side_from(j.at("side").get<std::string>()),
                   kind_from(j.at("kind").get<std::string>()), j.at("stage").get<std::int64_t>(),
                   j.at("reason").get<std::string>()};
  throw MalformedInput("unknown outcome type " + type);
}

}  // namespace

Json params_to_json(const GameParams& p) {
  return Json{{"n", p.n},         {"sigma", p.sigma},       {"psi", p.psi},
              {"rho", p.rho},     {"R", big_to_json(p.bigR)}, {"horizon", p.horizon}};
}

Json outcome_to_json(const Space& space, const Outcome& outcome) {
  return std::visit(
      [&](const auto& o) -> Json {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Captured>) {
          return Json{{"type", "captured"},
                      {"stage", o.stage},
                      {"copIndex", o.copIndex},
                      {"atVertex", space.to_json(o.atVertex)}};
        } else if constexpr (std::is_same_v<T, HorizonReached>) {
          return Json{{"type", "horizon"},
                      {"stages", o.stages},
                      {"ballVisitStages", o.ballVisitStages},
                      {"lastInBall", o.lastInBall}};
        } else {
          return Json{{"type", "forfeit"},
                      {"side", side_name(o.side)},
                      {"kind", forfeit_kind_name(o.kind)},
                      {"stage", o.stage},
                      {"reason", o.reason}};
        }
      },
      outcome);
}

void write_trace(std::ostream& out, const Space& space, const Trace& trace) {
  const auto& h = trace.header;
  Json header{{"space", h.space},
              {"variant", variant_name(h.variant)},
              {"params", params_to_json(h.params)},
              {"seed", h.seed},
              {"cops", h.copSpec},
              {"robber", h.robberSpec},
              {"options", h.agentOptions}};
  if (h.placed) {
    Json cops = Json::array();
    for (const auto& c : h.placementCops) cops.push_back(space.to_json(c));
    header["placement"] = Json{{"cops", cops}, {"robber", space.to_json(h.placementRobber)}};
  }
  out << header.dump() << '\n';
  for (const auto& rec : trace.stages) {
    Json moves = Json::array();
    for (const auto& m : rec.copMoves) moves.push_back(path_to_json(space, m));
    Json line{{"stage", rec.stage},
              {"copMoves", moves},
              {"robberMove", path_to_json(space, rec.robberMove)},
              {"minCopDist", rec.minCopDist},
              {"inBall", rec.inBall}};
    out << line.dump() << '\n';
  }
  Json assertions = Json::array();
  for (const auto& a : trace.assertions)
    assertions.push_back(
        Json{{"stage", a.stage}, {"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
  Json last{{"outcome", outcome_to_json(space, trace.outcome)}, {"assertions", assertions}};
  out << last.dump() << '\n';
}

std::string trace_to_string(const Space& space, const Trace& trace) {
  std::ostringstream os;
  write_trace(os, space, trace);
  return os.str();
}

Trace read_trace(std::istream& in, std::optional<Space>& space) {
  std::vector<Json> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      lines.push_back(Json::parse(line));
    } catch (const Json::exception& e) {
      throw MalformedInput(std::string("trace line is not JSON: ") + e.what());
    }
  }
  if (lines.size() < 2) throw MalformedInput("trace needs a header and an outcome line");
  try {
    Trace trace;
    const auto& hj = lines.front();
    auto& h = trace.header;
    h.space = hj.at("space").get<std::string>();
    space = Space::parse(h.space);
    h.variant = parse_variant(hj.at("variant").get<std::string>());
    const auto& pj = hj.at("params");
    h.params.n = pj.at("n").get<std::int64_t>();
    h.params.sigma = pj.at("sigma").get<std::int64_t>();
    h.params.psi = pj.at("psi").get<std::int64_t>();
    h.params.rho = pj.at("rho").get<std::int64_t>();
    h.params.bigR = big_from_json(pj.at("R"));
    h.params.horizon = pj.at("horizon").get<std::int64_t>();
    h.params.v = space->base();
    h.seed = hj.at("seed").get<std::uint64_t>();
    h.copSpec = hj.value("cops", "");
    h.robberSpec = hj.value("robber", "");
    h.agentOptions = hj.value("options", Json::object());
    if (hj.contains("placement")) {
      h.placed = true;
      for (const auto& c : hj["placement"].at("cops")) h.placementCops.push_back(space->from_json(c));
      h.placementRobber = space->from_json(hj["placement"].at("robber"));
    }
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
      const auto& sj = lines[i];
      StageRecord rec;
      rec.stage = sj.at("stage").get<std::int64_t>();
      for (const auto& m : sj.at("copMoves")) rec.copMoves.push_back(path_from_json(*space, m));
      rec.robberMove = path_from_json(*space, sj.at("robberMove"));
      rec.minCopDist = sj.at("minCopDist").get<std::int64_t>();
      rec.inBall = sj.at("inBall").get<bool>();
      trace.stages.push_back(std::move(rec));
    }
    const auto& last = lines.back();
    trace.outcome = outcome_from_json(*space, last.at("outcome"));
    for (const auto& a : last.at("assertions"))
      trace.assertions.push_back({a.at("stage").get<std::int64_t>(), a.at("name").get<std::string>(),
                                  a.at("pass").get<bool>(), a.at("detail").get<std::string>()});
    return trace;
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("malformed trace: ") + e.what());
  }
}

}  // namespace coarse
