#include "coarse/registry.hpp"

#include <fstream>

#include "coarse/agents.hpp"
#include "coarse/engine.hpp"
#include "coarse/errors.hpp"
#include "coarse/metagame.hpp"

namespace coarse {

namespace {

std::int64_t parse_count(const std::string& text, const std::string& spec) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || v < 0) throw MalformedInput("bad number in agent spec " + spec);
  return v;
}

std::int64_t option_int(const Json& options, const char* key, std::int64_t fallback) {
  if (!options.contains(key)) return fallback;
  const auto& v = options.at(key);
  if (!v.is_number_integer()) throw MalformedInput(std::string("option ") + key + " must be an integer");
  return v.get<std::int64_t>();
}

mpz_class option_mpz(const Json& options, const char* key, const mpz_class& fallback) {
  if (!options.contains(key)) return fallback;
  const auto& v = options.at(key);
  if (v.is_number_integer()) return mpz_class(std::to_string(v.get<std::int64_t>()));
  if (v.is_string()) return mpz_class(v.get<std::string>());
  throw MalformedInput(std::string("option ") + key + " must be an integer");
}

}  // namespace

std::unique_ptr<RobberAgent> make_robber(const std::string& spec, const Json& options) {
  if (spec == "bigon") return std::make_unique<BigonEvader>(option_int(options, "searchRadius", 8));
  if (spec == "bottleneck") return std::make_unique<BottleneckEvader>();
  if (spec == "lamplighter") return std::make_unique<LamplighterEvader>();
  if (spec == "bs-sheet") return std::make_unique<BsSheetEvader>();
  if (spec == "greedy-evader" || spec.rfind("greedy-evader:", 0) == 0) {
    GreedyEvaderConfig cfg;
    if (spec.size() > 13) cfg.margin = parse_count(spec.substr(14), spec);
    cfg.psi = option_int(options, "psi", cfg.psi);
    cfg.R = option_mpz(options, "R", cfg.R);
    cfg.confine = options.value("confine", false);
    if (cfg.psi < 1 || cfg.R < 1) throw MalformedInput("greedy-evader needs positive psi and R");
    return std::make_unique<GreedyEvader>(cfg);
  }
  if (spec.rfind("meta:", 0) == 0) return make_meta_robber(spec.substr(5));
  if (spec.rfind("proj:", 0) == 0) {
    const auto rest = spec.substr(5);
    const auto colon = rest.find(':');
    const auto comma = rest.find(',');
    if (colon == std::string::npos || comma == std::string::npos || comma > colon)
      throw MalformedInput("projection spec is proj:<i>,<j>:<inner>");
    const auto i = parse_count(rest.substr(0, comma), spec);
    const auto j = parse_count(rest.substr(comma + 1, colon - comma - 1), spec);
    return std::make_unique<ProjectionEvader>(make_robber(rest.substr(colon + 1), options), static_cast<int>(i),
                                              static_cast<int>(j));
  }
  throw MalformedInput("unknown robber spec: " + spec);
}

std::unique_ptr<CopAgent> make_cop(const std::string& spec, const Json& options) {
  const auto colon = spec.find(':');
  const auto head = spec.substr(0, colon);
  const auto tail = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  if (head == "scripted") {
    if (tail.empty()) throw MalformedInput("scripted cops need a trace file");
    std::ifstream in(tail);
    if (!in) throw MalformedInput("cannot open trace " + tail);
    std::optional<Space> space;
    return std::make_unique<ScriptedCop>(read_trace(in, space));
  }
  CopConfig cfg;
  cfg.n = tail.empty() ? 1 : parse_count(tail, spec);
  cfg.sigma = option_int(options, "sigma", 1);
  cfg.rho = option_int(options, "rho", 1);
  if (cfg.n < 1) throw MalformedInput("need at least one cop");
  if (head == "greedy") return std::make_unique<GreedyCop>(cfg);
  if (head == "random") return std::make_unique<RandomCop>(cfg);
  if (head == "pusher") return std::make_unique<PusherCop>(cfg);
  throw MalformedInput("unknown cop spec: " + spec);
}

}  // namespace coarse
