// coarse-cops: run, replay and analyze cops-and-robbers matches on Cayley graphs.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "coarse/analysis.hpp"
#include "coarse/engine.hpp"
#include "coarse/errors.hpp"
#include "coarse/homothety.hpp"
#include "coarse/registry.hpp"
#include "coarse/serve.hpp"

namespace {

using namespace coarse;

constexpr int kExitOk = 0;
constexpr int kExitCaptured = 2;
constexpr int kExitAssertion = 3;
constexpr int kExitForfeit = 4;
constexpr int kExitDivergence = 5;
constexpr int kExitBadSpec = 64;

struct AgentFlags {
  std::optional<std::int64_t> sigma, rho, psi, searchRadius;
  std::optional<std::string> R;
  bool confine = false;
  std::string options = "{}";

  void add(CLI::App& cmd) {
    cmd.add_option("--sigma", sigma, "Cop speed for built-in cop agents");
    cmd.add_option("--rho", rho, "Cop reach for built-in cop agents");
    cmd.add_option("--psi", psi, "Robber speed for greedy-evader");
    cmd.add_option("--R", R, "Robber radius for greedy-evader");
    cmd.add_option("--search-radius", searchRadius, "Bigon search radius");
    cmd.add_flag("--confine", confine, "Confine greedy-evader to B_R");
    cmd.add_option("--options", options, "Extra agent options as a JSON object");
  }

  Json json() const {
    Json j;
    try {
      j = Json::parse(options);
    } catch (const std::exception& e) {
      throw MalformedInput(std::string("--options is not JSON: ") + e.what());
    }
    if (!j.is_object()) throw MalformedInput("--options must be a JSON object");
    if (sigma) j["sigma"] = *sigma;
    if (rho) j["rho"] = *rho;
    if (psi) j["psi"] = *psi;
    if (R) j["R"] = *R;
    if (searchRadius) j["searchRadius"] = *searchRadius;
    if (confine) j["confine"] = true;
    return j;
  }
};

AssertionMode parse_mode(const std::string& m) {
  if (m == "record") return AssertionMode::Record;
  if (m == "fail-fast") return AssertionMode::FailFast;
  throw MalformedInput("mode must be record or fail-fast");
}

std::vector<std::int64_t> parse_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw MalformedInput("bad integer list: " + s);
    }
  }
  if (out.empty()) throw MalformedInput("empty integer list");
  return out;
}

int outcome_exit(const Trace& trace) {
  if (is_captured(trace.outcome)) return kExitCaptured;
  if (const auto* f = std::get_if<Forfeit>(&trace.outcome))
    return f->kind == ForfeitKind::Assertion ? kExitAssertion : kExitForfeit;
  for (const auto& a : trace.assertions)
    if (!a.pass) return kExitAssertion;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cops and robbers on coarse spaces"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Play one match and write its trace");
  std::string space, variant = "weak", cops, robber, trace, mode = "record";
  std::int64_t horizon = 100;
  std::uint64_t seed = 0;
  AgentFlags runFlags;
  run->add_option("--space", space, "Space spec")->required();
  run->add_option("--variant", variant, "weak or strong");
  run->add_option("--cops", cops, "Cop agent spec")->required();
  run->add_option("--robber", robber, "Robber agent spec")->required();
  run->add_option("--horizon", horizon, "Number of stages");
  run->add_option("--seed", seed, "Random seed")->required();
  run->add_option("--trace", trace, "Trace output path (JSON lines)");
  run->add_option("--mode", mode, "Assertion mode: record or fail-fast");
  runFlags.add(*run);

  // replay
  auto* replay = app.add_subcommand("replay", "Re-simulate a trace");
  std::string replayFile;
  std::optional<std::int64_t> recheck;
  replay->add_option("trace", replayFile, "Trace file")->required();
  replay->add_option("--recheck-reach", recheck, "Re-check captures with a smaller reach");

  // verify
  auto* verify = app.add_subcommand("verify", "Check quasi-homothety inequalities");
  std::string family, js = "1,2,3";
  std::int64_t radius = 5;
  std::uint64_t verifySeed = 1;
  verify->add_option("--family", family, "z2 or lamplighter:<q>")->required();
  verify->add_option("--j", js, "Comma-separated indices");
  verify->add_option("--radius", radius, "Sample radius");
  verify->add_option("--seed", verifySeed, "Seed for random sampling");

  // scan
  auto* scan = app.add_subcommand("scan", "Widest bigon with endpoints in a ball");
  std::string scanSpace;
  std::int64_t scanRadius = 3;
  scan->add_option("--space", scanSpace, "Space spec")->required();
  scan->add_option("--radius", scanRadius, "Ball radius");

  // hd
  auto* hdCmd = app.add_subcommand("hd", "Axis displacement in bs(m)");
  std::string hdSpace;
  std::int64_t H = 1, reach = 1;
  bool csv = false;
  hdCmd->add_option("--space", hdSpace, "bs:<m>")->required();
  hdCmd->add_option("--H", H, "Maximum height");
  hdCmd->add_option("--reach", reach, "Reach");
  hdCmd->add_flag("--csv", csv, "Table over 0..H and 1..reach");

  // serve
  auto* serveCmd = app.add_subcommand("serve", "Serve the session protocol with remote cops");
  std::uint16_t port = 7777;
  int connections = 0, timeoutMs = 300'000;
  std::string serveSpace, serveVariant = "weak", serveRobber, serveTrace, serveMode = "record";
  std::int64_t serveHorizon = 100;
  std::uint64_t serveSeed = 0;
  AgentFlags serveFlags;
  serveCmd->add_option("--port", port, "TCP port on 127.0.0.1 (0 picks one)");
  serveCmd->add_option("--space", serveSpace, "Space spec")->required();
  serveCmd->add_option("--variant", serveVariant, "weak or strong");
  serveCmd->add_option("--robber", serveRobber, "Robber agent spec")->required();
  serveCmd->add_option("--horizon", serveHorizon, "Number of stages");
  serveCmd->add_option("--seed", serveSeed, "Random seed")->required();
  serveCmd->add_option("--trace", serveTrace, "Trace path for the first game");
  serveCmd->add_option("--mode", serveMode, "Assertion mode");
  serveCmd->add_option("--connections", connections, "Exit after this many games (0 = forever)");
  serveCmd->add_option("--timeout-ms", timeoutMs, "Client read timeout");
  serveFlags.add(*serveCmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadSpec;
  }

  try {
    if (*run) {
      const auto sp = Space::parse(space);
      const auto options = runFlags.json();
      auto cop = make_cop(cops, options);
      auto rob = make_robber(robber, options);
      RunOptions opts;
      opts.variant = parse_variant(variant);
      opts.horizon = horizon;
      opts.seed = seed;
      opts.mode = parse_mode(mode);
      opts.copSpec = cops;
      opts.robberSpec = robber;
      opts.agentOptions = options;
      const auto result = run_match(sp, *cop, *rob, opts);
      if (!trace.empty()) {
        std::ofstream out(trace);
        if (!out) throw MalformedInput("cannot write trace " + trace);
        write_trace(out, sp, result);
      }
      std::size_t failures = 0;
      for (const auto& a : result.assertions) failures += a.pass ? 0 : 1;
      std::cout << Json{{"outcome", outcome_to_json(sp, result.outcome)},
                        {"params", params_to_json(result.header.params)},
                        {"assertions", result.assertions.size()},
                        {"assertionFailures", failures}}
                       .dump()
                << "\n";
      return outcome_exit(result);
    }
    if (*replay) {
      std::ifstream in(replayFile);
      if (!in) throw MalformedInput("cannot open trace " + replayFile);
      std::optional<Space> sp;
      const auto t = read_trace(in, sp);
      const auto res = replay_trace(*sp, t, recheck);
      if (!res.ok) {
        std::cout << Json{{"ok", false}, {"divergentStage", res.divergentStage}, {"reason", res.reason}}.dump()
                  << "\n";
        return kExitDivergence;
      }
      std::cout << Json{{"ok", true}, {"outcome", outcome_to_json(*sp, res.outcome)}}.dump() << "\n";
      return kExitOk;
    }
    if (*verify) {
      SampleSpec spec;
      spec.js = parse_list(js);
      spec.radius = radius;
      spec.seed = verifySeed;
      const auto report = verify_family(parse_family(family), spec);
      std::cout << report_to_json(report).dump(2) << "\n";
      return report.violations() == 0 ? kExitOk : 1;
    }
    if (*scan) {
      const auto sp = Space::parse(scanSpace);
      std::cout << scan_to_json(sp, bigon_thinness_scan(sp, scanRadius)).dump() << "\n";
      return kExitOk;
    }
    if (*hdCmd) {
      const auto sp = Space::parse(hdSpace);
      if (csv) write_hd_csv(std::cout, sp, H, reach);
      else std::cout << Json{{"H", H}, {"reach", reach}, {"value", hd(sp, H, reach).get_str()}}.dump() << "\n";
      return kExitOk;
    }
    if (*serveCmd) {
      ServeConfig cfg;
      cfg.space = serveSpace;
      cfg.variant = parse_variant(serveVariant);
      cfg.robberSpec = serveRobber;
      cfg.agentOptions = serveFlags.json();
      cfg.horizon = serveHorizon;
      cfg.seed = serveSeed;
      cfg.mode = parse_mode(serveMode);
      cfg.timeoutMs = timeoutMs;
      cfg.tracePath = serveTrace;
      serve(port, cfg, connections, [](std::uint16_t p) {
        std::cout << Json{{"listening", p}}.dump() << std::endl;
      });
      return kExitOk;
    }
  } catch (const MalformedInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadSpec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
