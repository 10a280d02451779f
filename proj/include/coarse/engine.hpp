#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coarse/game.hpp"

namespace coarse {

struct StageRecord {
  std::int64_t stage = 0;
  std::vector<MovePath> copMoves;
  MovePath robberMove;
  std::int64_t minCopDist = 0;
  bool inBall = false;
};

struct TraceHeader {
  std::string space;
  GameVariant variant = GameVariant::Weak;
  GameParams params;
  std::uint64_t seed = 0;
  std::string copSpec;
  std::string robberSpec;
  Json agentOptions = Json::object();
  bool placed = false;
  std::vector<Vertex> placementCops;
  Vertex placementRobber;
};

struct Trace {
  TraceHeader header;
  std::vector<StageRecord> stages;
  Outcome outcome;
  std::vector<AssertionRecord> assertions;
};

struct GameState {
  std::vector<Vertex> cops;
  Vertex robber;
  std::int64_t stage = 0;
};

struct RunOptions {
  GameVariant variant = GameVariant::Weak;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  AssertionMode mode = AssertionMode::Record;
  std::string copSpec;
  std::string robberSpec;
  Json agentOptions = Json::object();
  /// Called after negotiation, after placement and after every stage.
  std::function<void(const Trace&, const GameState&)> observer;
};

/// Distance cutoff used by capture checks.
inline std::int64_t capture_cutoff(const GameParams& p) { return p.rho + p.sigma + 1; }

/// Checkpoint group 1: cop path vertices against the stationary robber.
std::optional<Captured> check_cop_moves(const Space& space, const GameParams& params,
                                        const std::vector<MovePath>& copMoves,
                                        const Vertex& robber, std::int64_t stage);
/// Checkpoint group 2: robber path vertices against post-move cop positions.
std::optional<Captured> check_robber_move(const Space& space, const GameParams& params,
                                          const std::vector<Vertex>& cops,
                                          const MovePath& robberMove, std::int64_t stage);
/// Minimum cop distance, saturated at capture_cutoff + 1.
std::int64_t min_cop_distance(const Space& space, const GameParams& params,
                              const std::vector<Vertex>& cops, const Vertex& robber);
/// d(v, x) <= R, certified exactly or through a constructive word.
bool in_ball(const Space& space, const Vertex& center, const Vertex& x, const mpz_class& R);

Trace run_match(const Space& space, CopAgent& cop, RobberAgent& robber, const RunOptions& opts);

struct ReplayResult {
  bool ok = true;
  std::int64_t divergentStage = -1;
  std::string reason;
  Outcome outcome;
};

/// Re-simulates recorded moves. With `rho` set, checks captures against that
/// reach instead and only compares capture status.
ReplayResult replay_trace(const Space& space, const Trace& trace,
                          std::optional<std::int64_t> rho = std::nullopt);

struct AuditResult {
  bool ok = true;
  std::string detail;
};

/// Re-checks captures under the endpoint-only reading (cops checked only where
/// their paths end) and compares the first capture with the symmetric reading.
AuditResult audit_capture_readings(const Space& space, const Trace& trace);
/// Subdivides every traversed edge once (doubling the metric and the reach)
/// and checks that midpoints never produce a capture the vertex checks missed.
AuditResult audit_edge_subdivision(const Space& space, const Trace& trace);

// Trace files (JSON lines).
Json outcome_to_json(const Space& space, const Outcome& outcome);
void write_trace(std::ostream& out, const Space& space, const Trace& trace);
std::string trace_to_string(const Space& space, const Trace& trace);
/// Parses a trace; the space is reconstructed from the header.
Trace read_trace(std::istream& in, std::optional<Space>& space);
Json params_to_json(const GameParams& p);

bool is_captured(const Outcome& o);
bool is_horizon(const Outcome& o);
bool is_forfeit(const Outcome& o);

}  // namespace coarse
