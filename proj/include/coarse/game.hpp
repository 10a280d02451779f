#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "coarse/errors.hpp"
#include "coarse/space.hpp"

namespace coarse {

enum class GameVariant { Weak, Strong };

const char* variant_name(GameVariant v);
GameVariant parse_variant(const std::string& s);

struct GameParams {
  std::int64_t n = 0;
  Vertex v;
  std::int64_t sigma = 0;
  std::int64_t psi = 0;
  std::int64_t rho = 0;
  mpz_class bigR = 0;
  std::int64_t horizon = 0;
};

struct Captured {
  std::int64_t stage = 0;
  std::int64_t copIndex = 0;
  Vertex atVertex;
};

struct HorizonReached {
  std::int64_t stages = 0;
  std::vector<std::int64_t> ballVisitStages;
  bool lastInBall = false;
};

enum class ForfeitKind { Protocol, StrategyUnavailable, Invariant, OracleFailure, Assertion };

const char* forfeit_kind_name(ForfeitKind k);

struct Forfeit {
  Side side = Side::Robber;
  ForfeitKind kind = ForfeitKind::Protocol;
  std::int64_t stage = 0;
  std::string reason;
};

using Outcome = std::variant<Captured, HorizonReached, Forfeit>;

struct AssertionRecord {
  std::int64_t stage = 0;
  std::string name;
  bool pass = true;
  std::string detail;
};

enum class AssertionMode { Record, FailFast };

/// Collects strategy assertions; in fail-fast mode a failing check throws.
class AssertionLog {
 public:
  explicit AssertionLog(AssertionMode mode = AssertionMode::Record) : mode_(mode) {}

  void set_stage(std::int64_t stage) { stage_ = stage; }
  std::int64_t stage() const { return stage_; }
  bool check(const std::string& name, bool ok, const std::string& detail = {});
  const std::vector<AssertionRecord>& records() const { return records_; }
  std::size_t failures() const { return failures_; }
  AssertionMode mode() const { return mode_; }

 private:
  AssertionMode mode_;
  std::int64_t stage_ = 0;
  std::vector<AssertionRecord> records_;
  std::size_t failures_ = 0;
};

/// Shared match context handed to agents. Parameters fill in as negotiation
/// proceeds; agents must only read what the quantifier order has revealed.
struct MatchContext {
  Space space;
  GameVariant variant = GameVariant::Weak;
  GameParams params;
  std::mt19937_64* rng = nullptr;
  AssertionLog* log = nullptr;
};

struct View {
  std::int64_t stage = 0;
  const std::vector<Vertex>& cops;
  const Vertex& robber;
  /// Paths the cops walked in this stage (empty before the first stage).
  const std::vector<MovePath>& lastCopMoves;
};

struct WeakPsiQuery {
  std::int64_t sigma;
  std::int64_t rho;
};
struct StrongPsiQuery {
  std::int64_t sigma;
};
struct RadiusQuery {
  std::int64_t sigma;
  std::int64_t psi;
  std::int64_t rho;
};
struct WeakRhoQuery {
  std::int64_t sigma;
};
struct StrongRhoQuery {
  std::int64_t sigma;
  std::int64_t psi;
};

class RobberAgent {
 public:
  virtual ~RobberAgent() = default;
  virtual std::string id() const = 0;
  virtual void attach(MatchContext& ctx) { ctx_ = &ctx; }
  virtual std::int64_t choose_psi(const WeakPsiQuery&);
  virtual std::int64_t choose_psi(const StrongPsiQuery&);
  virtual mpz_class choose_radius(const RadiusQuery& q) = 0;
  virtual Vertex place(const std::vector<Vertex>& cops) = 0;
  virtual MovePath move(const View& view) = 0;

 protected:
  MatchContext& ctx() const { return *ctx_; }
  const Space& space() const { return ctx_->space; }
  AssertionLog& log() const { return *ctx_->log; }
  MatchContext* ctx_ = nullptr;
};

class CopAgent {
 public:
  virtual ~CopAgent() = default;
  virtual std::string id() const = 0;
  virtual std::int64_t count() const = 0;
  virtual void attach(MatchContext& ctx) { ctx_ = &ctx; }
  virtual std::int64_t choose_sigma() = 0;
  virtual std::int64_t choose_rho(const WeakRhoQuery& q) = 0;
  virtual std::int64_t choose_rho(const StrongRhoQuery& q) = 0;
  virtual std::vector<Vertex> place() = 0;
  virtual std::vector<MovePath> move(const View& view) = 0;

 protected:
  MatchContext& ctx() const { return *ctx_; }
  const Space& space() const { return ctx_->space; }
  MatchContext* ctx_ = nullptr;
};

/// Reason a path is illegal for a mover of the given speed, or nullopt.
std::optional<std::string> path_violation(const Space& space, const MovePath& path,
                                          const Vertex& start, std::int64_t speed,
                                          const char* speedName);

}  // namespace coarse
