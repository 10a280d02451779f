#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coarse/game.hpp"
#include "coarse/homothety.hpp"

namespace coarse {

using RobberFactory = std::function<std::unique_ptr<RobberAgent>()>;

/// Constants the meta robber commits to once negotiation is over.
struct MetaSetup {
  std::int64_t j = 0;
  std::int64_t sigma = 0;
  std::int64_t rhoPrime = 0;   // reach the obligations are checked against
  std::int64_t lambda = 0;     // stages per meta-stage
  std::int64_t psi = 0;
  mpz_class R;
  std::int64_t oracleSigma = 0;
  std::int64_t oracleRho = 0;
  std::int64_t oraclePsi = 0;
  mpz_class oracleR;
  /// Z^2 preset only: spacing rho_j of the coarse lattice.
  std::optional<std::int64_t> spacing;
};

/// Everything observed during one meta-stage.
struct MetaStageRecord {
  std::int64_t index = 0;
  std::int64_t firstStage = 0;
  std::vector<Vertex> copsAtStart;
  std::vector<Vertex> copsAtEnd;
  /// Cop positions at the query plus every vertex of the following lambda cop moves.
  std::vector<Vertex> copCheckpoints;
  Vertex robberStart;
  std::vector<Vertex> robberCheckpoints;
  MovePath oraclePath;          // in Delta_j
  std::vector<Vertex> waypoints;  // iota of the oracle path
  std::int64_t walked = 0;
};

struct ObligationResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

/// Re-checks the per-meta-stage obligations from a record alone.
std::vector<ObligationResult> assert_meta_obligations(const MetaStageRecord& record,
                                                      const QuasiHomothetyFamily& family,
                                                      const MetaSetup& setup);

/// Plays a strong-game strategy on Gamma by consulting a weak-game oracle on
/// the coarse space Delta_j once per meta-stage.
class MetaRobber : public RobberAgent {
 public:
  enum class Preset { Generic, Z2 };

  MetaRobber(QuasiHomothetyFamily family, RobberFactory oracle, Preset preset = Preset::Generic,
             std::string name = "meta");

  std::string id() const override { return name_; }
  std::int64_t choose_psi(const StrongPsiQuery& q) override;
  mpz_class choose_radius(const RadiusQuery& q) override;
  Vertex place(const std::vector<Vertex>& cops) override;
  MovePath move(const View& view) override;

  const MetaSetup& setup() const { return setup_; }
  const std::vector<MetaStageRecord>& records() const { return records_; }
  const QuasiHomothetyFamily& family() const { return family_; }

 private:
  Vertex pi(const Vertex& x) const { return family_.pi(setup_.j, x); }
  Vertex iota(const Vertex& x) const { return family_.iota(setup_.j, x); }
  std::unique_ptr<RobberAgent> make_oracle(const Space& delta, MatchContext& octx, std::int64_t& psi,
                                           mpz_class& R);
  void close_record(const std::vector<Vertex>& copsNow);

  QuasiHomothetyFamily family_;
  RobberFactory factory_;
  Preset preset_;
  std::string name_;
  MetaSetup setup_;
  std::int64_t sigma_ = 0;

  std::optional<Space> delta_;
  std::unique_ptr<MatchContext> oracleCtx_;
  std::unique_ptr<RobberAgent> oracle_;
  Vertex oracleRobber_;
  std::int64_t metaIndex_ = 0;
  bool placementChecked_ = false;
  std::optional<MetaStageRecord> open_;
  MovePath plan_;
  std::size_t cursor_ = 0;
  std::vector<MetaStageRecord> records_;
};

/// "z2", "lamplighter:<q>" or "custom:<file>" (JSON with "family", "oracle"
/// and optional "oracleOptions"). Oracle specs are resolved through the
/// agent registry.
std::unique_ptr<MetaRobber> make_meta_robber(const std::string& preset);

/// Fixed parameters of the Z^2 preset's oracle.
struct Z2OracleParams {
  static constexpr std::int64_t sigma = 2;
  static constexpr std::int64_t rho = 3;
  static constexpr std::int64_t margin = 3;
  static constexpr std::int64_t psi = 6;
  static constexpr std::int64_t R = 24;
};

}  // namespace coarse
