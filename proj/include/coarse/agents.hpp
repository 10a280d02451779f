#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coarse/analysis.hpp"
#include "coarse/engine.hpp"
#include "coarse/game.hpp"

namespace coarse {

// ---------------------------------------------------------------- cops

struct CopConfig {
  std::int64_t n = 1;
  std::int64_t sigma = 1;
  std::int64_t rho = 1;
};

/// Up to `steps` moves from `from` toward `target`: exact geodesic descent when
/// the distance is available, otherwise descent on the space's estimate.
MovePath pursuit_path(const Space& space, const Vertex& from, const Vertex& target,
                      std::int64_t steps);

class FixedParamCop : public CopAgent {
 public:
  explicit FixedParamCop(CopConfig cfg) : cfg_(cfg) {}
  std::int64_t count() const override { return cfg_.n; }
  std::int64_t choose_sigma() override { return cfg_.sigma; }
  std::int64_t choose_rho(const WeakRhoQuery&) override { return cfg_.rho; }
  std::int64_t choose_rho(const StrongRhoQuery&) override { return cfg_.rho; }

 protected:
  CopConfig cfg_;
};

/// Every cop walks sigma steps along a geodesic toward the robber.
class GreedyCop : public FixedParamCop {
 public:
  using FixedParamCop::FixedParamCop;
  std::string id() const override { return "greedy"; }
  std::vector<Vertex> place() override;
  std::vector<MovePath> move(const View& view) override;
};

/// Every cop takes a uniformly random walk of sigma steps.
class RandomCop : public FixedParamCop {
 public:
  using FixedParamCop::FixedParamCop;
  std::string id() const override { return "random"; }
  std::vector<Vertex> place() override;
  std::vector<MovePath> move(const View& view) override;
};

/// Line only: walks toward the robber without passing it.
class PusherCop : public FixedParamCop {
 public:
  using FixedParamCop::FixedParamCop;
  std::string id() const override { return "pusher"; }
  void attach(MatchContext& ctx) override;
  std::vector<Vertex> place() override;
  std::vector<MovePath> move(const View& view) override;
};

/// Replays the parameters, placement and cop moves of a recorded trace.
class ScriptedCop : public CopAgent {
 public:
  explicit ScriptedCop(Trace trace) : trace_(std::move(trace)) {}
  std::string id() const override { return "scripted"; }
  std::int64_t count() const override { return trace_.header.params.n; }
  std::int64_t choose_sigma() override { return trace_.header.params.sigma; }
  std::int64_t choose_rho(const WeakRhoQuery&) override { return trace_.header.params.rho; }
  std::int64_t choose_rho(const StrongRhoQuery&) override { return trace_.header.params.rho; }
  std::vector<Vertex> place() override;
  std::vector<MovePath> move(const View& view) override;

 private:
  Trace trace_;
};

// ---------------------------------------------------------------- robbers

/// Waits at an anchor of a wide bigon and switches to the opposite anchor
/// along an unblocked detour whenever the cop comes closer than 5 lambda.
class BigonEvader : public RobberAgent {
 public:
  explicit BigonEvader(std::int64_t searchRadius = 8) : searchRadius_(searchRadius) {}
  std::string id() const override { return "bigon"; }
  std::int64_t choose_psi(const StrongPsiQuery& q) override { return 96 * q.sigma; }
  mpz_class choose_radius(const RadiusQuery& q) override;
  Vertex place(const std::vector<Vertex>& cops) override;
  MovePath move(const View& view) override;

  const BigonWitness& witness() const { return *witness_; }
  std::int64_t delta() const { return witness_->delta; }
  std::int64_t traversals() const { return traversals_; }

 private:
  struct Traversal {
    BigonWitness oriented;
    MovePath path;
    std::size_t cursor = 0;
    std::size_t gammaEnd = 0;
  };

  BigonWitness oriented() const;
  std::int64_t dist(const Vertex& a, const Vertex& b) const;
  bool blocked(const BigonWitness& w, const std::vector<Vertex>& cops) const;
  void check_cases(const Traversal& tr, std::size_t index, const Vertex& r,
                   const std::vector<Vertex>& cops, std::map<char, std::pair<std::int64_t, std::int64_t>>& acc,
                   bool& covered);

  std::int64_t searchRadius_;
  std::int64_t psi_ = 0;
  mpz_class R_;
  std::optional<BigonWitness> witness_;
  bool atP_ = true;
  std::optional<Traversal> active_;
  std::int64_t traversals_ = 0;
};

/// Keeps the two-state invariant: at y while the cop is at least 4 lambda from
/// y, at x otherwise.
class BottleneckEvader : public RobberAgent {
 public:
  std::string id() const override { return "bottleneck"; }
  std::int64_t choose_psi(const WeakPsiQuery& q) override;
  mpz_class choose_radius(const RadiusQuery& q) override;
  Vertex place(const std::vector<Vertex>& cops) override;
  MovePath move(const View& view) override;

  const BottleneckWitness& witness() const { return *witness_; }
  std::int64_t lambda() const { return lambda_; }

 private:
  std::int64_t cop_distance(const std::vector<Vertex>& cops, const Vertex& x) const;
  bool blocked(const MovePath& path, const std::vector<Vertex>& cops) const;

  std::optional<BottleneckWitness> witness_;
  std::int64_t lambda_ = 0;
  std::int64_t psi_ = 0;
  mpz_class R_;
};

/// Keeps every cop's lamp configuration different from its own at two points
/// a_i, b_i that no single cop move plus reach can cover together.
class LamplighterEvader : public RobberAgent {
 public:
  std::string id() const override { return "lamplighter"; }
  std::int64_t choose_psi(const WeakPsiQuery& q) override;
  mpz_class choose_radius(const RadiusQuery& q) override;
  Vertex place(const std::vector<Vertex>& cops) override;
  MovePath move(const View& view) override;

  std::int64_t a(std::int64_t i) const { return i; }
  std::int64_t b(std::int64_t i) const { return sigma_ + rho_ + i + 1; }
  std::int64_t loop_length() const { return 2 * b(n_); }

 private:
  std::uint32_t flip(std::uint32_t l) const { return l == 0 ? 1u : 0u; }

  std::int64_t n_ = 0;
  std::int64_t sigma_ = 0;
  std::int64_t rho_ = 0;
  std::int64_t psi_ = 0;
};

/// Hides near the top of one of n+1 sheets of BS(1, n+1) and crosses to a
/// cop-free sheet through the axis whenever a cop climbs into its sheet.
class BsSheetEvader : public RobberAgent {
 public:
  std::string id() const override { return "bs-sheet"; }
  std::int64_t choose_psi(const StrongPsiQuery& q) override;
  mpz_class choose_radius(const RadiusQuery& q) override;
  Vertex place(const std::vector<Vertex>& cops) override;
  MovePath move(const View& view) override;

  /// Cop-trigger region: heights [ceil(rho/2), 8 rho] of sheet i.
  bool in_upper_part(std::int64_t i, const Vertex& v) const;
  /// Union of the regions S_0..S_n with widths n m^(8 rho - k).
  bool in_sheets(const Vertex& v) const;
  /// Vertices of the flee word a^k t^(-8rho) a^(j-i) t^(8rho) a^(-k) from a^i t^(8rho).
  MovePath flee_path(std::int64_t i, std::int64_t j, std::int64_t k) const;
  bool path_blocked(std::int64_t i, std::int64_t j, std::int64_t k,
                    const std::vector<Vertex>& cops) const;

  std::int64_t flee_count() const { return flees_; }
  std::int64_t sheet() const { return sheet_; }
  std::int64_t internal_rho() const { return rho_; }
  std::int64_t internal_sigma() const { return sigma_; }

 private:
  std::vector<Vertex> with_phantoms(const std::vector<Vertex>& cops) const;
  Vertex sheet_top(std::int64_t i) const;

  int m_ = 2;
  std::int64_t n_ = 1;  // effective cop count m - 1
  std::int64_t sigma_ = 0;
  std::int64_t psi_ = 0;
  std::int64_t rho_ = 0;
  mpz_class R_;
  std::int64_t sheet_ = 0;
  std::int64_t target_ = 0;
  MovePath pending_;
  std::size_t cursor_ = 0;
  std::int64_t flees_ = 0;
};

struct GreedyEvaderConfig {
  std::int64_t margin = 1;
  std::int64_t psi = 3;
  mpz_class R = 10;
  bool confine = false;
};

/// Search-based oracle: best max-min distance reachable through vertices
/// farther than `margin` from every cop.
class GreedyEvader : public RobberAgent {
 public:
  explicit GreedyEvader(GreedyEvaderConfig cfg) : cfg_(std::move(cfg)) {}
  std::string id() const override { return "greedy-evader"; }
  std::int64_t choose_psi(const WeakPsiQuery&) override { return cfg_.psi; }
  std::int64_t choose_psi(const StrongPsiQuery&) override { return cfg_.psi; }
  mpz_class choose_radius(const RadiusQuery&) override { return cfg_.R; }
  Vertex place(const std::vector<Vertex>& cops) override;
  MovePath move(const View& view) override;

  const GreedyEvaderConfig& config() const { return cfg_; }

 private:
  std::int64_t clearance(const std::vector<Vertex>& cops, const Vertex& x, std::int64_t cap) const;
  bool allowed(const Vertex& x) const;

  GreedyEvaderConfig cfg_;
};

/// Plays an inner strategy on two coordinates of grid:n, leaving the others fixed.
class ProjectionEvader : public RobberAgent {
 public:
  ProjectionEvader(std::unique_ptr<RobberAgent> inner, int first, int second);
  std::string id() const override { return "proj:" + inner_->id(); }
  void attach(MatchContext& ctx) override;
  std::int64_t choose_psi(const WeakPsiQuery& q) override;
  std::int64_t choose_psi(const StrongPsiQuery& q) override;
  mpz_class choose_radius(const RadiusQuery& q) override;
  Vertex place(const std::vector<Vertex>& cops) override;
  MovePath move(const View& view) override;

  Vertex project(const Vertex& v) const;
  Vertex lift(const Vertex& planar, const Vertex& ambient) const;

 private:
  void sync();

  std::unique_ptr<RobberAgent> inner_;
  int first_, second_;
  std::unique_ptr<MatchContext> innerCtx_;
};

}  // namespace coarse
