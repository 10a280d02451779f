#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "coarse/space.hpp"

namespace coarse {

/// Two geodesics with common endpoints, parameterized by arc length.
struct BigonWitness {
  MovePath gamma;
  MovePath gammaPrime;
  std::int64_t delta = 0;
  std::int64_t t = 0;

  std::int64_t length() const { return static_cast<std::int64_t>(gamma.size()) - 1; }
  /// The same bigon with the roles of the two geodesics exchanged.
  BigonWitness swapped() const;
  /// Both geodesics traversed backwards; t becomes length - t.
  BigonWitness reversed() const;
};

/// Detour from gamma(t) to gammaPrime(t): along gamma to gamma(t+delta), across
/// to gammaPrime(t+delta), back along gammaPrime. Falls back to the common
/// endpoint when t+delta exceeds the length.
MovePath bigon_detour(const Space& space, const BigonWitness& w);

/// Pointwise width max_t d(gamma(t), gammaPrime(t)).
std::int64_t bigon_width(const Space& space, const MovePath& gamma, const MovePath& gammaPrime);

/// Throws InvariantViolation unless both paths are geodesics with common
/// endpoints and the recorded width and attaining index are exact.
void validate_bigon(const Space& space, const BigonWitness& w);

struct ScanResult {
  std::int64_t maxWidth = 0;
  std::optional<BigonWitness> witness;
};

/// Widest bigon with both endpoints in B(base, radius).
ScanResult bigon_thinness_scan(const Space& space, std::int64_t radius,
                               std::size_t limit = kDefaultBallLimit);

/// Bigon of width exactly delta. Throws StrategyUnavailable when none is known
/// (trees, odd delta on grids, or an exhausted search radius).
BigonWitness find_bigon_exact_width(const Space& space, std::int64_t delta,
                                    std::int64_t searchRadius = 8);

struct BottleneckWitness {
  Vertex x, y, z;
  MovePath gamma;     // x to z, avoiding a neighborhood of y
  MovePath etaMinus;  // x to y
  MovePath etaPlus;   // y to z
  std::int64_t lambdaBound = 0;
};

BottleneckWitness bottleneck_witness(const Space& space, std::int64_t lambda);

/// Throws InvariantViolation unless the midpoint and avoidance conditions hold.
void validate_bottleneck(const Space& space, const BottleneckWitness& w);

/// Largest axis-projected displacement |q(w) - q(t^h)|, rounded up, over
/// 0 <= h <= H and d(w, t^h) <= reach, in bs(m).
mpz_class hd(const Space& space, std::int64_t H, std::int64_t reach);

Json bigon_to_json(const Space& space, const BigonWitness& w);
Json scan_to_json(const Space& space, const ScanResult& r);
void write_hd_csv(std::ostream& out, const Space& space, std::int64_t maxH, std::int64_t maxReach);

}  // namespace coarse
