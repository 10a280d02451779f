#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coarse/space.hpp"

namespace coarse {

/// A sequence of quasi-homotheties iota_j : Delta_j -> Gamma with
/// quasi-inverses pi_j : Gamma -> Delta_j.
struct QuasiHomothetyFamily {
  std::string name;
  Space gamma = Space::grid(2);
  std::function<Space(std::int64_t j)> delta;
  std::function<std::int64_t(std::int64_t j)> rho;
  mpq_class A = 1;
  mpq_class B = 0;
  std::function<Vertex(std::int64_t j, const Vertex&)> iota;
  std::function<Vertex(std::int64_t j, const Vertex&)> pi;
  /// Seed for preimage searches: a Delta_j vertex whose image is near x.
  std::function<Vertex(std::int64_t j, const Vertex& x)> preimageSeed;
  /// Optional exact description of the image of iota_j.
  std::function<bool(std::int64_t j, const Vertex& x)> inImage;
  /// True when iota_j is an injective group homomorphism (enables
  /// translation-reduced pair sampling).
  bool homomorphism = false;
  std::int64_t firstJ = 1;

  /// Smallest j >= firstJ with rho(j) >= r. The sequence is strictly increasing.
  std::int64_t index_for_reach(std::int64_t r) const;
  mpq_class sigma_bar() const { return 4 * A * A + 3 * A * B; }
  mpq_class rho_bar() const { return 4 * A * (2 * A + 3 * B); }
};

/// Gamma = Delta_j = grid:2, iota_j scales by rho_j. With an empty list,
/// rho_j = j for every j >= 1; otherwise rho_j = rhos[j-1].
QuasiHomothetyFamily z2_scaling_family(std::vector<std::int64_t> rhos = {});

/// Gamma = lamp(L,1), Delta_j = lamp(L,j), rho_j = j, block expansion.
QuasiHomothetyFamily lamplighter_family(const LampGroup& L);

/// Parses "z2" or "lamplighter:<q>".
QuasiHomothetyFamily parse_family(const std::string& spec);

/// Quasi-inverse by search: among Delta_j vertices within searchRadius of the
/// family's preimage seed, one minimizing d(iota(xbar), x); exact preimages
/// win, remaining ties go to the smallest serialization. Throws
/// InvariantViolation if the best candidate misses A rho_j + B.
std::function<Vertex(std::int64_t, const Vertex&)> generic_quasi_inverse(
    const QuasiHomothetyFamily& family, std::int64_t searchRadius);

struct SampleSpec {
  std::vector<std::int64_t> js;
  std::int64_t radius = 5;
  std::size_t exhaustiveLimit = 20'000;
  std::size_t randomPairs = 10'000;
  std::int64_t randomRadius = 8;
  std::uint64_t seed = 1;
  std::size_t maxWitnesses = 20;
};

struct InequalityViolation {
  Json x, y;
  mpq_class lhs, mid, rhs;
};

struct InequalityReport {
  std::string name;
  std::uint64_t checked = 0;
  std::optional<mpq_class> worstSlack;
  std::uint64_t violationCount = 0;
  std::vector<InequalityViolation> violations;
};

struct JReport {
  std::int64_t j = 0;
  std::int64_t rho = 0;
  std::string deltaSampling;
  std::string gammaSampling;
  std::vector<InequalityReport> inequalities;
};

struct VerificationReport {
  std::string family;
  mpq_class A, B;
  std::vector<JReport> perJ;

  std::uint64_t violations() const;
  const InequalityReport* find(std::int64_t j, const std::string& name) const;
};

/// Checks Def. (1)-(2), the quasi-inverse inequalities and the image
/// characterization (when provided) on the requested sample.
VerificationReport verify_family(const QuasiHomothetyFamily& family, const SampleSpec& spec);

Json report_to_json(const VerificationReport& r);

}  // namespace coarse
