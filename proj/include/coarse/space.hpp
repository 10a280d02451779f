#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coarse/lamp_group.hpp"
#include "coarse/vertex.hpp"

namespace coarse {

using Json = nlohmann::ordered_json;

/// A vertex sequence walked in one turn. A single vertex means "stay".
using MovePath = std::vector<Vertex>;

using DistanceMap = std::unordered_map<Vertex, std::int64_t, VertexHash>;

enum class SpaceKind { Grid, GridVariation, Lamplighter, BaumslagSolitar, Line, FreeTree };

inline constexpr std::size_t kDefaultBallLimit = 5'000'000;

/// A Cayley graph, expanded lazily. Values are immutable and cheap to copy.
class Space {
 public:
  static Space grid(int dimension);
  static Space grid_variation(int m);
  static Space lamplighter(LampGroup group, int j = 1);
  static Space baumslag_solitar(int m);
  static Space line();
  static Space free_tree(int rank);
  /// Mini-grammar: grid:<n>, gridvar:<m>, lamp:<|L>|[:<j>], lamp:@<file>[:<j>],
  /// bs:<m>, line, free-tree:<rank>.
  static Space parse(const std::string& spec);

  SpaceKind kind() const;
  std::string spec() const;
  int dimension() const;  // grid and line
  int modulus() const;    // gridvar and bs
  int rank() const;       // free tree
  const LampPower& lamps() const;
  Vertex base() const;

  bool contains(const Vertex& v) const;
  void require(const Vertex& v) const;

  std::vector<Vertex> neighbors(const Vertex& v) const;
  bool adjacent(const Vertex& u, const Vertex& w) const;

  /// Exact distance if at most `cutoff`, otherwise nullopt.
  std::optional<std::int64_t> distance(const Vertex& u, const Vertex& w,
                                       std::int64_t cutoff) const;
  /// Bidirectional breadth-first search; never uses a closed form.
  std::optional<std::int64_t> bfs_distance(const Vertex& u, const Vertex& w,
                                           std::int64_t cutoff) const;
  bool has_closed_form() const;
  std::optional<std::int64_t> closed_form_distance(const Vertex& u, const Vertex& w) const;
  /// Cheap lower bound on d(u,w).
  std::int64_t lower_bound(const Vertex& u, const Vertex& w) const;
  /// Length of an explicit word from u to w, when the space provides one
  /// without search (exact for closed-form spaces, constructive for BS).
  std::optional<mpz_class> word_length_bound(const Vertex& u, const Vertex& w) const;
  /// Heuristic distance used for pursuit when exact search is too expensive.
  std::int64_t estimate(const Vertex& u, const Vertex& w) const;

  /// Shortest path; among shortest paths, each step takes the neighbor with the
  /// lexicographically smallest serialization. Throws ExceedsCutoff beyond `bound`.
  MovePath geodesic(const Vertex& u, const Vertex& w, std::int64_t bound) const;

  /// Breadth-first ball, in discovery order.
  std::vector<Vertex> ball(const Vertex& center, std::int64_t r,
                           std::size_t limit = kDefaultBallLimit) const;
  DistanceMap ball_distances(const Vertex& center, std::int64_t r,
                             std::size_t limit = kDefaultBallLimit) const;

  Json to_json(const Vertex& v) const;
  Vertex from_json(const Json& j) const;
  std::string serialize(const Vertex& v) const;

  // Group structure: every supported space is a Cayley graph for right
  // multiplication by generators, so left translation is an isometry.
  Vertex multiply(const Vertex& g, const Vertex& h) const;
  Vertex inverse(const Vertex& g) const;

  struct Impl;

 private:
  explicit Space(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// BS(1,m) helpers exposed for strategies and analysis.
namespace bs {
/// The element with affine part x -> m^k x + q where q = num / m^exp, reduced.
BsVertex make(int m, mpz_class num, std::int64_t exp, std::int64_t k);
/// m^e as an integer (e >= 0).
mpz_class power(int m, std::int64_t e);
/// Right multiplication by a^count at height k.
BsVertex shift_a(int m, const BsVertex& v, const mpz_class& count);
BsVertex shift_t(const BsVertex& v, std::int64_t count);
/// Length of the ladder word for the element (identity-based).
mpz_class ladder_length(int m, const BsVertex& g);
/// True iff q is an integer.
inline bool integral(const BsVertex& v) { return v.exp == 0; }
}  // namespace bs

}  // namespace coarse
