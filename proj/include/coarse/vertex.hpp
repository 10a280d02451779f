#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace coarse {

struct GridVertex {
  std::vector<std::int64_t> coords;
  friend bool operator==(const GridVertex&, const GridVertex&) = default;
};

struct GridVarVertex {
  std::int64_t a = 0;
  std::int64_t b = 0;
  friend bool operator==(const GridVarVertex&, const GridVarVertex&) = default;
};

/// Lamplighter element: finitely supported lamp states (sorted by position,
/// identity states omitted) and the lamplighter position.
struct LampVertex {
  std::vector<std::pair<std::int64_t, std::uint32_t>> lamps;
  std::int64_t pos = 0;
  friend bool operator==(const LampVertex&, const LampVertex&) = default;

  std::uint32_t state_at(std::int64_t position) const;
  void set_state(std::int64_t position, std::uint32_t state);
};

/// BS(1,m) element x -> m^k x + num / m^exp in canonical form.
struct BsVertex {
  mpz_class num;
  std::int64_t exp = 0;
  std::int64_t k = 0;
  friend bool operator==(const BsVertex& x, const BsVertex& y) {
    return x.k == y.k && x.exp == y.exp && x.num == y.num;
  }
};

/// Freely reduced word; generator i is the letter 'a'+i, its inverse 'A'+i.
struct TreeVertex {
  std::string word;
  friend bool operator==(const TreeVertex&, const TreeVertex&) = default;
};

using Vertex = std::variant<GridVertex, GridVarVertex, LampVertex, BsVertex, TreeVertex>;

struct VertexHash {
  std::size_t operator()(const Vertex& v) const;
};

Vertex grid_vertex(std::vector<std::int64_t> coords);

}  // namespace coarse
