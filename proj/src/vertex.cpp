#include "coarse/vertex.hpp"

#include <algorithm>
#include <functional>

namespace coarse {

namespace {

inline void mix(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

std::uint32_t LampVertex::state_at(std::int64_t position) const {
  auto it = std::lower_bound(lamps.begin(), lamps.end(), position,
                             [](const auto& entry, std::int64_t p) { return entry.first < p; });
  if (it != lamps.end() && it->first == position) return it->second;
  return 0;
}

void LampVertex::set_state(std::int64_t position, std::uint32_t state) {
  auto it = std::lower_bound(lamps.begin(), lamps.end(), position,
                             [](const auto& entry, std::int64_t p) { return entry.first < p; });
  if (it != lamps.end() && it->first == position) {
    if (state == 0)
      lamps.erase(it);
    else
      it->second = state;
  } else if (state != 0) {
    lamps.insert(it, {position, state});
  }
}

std::size_t VertexHash::operator()(const Vertex& v) const {
  std::size_t seed = v.index();
  std::hash<std::int64_t> h;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, GridVertex>) {
          for (auto c : x.coords) mix(seed, h(c));
        } else if constexpr (std::is_same_v<T, GridVarVertex>) {
          mix(seed, h(x.a));
          mix(seed, h(x.b));
        } else if constexpr (std::is_same_v<T, LampVertex>) {
          mix(seed, h(x.pos));
          for (const auto& [p, s] : x.lamps) {
            mix(seed, h(p));
            mix(seed, s);
          }
        } else if constexpr (std::is_same_v<T, BsVertex>) {
          mix(seed, h(x.k));
          mix(seed, h(x.exp));
          const auto* z = x.num.get_mpz_t();
          mix(seed, static_cast<std::size_t>(z->_mp_size));
          const int limbs = z->_mp_size < 0 ? -z->_mp_size : z->_mp_size;
          for (int i = 0; i < limbs; ++i) mix(seed, static_cast<std::size_t>(mpz_getlimbn(z, i)));
        } else {
          mix(seed, std::hash<std::string>{}(x.word));
        }
      },
      v);
  return seed;
}

Vertex grid_vertex(std::vector<std::int64_t> coords) { return GridVertex{std::move(coords)}; }

}  // namespace coarse
