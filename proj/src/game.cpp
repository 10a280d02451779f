#include "coarse/game.hpp"

namespace coarse {

const char* side_name(Side side) { return side == Side::Cop ? "cop" : "robber"; }

const char* variant_name(GameVariant v) { return v == GameVariant::Weak ? "weak" : "strong"; }

GameVariant parse_variant(const std::string& s) {
  if (s == "weak") return GameVariant::Weak;
  if (s == "strong") return GameVariant::Strong;
  throw MalformedInput("variant must be weak or strong, got " + s);
}

const char* forfeit_kind_name(ForfeitKind k) {
  switch (k) {
    case ForfeitKind::Protocol: return "protocol";
    case ForfeitKind::StrategyUnavailable: return "strategy-unavailable";
    case ForfeitKind::Invariant: return "invariant";
    case ForfeitKind::OracleFailure: return "oracle-failure";
    case ForfeitKind::Assertion: return "assertion";
  }
  return "?";
}

bool AssertionLog::check(const std::string& name, bool ok, const std::string& detail) {
  records_.push_back({stage_, name, ok, detail});
  if (!ok) {
    ++failures_;
    if (mode_ == AssertionMode::FailFast)
      throw AssertionFailure("assertion " + name + " failed at stage " + std::to_string(stage_) +
                             (detail.empty() ? "" : ": " + detail));
  }
  return ok;
}

std::int64_t RobberAgent::choose_psi(const WeakPsiQuery&) {
  throw StrategyUnavailable(id() + " does not play the weak variant");
}

std::int64_t RobberAgent::choose_psi(const StrongPsiQuery&) {
  throw StrategyUnavailable(id() + " does not play the strong variant");
}

std::optional<std::string> path_violation(const Space& space, const MovePath& path,
                                          const Vertex& start, std::int64_t speed,
                                          const char* speedName) {
  if (path.empty()) return std::string("empty path");
  for (const auto& v : path)
    if (!space.contains(v)) return std::string("path contains a vertex outside the space");
  if (!(path.front() == start)) return std::string("path does not start at the current position");
  const auto length = static_cast<std::int64_t>(path.size()) - 1;
  if (length > speed)
    return "path length " + std::to_string(length) + " > " + speedName + " " + std::to_string(speed);
  for (std::size_t i = 1; i < path.size(); ++i)
    if (!space.adjacent(path[i - 1], path[i]))
      return "non-adjacent step at index " + std::to_string(i);
  return std::nullopt;
}

}  // namespace coarse
