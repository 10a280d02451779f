#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace coarse {

/// Input that does not describe a valid vertex, space or specification.
class MalformedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A distance or geodesic query whose answer lies beyond the supplied cutoff.
class ExceedsCutoff : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration that hit its vertex-count threshold.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Side { Cop, Robber };

const char* side_name(Side side);

/// An agent broke the game rules (illegal path, bad parameter, bad placement).
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(Side side, const std::string& what)
      : std::runtime_error(what), side_(side) {}
  Side side() const { return side_; }

 private:
  Side side_;
};

/// A strategy cannot be instantiated on the requested space or parameters.
class StrategyUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A strategy detected that one of its own invariants broke.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A weak-game oracle found no safe move.
class OracleCaught : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the assertion log in fail-fast mode.
class AssertionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coarse
