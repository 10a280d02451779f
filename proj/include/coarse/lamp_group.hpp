#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coarse {

/// A finite group given by its multiplication table. Element 0 is the identity.
class LampGroup {
 public:
  static LampGroup cyclic(std::uint32_t order);
  /// Validates the group axioms and relabels so that the identity becomes 0.
  static LampGroup from_table(const std::vector<std::vector<std::uint32_t>>& table,
                              std::string name = "table");
  /// Reads {"name": ..., "table": [[...], ...]} from a JSON file.
  static LampGroup load(const std::string& path);

  std::uint32_t order() const { return order_; }
  std::uint32_t multiply(std::uint32_t a, std::uint32_t b) const {
    return table_[static_cast<std::size_t>(a) * order_ + b];
  }
  std::uint32_t inverse(std::uint32_t a) const { return inverse_[a]; }
  const std::string& name() const { return name_; }
  bool trivial() const { return order_ == 1; }

 private:
  std::uint32_t order_ = 1;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> inverse_;
  std::string name_;
};

/// The direct power L^j. States are encoded as base-|L| digit strings, digit i
/// holding component i.
class LampPower {
 public:
  LampPower(LampGroup base, int j);

  const LampGroup& base() const { return base_; }
  int exponent() const { return j_; }
  std::uint32_t order() const { return order_; }
  std::uint32_t multiply(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inverse(std::uint32_t a) const;
  std::uint32_t component(std::uint32_t state, int i) const;
  std::uint32_t compose(const std::vector<std::uint32_t>& components) const;

 private:
  LampGroup base_;
  int j_;
  std::uint32_t order_;
  std::vector<std::uint32_t> table_;  // cached when order is small
};

}  // namespace coarse
