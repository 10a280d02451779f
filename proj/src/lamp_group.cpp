#include "coarse/lamp_group.hpp"

#include <fstream>
#include <json.hpp>

#include "coarse/errors.hpp"

namespace coarse {

LampGroup LampGroup::cyclic(std::uint32_t order) {
  if (order == 0) throw MalformedInput("lamp group order must be positive");
  LampGroup g;
  g.order_ = order;
  g.name_ = "Z/" + std::to_string(order);
  g.table_.resize(static_cast<std::size_t>(order) * order);
  g.inverse_.resize(order);
  for (std::uint32_t a = 0; a < order; ++a) {
    for (std::uint32_t b = 0; b < order; ++b) g.table_[a * order + b] = (a + b) % order;
    g.inverse_[a] = (order - a) % order;
  }
  return g;
}

LampGroup LampGroup::from_table(const std::vector<std::vector<std::uint32_t>>& table,
                                std::string name) {
  const std::size_t n = table.size();
  if (n == 0) throw MalformedInput("empty group table");
  for (const auto& row : table) {
    if (row.size() != n) throw MalformedInput("group table is not square");
    for (auto x : row)
      if (x >= n) throw MalformedInput("group table entry out of range");
  }
  std::size_t e = n;
  for (std::size_t c = 0; c < n && e == n; ++c) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) ok = table[c][x] == x && table[x][c] == x;
    if (ok) e = c;
  }
  if (e == n) throw MalformedInput("group table has no identity");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw MalformedInput("group table is not associative");
  // Relabel: swap e and 0.
  auto relabel = [&](std::size_t x) -> std::uint32_t {
    if (x == e) return 0;
    if (x == 0) return static_cast<std::uint32_t>(e);
    return static_cast<std::uint32_t>(x);
  };
  LampGroup g;
  g.order_ = static_cast<std::uint32_t>(n);
  g.name_ = std::move(name);
  g.table_.resize(n * n);
  g.inverse_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      g.table_[relabel(a) * n + relabel(b)] = relabel(table[a][b]);
  for (std::uint32_t a = 0; a < n; ++a) {
    bool found = false;
    for (std::uint32_t b = 0; b < n && !found; ++b)
      if (g.multiply(a, b) == 0 && g.multiply(b, a) == 0) {
        g.inverse_[a] = b;
        found = true;
      }
    if (!found) throw MalformedInput("group table has an element without inverse");
  }
  return g;
}

LampGroup LampGroup::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open lamp group file " + path);
  nlohmann::json j;
  try {
    in >> j;
    return from_table(j.at("table").get<std::vector<std::vector<std::uint32_t>>>(),
                      j.value("name", std::string("table")));
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("bad lamp group file: ") + e.what());
  }
}

LampPower::LampPower(LampGroup base, int j) : base_(std::move(base)), j_(j), order_(1) {
  if (j < 1) throw MalformedInput("lamp exponent must be at least 1");
  for (int i = 0; i < j; ++i) {
    if (order_ > (1u << 24) / base_.order()) throw MalformedInput("lamp power too large");
    order_ *= base_.order();
  }
  if (order_ <= 1024) {
    table_.resize(static_cast<std::size_t>(order_) * order_);
    for (std::uint32_t a = 0; a < order_; ++a)
      for (std::uint32_t b = 0; b < order_; ++b) {
        std::vector<std::uint32_t> c(j_);
        for (int i = 0; i < j_; ++i) c[i] = base_.multiply(component(a, i), component(b, i));
        table_[a * order_ + b] = compose(c);
      }
  }
}

std::uint32_t LampPower::component(std::uint32_t state, int i) const {
  for (int s = 0; s < i; ++s) state /= base_.order();
  return state % base_.order();
}

std::uint32_t LampPower::compose(const std::vector<std::uint32_t>& components) const {
  std::uint32_t state = 0;
  for (int i = j_ - 1; i >= 0; --i) state = state * base_.order() + components[i];
  return state;
}

std::uint32_t LampPower::multiply(std::uint32_t a, std::uint32_t b) const {
  if (!table_.empty()) return table_[static_cast<std::size_t>(a) * order_ + b];
  std::vector<std::uint32_t> c(j_);
  for (int i = 0; i < j_; ++i) c[i] = base_.multiply(component(a, i), component(b, i));
  return compose(c);
}

std::uint32_t LampPower::inverse(std::uint32_t a) const {
  std::vector<std::uint32_t> c(j_);
  for (int i = 0; i < j_; ++i) c[i] = base_.inverse(component(a, i));
  return compose(c);
}

}  // namespace coarse
