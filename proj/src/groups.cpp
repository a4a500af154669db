#include "ergolab/groups.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "ergolab/error.hpp"

namespace ergolab {

IntegerLattice::IntegerLattice(int dim) : dim_(dim) {
  require(dim >= 1 && dim <= 64, "integer_lattice: dimension must lie in [1, 64]");
}

void IntegerLattice::check(const Element& x) const {
  require(x.size() == static_cast<std::size_t>(dim_), "integer_lattice: element has wrong dimension");
}

IntegerLattice::Element IntegerLattice::multiply(const Element& x, const Element& y) const {
  check(x);
  check(y);
  Element z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}

IntegerLattice::Element IntegerLattice::inverse(const Element& x) const {
  Element z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = -x[i];
  return z;
}

void IntegerLattice::right_multiply(Element& x, const Element& g) const {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += g[i];
}

LengthBounds IntegerLattice::length(const Element& x) const {
  double l = 0.0;
  for (auto v : x) l += static_cast<double>(std::llabs(v));
  return {l, l};
}

std::vector<IntegerLattice::Element> IntegerLattice::generators() const {
  std::vector<Element> out;
  for (int i = 0; i < dim_; ++i) {
    Element e = identity();
    e[static_cast<std::size_t>(i)] = 1;
    out.push_back(e);
    e[static_cast<std::size_t>(i)] = -1;
    out.push_back(e);
  }
  return out;
}

Eigen::VectorXd IntegerLattice::abelianization(const Element& x) const {
  Eigen::VectorXd v(dim_);
  for (int i = 0; i < dim_; ++i) v(i) = static_cast<double>(x[static_cast<std::size_t>(i)]);
  return v;
}

IntegerLattice::Element IntegerLattice::parse(const std::string& text) const {
  std::string t = text;
  for (char& ch : t)
    if (ch == ',' || ch == '(' || ch == ')' || ch == '[' || ch == ']') ch = ' ';
  std::istringstream in(t);
  Element x;
  std::int64_t v;
  while (in >> v) x.push_back(v);
  require(in.eof(), "integer_lattice: cannot parse element '" + text + "'");
  require(x.size() == static_cast<std::size_t>(dim_),
          "integer_lattice: element '" + text + "' has wrong dimension");
  return x;
}

std::string IntegerLattice::format(const Element& x) const {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s;
}

FreeGroup::FreeGroup(int rank) : rank_(rank) {
  require(rank >= 1 && rank <= 26, "free_group: rank must lie in [1, 26]");
}

void FreeGroup::check(const Element& x) const {
  for (Letter c : x) require(c != 0 && std::abs(c) <= rank_, "free_group: letter outside rank");
  require(is_reduced(x), "free_group: non-reduced word " + format_word(x));
}

std::vector<FreeGroup::Element> FreeGroup::generators() const {
  std::vector<Element> out;
  for (int i = 1; i <= rank_; ++i) {
    out.push_back({static_cast<Letter>(i)});
    out.push_back({static_cast<Letter>(-i)});
  }
  return out;
}

Eigen::VectorXd FreeGroup::abelianization(const Element& x) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(rank_);
  for (Letter c : x) v(std::abs(c) - 1) += c > 0 ? 1.0 : -1.0;
  return v;
}

std::size_t Heisenberg::Hash::operator()(const Element& e) const {
  std::uint64_t h = static_cast<std::uint64_t>(e.a) * 0x9E3779B97F4A7C15ull;
  h ^= static_cast<std::uint64_t>(e.b) * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
  h ^= static_cast<std::uint64_t>(e.c) * 0x165667B19E3779F9ull + (h << 6) + (h >> 2);
  return static_cast<std::size_t>(h);
}

Heisenberg::Heisenberg(int exact_radius) : radius_(exact_radius) {
  require(exact_radius >= 0 && exact_radius <= 20, "heisenberg: exact radius must lie in [0, 20]");
  const auto gens = generators();
  std::vector<Element> frontier{identity()};
  table_.emplace(identity(), 0);
  sphere_.push_back(1);
  for (int r = 1; r <= radius_; ++r) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        Element y = multiply(x, g);
        if (table_.emplace(y, r).second) next.push_back(y);
      }
    sphere_.push_back(next.size());
    frontier = std::move(next);
  }
}

std::size_t Heisenberg::ball_count(int n) const {
  require(n >= 0 && n <= radius_, "heisenberg: ball radius outside the exact table");
  std::size_t total = 0;
  for (int r = 0; r <= n; ++r) total += sphere_[static_cast<std::size_t>(r)];
  return total;
}

std::int64_t central_cost(std::int64_t k) {
  k = std::llabs(k);
  std::int64_t cost = 0;
  while (k > 0) {
    auto m = static_cast<std::int64_t>(std::sqrt(static_cast<double>(k)));
    while ((m + 1) * (m + 1) <= k) ++m;
    while (m * m > k) --m;
    const std::int64_t q = k / m;
    cost += 2 * (m + q);
    k -= m * q;
  }
  return cost;
}

LengthBounds Heisenberg::length(const Element& x) const {
  if (auto it = table_.find(x); it != table_.end()) {
    const double l = it->second;
    return {l, l};
  }
  const double ab = static_cast<double>(std::llabs(x.a) + std::llabs(x.b));
  const double lo = std::max({ab, std::ceil(2.0 * std::sqrt(static_cast<double>(std::llabs(x.c)))),
                              static_cast<double>(radius_ + 1)});
  const double hi = ab + static_cast<double>(std::min(central_cost(x.c - x.a * x.b), central_cost(x.c)));
  return {lo, std::max(lo, hi)};
}

std::vector<Heisenberg::Element> Heisenberg::generators() const {
  return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
}

Eigen::VectorXd Heisenberg::abelianization(const Element& x) const {
  return Eigen::Vector2d(static_cast<double>(x.a), static_cast<double>(x.b));
}

Heisenberg::Element Heisenberg::parse(const std::string& text) const {
  if (text.find(',') != std::string::npos) {
    std::string t = text;
    for (char& ch : t)
      if (ch == ',' || ch == '(' || ch == ')') ch = ' ';
    std::istringstream in(t);
    Element e;
    require(static_cast<bool>(in >> e.a >> e.b >> e.c), "heisenberg: cannot parse '" + text + "'");
    return e;
  }
  Element e = identity();
  for (char ch : text) {
    switch (ch) {
      case 'x': e = multiply(e, {1, 0, 0}); break;
      case 'X': e = multiply(e, {-1, 0, 0}); break;
      case 'y': e = multiply(e, {0, 1, 0}); break;
      case 'Y': e = multiply(e, {0, -1, 0}); break;
      case 'e': case ' ': break;
      default: throw Error("heisenberg: unexpected character in '" + text + "'");
    }
  }
  return e;
}

std::string Heisenberg::format(const Element& x) const {
  return "(" + std::to_string(x.a) + "," + std::to_string(x.b) + "," + std::to_string(x.c) + ")";
}

}  // namespace ergolab
