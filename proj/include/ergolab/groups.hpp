#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ergolab/models/free_group.hpp"

namespace ergolab {

// Word-length bounds; exact groups return lo == hi.
struct LengthBounds {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
};

// Z^d with generators +-e_i (word length = l1 norm).
class IntegerLattice {
 public:
  using Element = std::vector<std::int64_t>;

  explicit IntegerLattice(int dim);
  static std::string kind() { return "integer_lattice"; }
  int dim() const { return dim_; }
  bool liouville() const { return true; }

  Element identity() const { return Element(static_cast<std::size_t>(dim_), 0); }
  Element multiply(const Element& x, const Element& y) const;
  Element inverse(const Element& x) const;
  void right_multiply(Element& x, const Element& g) const;
  LengthBounds length(const Element& x) const;
  std::vector<Element> generators() const;
  Eigen::VectorXd abelianization(const Element& x) const;
  Element parse(const std::string& text) const;  // "1,0,-2"
  std::string format(const Element& x) const;
  void check(const Element& x) const;
  bool operator==(const IntegerLattice&) const = default;

 private:
  int dim_;
};

// F_k with its free generators.
class FreeGroup {
 public:
  using Element = Word;

  explicit FreeGroup(int rank);
  static std::string kind() { return "free_group"; }
  int rank() const { return rank_; }
  bool liouville() const { return false; }

  Element identity() const { return {}; }
  Element multiply(const Element& x, const Element& y) const { return ergolab::multiply(x, y); }
  Element inverse(const Element& x) const { return ergolab::inverse(x); }
  void right_multiply(Element& x, const Element& g) const { ergolab::right_multiply(x, g); }
  LengthBounds length(const Element& x) const {
    const double l = static_cast<double>(x.size());
    return {l, l};
  }
  std::vector<Element> generators() const;
  Eigen::VectorXd abelianization(const Element& x) const;  // exponent sums
  Element parse(const std::string& text) const { return parse_word(text, rank_); }
  std::string format(const Element& x) const { return format_word(x); }
  void check(const Element& x) const;

 private:
  int rank_;
};

// Discrete Heisenberg group: (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab'),
// generators x = (1,0,0), y = (0,1,0) and their inverses.
struct HeisenbergElement {
  std::int64_t a = 0, b = 0, c = 0;
  bool operator==(const HeisenbergElement&) const = default;
};

class Heisenberg {
 public:
  using Element = HeisenbergElement;

  // Builds the exact word-length table of the ball of radius `exact_radius`
  // by breadth-first search.
  explicit Heisenberg(int exact_radius = 14);
  static std::string kind() { return "heisenberg"; }
  bool liouville() const { return true; }

  Element identity() const { return {}; }
  Element multiply(const Element& x, const Element& y) const {
    return {x.a + y.a, x.b + y.b, x.c + y.c + x.a * y.b};
  }
  Element inverse(const Element& x) const { return {-x.a, -x.b, -x.c + x.a * x.b}; }
  void right_multiply(Element& x, const Element& g) const { x = multiply(x, g); }
  // Exact inside the tabulated ball; outside, lower bound
  // max(|a|+|b|, ceil(2 sqrt|c|), R+1) and a commutator-based upper bound.
  LengthBounds length(const Element& x) const;
  std::vector<Element> generators() const;
  Eigen::VectorXd abelianization(const Element& x) const;
  Element parse(const std::string& text) const;  // "a,b,c" or a word in x, y, X, Y
  std::string format(const Element& x) const;
  void check(const Element&) const {}

  int exact_radius() const { return radius_; }
  // Number of elements of word length <= n, for n <= exact_radius.
  std::size_t ball_count(int n) const;

 private:
  struct Hash {
    std::size_t operator()(const Element& e) const;
  };
  int radius_;
  std::unordered_map<Element, int, Hash> table_;
  std::vector<std::size_t> sphere_;
};

// Upper bound on the word length of the central element (0,0,k) using
// commutators [x^m, y^q] = (0,0,mq) of cost 2(m+q).
std::int64_t central_cost(std::int64_t k);

}  // namespace ergolab
