#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ergolab {

// Letters are +i for generator i (1-based) and -i for its inverse.
using Letter = std::int8_t;
using Word = std::vector<Letter>;

bool is_reduced(const Word& w);
Word reduce(const Word& w);
Word multiply(const Word& x, const Word& y);
Word inverse(const Word& w);
// x <- reduce(x y) in O(|y|).
void right_multiply(Word& x, const Word& y);
std::size_t common_prefix(const Word& x, const Word& y);
// "a", "b", ... for generators; upper case for inverses; "e" for the identity.
std::string format_word(const Word& w);
// Accepts the format above and also "x^-1" suffixes; whitespace is ignored.
Word parse_word(const std::string& text, int rank);

// An end of the tree: the infinite reduced word prefix . tail . tail . ...
struct End {
  Word prefix;
  Word tail;  // nonempty

  Letter letter(std::size_t i) const {
    return i < prefix.size() ? prefix[i] : tail[(i - prefix.size()) % tail.size()];
  }
  void validate(int rank) const;
};

// Length of the common prefix of w and the end, capped at |w|.
std::size_t common_prefix(const Word& w, const End& xi);

// Cayley tree of the free group F_k with standard generators.
class FreeGroupTree {
 public:
  using Real = double;
  using Point = Word;
  using Isometry = Word;
  using Boundary = End;

  explicit FreeGroupTree(int rank);

  static std::string kind() { return "free_group_cayley"; }
  int rank() const { return rank_; }

  Point basepoint() const { return {}; }
  Isometry identity() const { return {}; }

  double distance(const Point& x, const Point& y) const;
  Point act(const Isometry& g, const Point& x) const;
  Isometry compose(const Isometry& g, const Isometry& h) const;
  void right_multiply(Isometry& z, const Isometry& g) const;
  Isometry inverse(const Isometry& g) const { return ergolab::inverse(g); }
  double displacement(const Isometry& g) const { return static_cast<double>(g.size()); }
  Point orbit_point(const Isometry& g) const { return g; }

  // h_xi(x) = |x| - 2 |x ^ xi|, the Busemann function of the ray toward xi.
  double horofunction(const Boundary& xi, const Point& x) const;
  // Vertex at depth floor(t) on the ray toward xi.
  Point geodesic_point(const Boundary& xi, double t) const;
  // The end continuing the reduced word x by repeating its last letter.
  Boundary boundary_toward(const Point& x) const;
  // 2^{-|common prefix|}, comparing at most 4096 letters.
  double chart_distance(const Boundary& a, const Boundary& b) const;
  // g . xi: reduce g prefix tail^m with m |tail| > |g|, so the cancellation
  // stops inside the repeated tail.
  Boundary act_boundary(const Isometry& g, const Boundary& xi) const;
  // An end whose first letter differs from that of xi (chart distance 1).
  Boundary far_boundary(const Boundary& xi) const;

  void check(const Word& w) const;

 private:
  int rank_;
};

}  // namespace ergolab
