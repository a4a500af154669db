#pragma once

#include <numbers>
#include <type_traits>

#include "ergolab/space_model.hpp"

namespace ergolab {

using Symbol = Eigen::Map<const Eigen::VectorXd>;

// The first dim symbol coordinates are the translation vector.
template <class S = double>
auto translation_rule(Eigen::Index dim) {
  return [dim](const Symbol& s) {
    require(s.size() >= dim, "translation rule: symbol narrower than the dimension");
    Vec<S> v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = S(s(i));
    return v;
  };
}

inline auto line_rule() {
  return [](const Symbol& s) { return s(0); };
}

// Symbol (length, turn): hyperbolic translation of that length along the
// axis through 0 at angle 2 pi turn.  The coefficients are evaluated in
// double; their determinant is 1 to double rounding, and the models carry the
// determinant through every formula.
template <class S = double>
auto disk_translation_rule() {
  return [](const Symbol& s) {
    require(s.size() >= 2, "disk rule: symbol needs (length, turn)");
    const auto g = Mobius<double>::translation(s(0), 2.0 * std::numbers::pi * s(1));
    return Mobius<S>{Complex<S>(S(g.a.re), S(g.a.im)), Complex<S>(S(g.b.re), S(g.b.im))};
  };
}

// Label l in [0, 2 rank): generator l/2 + 1, inverted when l is odd.
inline Word generator_word(int label, int rank) {
  if (label < 0 || label >= 2 * rank)
    throw Error("free group rule: label " + std::to_string(label) + " outside [0, " +
                std::to_string(2 * rank) + ")");
  const int g = label / 2 + 1;
  return Word{static_cast<Letter>(label % 2 == 0 ? g : -g)};
}

inline auto generator_rule(int rank) {
  return [rank](const Symbol& s) { return generator_word(static_cast<int>(s(0)), rank); };
}

}  // namespace ergolab
