#include "ergolab/models/free_group.hpp"

#include <cctype>
#include <cmath>

#include "ergolab/error.hpp"

namespace ergolab {

bool is_reduced(const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0) return false;
    if (i > 0 && w[i] == -w[i - 1]) return false;
  }
  return true;
}

Word reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter c : w) {
    require(c != 0, "free group: zero letter");
    if (!out.empty() && out.back() == -c)
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

void right_multiply(Word& x, const Word& y) {
  for (Letter c : y) {
    if (!x.empty() && x.back() == -c)
      x.pop_back();
    else
      x.push_back(c);
  }
}

Word multiply(const Word& x, const Word& y) {
  Word out = x;
  right_multiply(out, y);
  return out;
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (Letter& c : out) c = static_cast<Letter>(-c);
  return out;
}

std::size_t common_prefix(const Word& x, const Word& y) {
  std::size_t i = 0;
  while (i < x.size() && i < y.size() && x[i] == y[i]) ++i;
  return i;
}

std::size_t common_prefix(const Word& w, const End& xi) {
  std::size_t i = 0;
  while (i < w.size() && w[i] == xi.letter(i)) ++i;
  return i;
}

std::string format_word(const Word& w) {
  if (w.empty()) return "e";
  std::string s;
  for (Letter c : w) {
    const char base = static_cast<char>('a' + (std::abs(c) - 1));
    s.push_back(c > 0 ? base : static_cast<char>(std::toupper(base)));
  }
  return s;
}

Word parse_word(const std::string& text, int rank) {
  Word w;
  std::string trimmed;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) trimmed.push_back(ch);
  if (trimmed.empty() || trimmed == "e") return w;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == '*' || ch == '.') continue;
    require(std::isalpha(static_cast<unsigned char>(ch)),
            "parse_word: unexpected character '" + std::string(1, ch) + "' in '" + text + "'");
    const int g = std::tolower(static_cast<unsigned char>(ch)) - 'a' + 1;
    require(g >= 1 && g <= rank,
            "parse_word: letter '" + std::string(1, ch) + "' outside rank " + std::to_string(rank));
    int sign = std::isupper(static_cast<unsigned char>(ch)) ? -1 : 1;
    if (text.compare(i + 1, 3, "^-1") == 0) {
      sign = -sign;
      i += 3;
    }
    w.push_back(static_cast<Letter>(sign * g));
  }
  return reduce(w);
}

void End::validate(int rank) const {
  require(!tail.empty(), "free group end: periodic tail must be nonempty");
  auto ok = [rank](Letter c) { return c != 0 && std::abs(c) <= rank; };
  for (Letter c : prefix) require(ok(c), "free group end: letter outside rank");
  for (Letter c : tail) require(ok(c), "free group end: letter outside rank");
  require(is_reduced(prefix) && is_reduced(tail) && tail.back() != -tail.front(),
          "free group end: infinite word is not reduced");
  require(prefix.empty() || prefix.back() != -tail.front(),
          "free group end: infinite word is not reduced");
}

FreeGroupTree::FreeGroupTree(int rank) : rank_(rank) {
  require(rank >= 1 && rank <= 26, "free group: rank must lie in [1, 26]");
}

void FreeGroupTree::check(const Word& w) const {
  for (Letter c : w)
    require(c != 0 && std::abs(c) <= rank_, "free group: letter outside rank");
  require(is_reduced(w), "free group: non-reduced word " + format_word(w));
}

double FreeGroupTree::distance(const Point& x, const Point& y) const {
  check(x);
  check(y);
  return static_cast<double>(x.size() + y.size() - 2 * common_prefix(x, y));
}

FreeGroupTree::Point FreeGroupTree::act(const Isometry& g, const Point& x) const {
  check(g);
  check(x);
  return multiply(g, x);
}

FreeGroupTree::Isometry FreeGroupTree::compose(const Isometry& g, const Isometry& h) const {
  return multiply(g, h);
}

void FreeGroupTree::right_multiply(Isometry& z, const Isometry& g) const {
  ergolab::right_multiply(z, g);
}

double FreeGroupTree::horofunction(const Boundary& xi, const Point& x) const {
  check(x);
  return static_cast<double>(x.size()) - 2.0 * static_cast<double>(common_prefix(x, xi));
}

FreeGroupTree::Point FreeGroupTree::geodesic_point(const Boundary& xi, double t) const {
  require(t >= 0.0, "geodesic_point: t must be nonnegative");
  const auto depth = static_cast<std::size_t>(std::floor(t + 1e-9));
  Word w(depth);
  for (std::size_t i = 0; i < depth; ++i) w[i] = xi.letter(i);
  return w;
}

FreeGroupTree::Boundary FreeGroupTree::boundary_toward(const Point& x) const {
  check(x);
  require(!x.empty(), "boundary_toward: point coincides with the basepoint");
  return {x, {x.back()}};
}

double FreeGroupTree::chart_distance(const Boundary& a, const Boundary& b) const {
  std::size_t i = 0;
  while (i < 4096 && a.letter(i) == b.letter(i)) ++i;
  return i == 4096 ? 0.0 : std::ldexp(1.0, -static_cast<int>(i));
}

FreeGroupTree::Boundary FreeGroupTree::act_boundary(const Isometry& g, const Boundary& xi) const {
  check(g);
  xi.validate(rank_);
  Word w = xi.prefix;
  while (w.size() < xi.prefix.size() + g.size() + 1) w.insert(w.end(), xi.tail.begin(), xi.tail.end());
  return {multiply(g, w), xi.tail};
}

FreeGroupTree::Boundary FreeGroupTree::far_boundary(const Boundary& xi) const {
  const Letter first = xi.letter(0);
  Letter other = first == 1 ? Letter(-1) : Letter(1);
  if (rank_ == 1 && first == 1) other = -1;
  return {{}, {other}};
}

}  // namespace ergolab
