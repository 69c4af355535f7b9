#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "ruelle/errors.hpp"
#include "ruelle/moebius.hpp"

namespace ruelle {

// Letters of a word in a finitely generated group: generator index plus
// exponent +-1. Words are kept freely reduced by construction.
struct Letter {
  int gen = 0;
  int exp = 1;
  bool operator==(const Letter& o) const = default;
  auto operator<=>(const Letter& o) const = default;
  Letter inverse() const { return {gen, -exp}; }
};

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
    reduce();
  }

  const std::vector<Letter>& letters() const { return letters_; }
  size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  bool operator==(const Word& o) const { return letters_ == o.letters_; }
  bool operator<(const Word& o) const { return letters_ < o.letters_; }

  Word inverse() const {
    std::vector<Letter> out(letters_.rbegin(), letters_.rend());
    for (Letter& l : out) l.exp = -l.exp;
    Word w;
    w.letters_ = std::move(out);  // inverse of a reduced word is reduced
    return w;
  }

  Word operator*(const Word& o) const {
    std::vector<Letter> cat = letters_;
    cat.insert(cat.end(), o.letters_.begin(), o.letters_.end());
    return Word(std::move(cat));
  }

  Word pow(int n) const {
    Word out;
    Word base = n >= 0 ? *this : inverse();
    for (int i = 0; i < std::abs(n); ++i) out = out * base;
    return out;
  }

  // Strip matched inverse pairs from the two ends: the cyclically reduced
  // core represents the same conjugacy class.
  Word cyclically_reduced() const {
    std::vector<Letter> ls = letters_;
    while (ls.size() >= 2 && ls.front() == ls.back().inverse()) {
      ls.erase(ls.begin());
      ls.pop_back();
    }
    Word w;
    w.letters_ = std::move(ls);
    return w;
  }

  // Lexicographically least rotation of the cyclically reduced core: an exact
  // (numerics-free) canonical form for conjugacy-by-rotation.
  Word canonical_rotation() const {
    Word core = cyclically_reduced();
    if (core.size() <= 1) return core;
    const auto& ls = core.letters_;
    std::vector<Letter> best = ls;
    std::vector<Letter> rot = ls;
    for (size_t i = 1; i < ls.size(); ++i) {
      std::rotate(rot.begin(), rot.begin() + 1, rot.end());
      if (rot < best) best = rot;
    }
    Word w;
    w.letters_ = std::move(best);
    return w;
  }

  bool is_cyclically_reduced() const {
    return letters_.size() < 2 || letters_.front() != letters_.back().inverse();
  }

 private:
  void reduce() {
    std::vector<Letter> out;
    out.reserve(letters_.size());
    for (const Letter& l : letters_) {
      if (!out.empty() && out.back() == l.inverse())
        out.pop_back();
      else
        out.push_back(l);
    }
    letters_ = std::move(out);
  }

  std::vector<Letter> letters_;
};

// Words are written with single-letter generator names; a capital letter is
// the inverse ("a B A b"). Whitespace between letters is optional.
inline Word parse_word(const std::string& text, const std::vector<std::string>& names) {
  std::vector<Letter> letters;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    const bool upper = std::isupper(static_cast<unsigned char>(ch)) != 0;
    std::string low(1, static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    int gen = -1;
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == low) gen = static_cast<int>(i);
    if (gen < 0)
      throw InputError("word: unknown generator letter '" + std::string(1, ch) + "'");
    letters.push_back({gen, upper ? -1 : 1});
  }
  return Word(std::move(letters));
}

inline std::string word_to_string(const Word& w, const std::vector<std::string>& names) {
  std::string out;
  for (const Letter& l : w.letters()) {
    std::string n = names[static_cast<size_t>(l.gen)];
    if (l.exp < 0) n[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(n[0])));
    if (!out.empty()) out += ' ';
    out += n;
  }
  return out;
}

inline Mat2c evaluate_word(const Word& w, const std::vector<Mat2c>& gens,
                           const std::vector<Mat2c>& gen_inverses) {
  Mat2c m;
  for (const Letter& l : w.letters()) {
    const Mat2c& g = l.exp > 0 ? gens[static_cast<size_t>(l.gen)]
                               : gen_inverses[static_cast<size_t>(l.gen)];
    m = m * g;
  }
  m.renormalize();
  return m;
}

inline std::vector<std::int64_t> ab_image(const Word& w,
                                          const std::vector<std::vector<std::int64_t>>& ab_matrix) {
  if (ab_matrix.empty()) return {};
  std::vector<std::int64_t> v(ab_matrix.front().size(), 0);
  for (const Letter& l : w.letters())
    for (size_t j = 0; j < v.size(); ++j)
      v[j] += l.exp * ab_matrix[static_cast<size_t>(l.gen)][j];
  return v;
}

inline std::int64_t epim_image(const Word& w, const std::vector<std::int64_t>& epim) {
  std::int64_t v = 0;
  for (const Letter& l : w.letters()) v += l.exp * epim[static_cast<size_t>(l.gen)];
  return v;
}

}  // namespace ruelle
