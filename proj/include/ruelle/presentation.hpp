#pragma once

#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ruelle/errors.hpp"
#include "ruelle/moebius.hpp"
#include "ruelle/word.hpp"

namespace ruelle {

// A matrix presentation of a finitely presented group in PSL(2,C):
// named generators with their matrices, relators, words generating the cusp
// subgroup, the abelianization map to Z^b, and an epimorphism to Z for the
// Alexander-side machinery. Validation is eager -- everything downstream
// silently corrupts on a bad presentation.
struct GroupPresentation {
  std::string name;
  bool hyperbolic = true;
  std::vector<std::string> generator_names;
  std::vector<Mat2c> generator_matrices;
  std::vector<Mat2c> generator_inverses;
  std::vector<Word> relators;
  std::vector<Word> cusp_words;
  std::vector<std::vector<std::int64_t>> abelianization;  // row per generator
  std::vector<std::int64_t> epimorphism;
  int extra_cusps = 0;  // additional cusps declared in the file (warn, not refuse)

  int rank() const { return static_cast<int>(generator_names.size()); }
  int b1() const {
    return abelianization.empty() ? 0 : static_cast<int>(abelianization.front().size());
  }

  Word word(const std::string& text) const { return parse_word(text, generator_names); }
  std::string spell(const Word& w) const { return word_to_string(w, generator_names); }
  Mat2c evaluate(const Word& w) const {
    return evaluate_word(w, generator_matrices, generator_inverses);
  }
  std::vector<std::int64_t> ab(const Word& w) const { return ab_image(w, abelianization); }
  std::int64_t epim(const Word& w) const { return epim_image(w, epimorphism); }

  void validate() const {
    if (generator_names.empty()) throw InputError("presentation: no generators");
    if (generator_matrices.size() != generator_names.size())
      throw InputError("presentation: generator/matrix count mismatch");
    for (size_t i = 0; i < generator_names.size(); ++i) {
      if (generator_names[i].size() != 1 ||
          !std::islower(static_cast<unsigned char>(generator_names[i][0])))
        throw InputError("presentation: generator names must be single lowercase letters");
      for (size_t j = 0; j < i; ++j)
        if (generator_names[i] == generator_names[j])
          throw InputError("presentation: duplicate generator name " + generator_names[i]);
    }
    if (abelianization.size() != generator_names.size())
      throw InputError("presentation: abelianization needs one row per generator");
    const size_t b = b1();
    for (const auto& row : abelianization)
      if (row.size() != b) throw InputError("presentation: ragged abelianization matrix");
    if (epimorphism.size() != generator_names.size())
      throw InputError("presentation: epimorphism needs one entry per generator");
    std::int64_t g = 0;
    for (std::int64_t e : epimorphism) g = std::gcd(g, e < 0 ? -e : e);
    if (g != 1) throw InputError("presentation: epimorphism to Z must be surjective (gcd 1)");

    for (const Word& r : relators) {
      const Mat2c m = evaluate(r);
      if (!m.is_identity(tol::relator))
        throw InputError("InconsistentPresentation: relator '" + spell(r) +
                         "' does not evaluate to +-I");
      for (std::int64_t v : ab(r))
        if (v != 0)
          throw InputError("InconsistentPresentation: relator '" + spell(r) +
                           "' survives abelianization");
      if (epim(r) != 0)
        throw InputError("InconsistentPresentation: relator '" + spell(r) +
                         "' survives the epimorphism to Z");
    }
    for (const Word& w : cusp_words) {
      if (classify(evaluate(w), tol::relator) != MoebiusClass::Parabolic)
        throw InputError("InconsistentPresentation: cusp word '" + spell(w) +
                         "' is not parabolic");
    }
  }
};

namespace detail {

inline std::pair<int, int> line_column(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline cplx parse_entry(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2)
    throw InputError("presentation: matrix entries are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

inline GroupPresentation presentation_from_json(const nlohmann::json& j) {
  GroupPresentation p;
  p.name = j.value("name", std::string("unnamed"));
  p.hyperbolic = j.value("hyperbolic", true);
  if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty())
    throw InputError("presentation: 'generators' array required");
  for (const auto& g : j["generators"]) {
    p.generator_names.push_back(g.at("name").get<std::string>());
    const auto& m = g.at("matrix");
    if (!m.is_array() || m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
      throw InputError("presentation: 'matrix' must be 2x2");
    Mat2c mat{detail::parse_entry(m[0][0]), detail::parse_entry(m[0][1]),
              detail::parse_entry(m[1][0]), detail::parse_entry(m[1][1])};
    if (std::abs(mat.det() - 1.0) > tol::det_gate)
      throw InputError("presentation: generator '" + p.generator_names.back() +
                       "' must have determinant 1");
    mat.renormalize();
    p.generator_matrices.push_back(mat);
    p.generator_inverses.push_back(mat.inverse());
  }
  for (const auto& r : j.value("relators", nlohmann::json::array()))
    p.relators.push_back(p.word(r.get<std::string>()));
  for (const auto& w : j.value("cusp_words", nlohmann::json::array()))
    p.cusp_words.push_back(p.word(w.get<std::string>()));
  if (j.contains("additional_cusps")) p.extra_cusps = static_cast<int>(j["additional_cusps"].size());
  for (const auto& row : j.at("abelianization"))
    p.abelianization.push_back(row.get<std::vector<std::int64_t>>());
  p.epimorphism = j.at("epimorphism").get<std::vector<std::int64_t>>();
  p.validate();
  return p;
}

inline GroupPresentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open presentation file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = detail::line_column(text, e.byte);
    throw InputError("parse error in " + path + " at line " + std::to_string(line) +
                     ", column " + std::to_string(col) + ": " + e.what());
  }
  try {
    return presentation_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("invalid presentation " + path + ": " + e.what());
  }
}

}  // namespace ruelle
