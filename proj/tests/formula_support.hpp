#pragma once

// Random formulas and small structures shared by the logic tests.

#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ipoms/mso.hpp"
#include "support.hpp"

namespace testing_support {

// Random formula over variables x, y, X with the given atoms.
inline FormulaPtr random_formula(std::mt19937& rng, int depth, bool word, const std::vector<Step>& letters,
                          std::vector<std::string> fo, std::vector<std::string> so) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  auto var = [&] { return fo[pick(static_cast<int>(fo.size()))]; };
  if (depth == 0 || pick(4) == 0) {
    if (fo.empty()) return pick(2) ? mso::truth() : mso::falsity();
    int kind = pick(word ? 5 : 8);
    if (kind == 0) return mso::less(var(), var());
    if (kind == 1) return mso::eq(var(), var());
    if (kind == 2) return mso::succ(var(), var());
    if (kind == 3) return so.empty() ? mso::truth() : mso::in(var(), so[pick(static_cast<int>(so.size()))]);
    if (kind == 4) return word ? mso::letter(letters[pick(static_cast<int>(letters.size()))], var())
                               : mso::label("ab"[pick(2)], var());
    if (kind == 5) return mso::src(var());
    if (kind == 6) return mso::tgt(var());
    return mso::evord(var(), var());
  }
  switch (pick(8)) {
    case 0: return mso::neg(random_formula(rng, depth - 1, word, letters, fo, so));
    case 1:
      return mso::conj({random_formula(rng, depth - 1, word, letters, fo, so),
                        random_formula(rng, depth - 1, word, letters, fo, so)});
    case 2:
      return mso::disj({random_formula(rng, depth - 1, word, letters, fo, so),
                        random_formula(rng, depth - 1, word, letters, fo, so)});
    case 3:
      return mso::implies(random_formula(rng, depth - 1, word, letters, fo, so),
                          random_formula(rng, depth - 1, word, letters, fo, so));
    case 4:
      return mso::iff(random_formula(rng, depth - 1, word, letters, fo, so),
                      random_formula(rng, depth - 1, word, letters, fo, so));
    case 5:
    case 6: {
      std::string v = fo.size() < 3 ? std::string(1, "xyz"[fo.size()]) : var();
      fo.push_back(v);
      auto body = random_formula(rng, depth - 1, word, letters, fo, so);
      return pick(2) ? mso::exists(v, body) : mso::forall(v, body);
    }
    default: {
      std::string v = so.empty() ? "X" : "Y";
      so.push_back(v);
      auto body = random_formula(rng, depth - 1, word, letters, fo, so);
      return pick(2) ? mso::exists(v, body) : mso::forall(v, body);
    }
  }
}

inline std::vector<Ipomset> small_ipomsets(int max_events, std::vector<Label> sigma = {'a', 'b'}) {
  std::vector<Ipomset> out;
  for (int n = 0; n <= max_events; ++n)
    for (auto& p : enumerate_ipomsets(n, sigma, true)) out.push_back(p);
  return out;
}

// All words over the letters up to the given length, excluding the empty word.
inline std::vector<StepWord> all_words(const std::vector<Step>& letters, int max_len) {
  std::vector<StepWord> out;
  std::vector<StepWord> layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<StepWord> next;
    for (const auto& w : layer)
      for (const auto& d : letters) {
        StepWord v = w;
        v.push_back(d);
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

struct WordSentence {
  std::string name;
  MsowFormula formula;
};

// Battery files: one sentence per line, '#' starts a comment.
inline std::vector<MsopFormula> load_msop_battery(const std::string& path) {
  std::ifstream in(path);
  std::vector<MsopFormula> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') out.push_back(parse_msop(line));
  return out;
}

inline std::vector<WordSentence> load_msow_battery(const std::string& path) {
  std::ifstream in(path);
  std::vector<WordSentence> out;
  std::optional<Alphabet> alpha;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream words(line);
    std::string kind;
    words >> kind;
    std::string rest;
    std::getline(words >> std::ws, rest);
    if (kind == "alphabet") {
      std::string sigma;
      int k = 0;
      std::istringstream(rest) >> sigma >> k;
      alpha.emplace(std::vector<Label>(sigma.begin(), sigma.end()), k);
    } else if (kind == "coh") {
      out.push_back({"coh", {coh_formula(*alpha), *alpha}});
    } else if (kind == "pinning") {
      out.push_back({"pinning " + rest, {pinning_formula(parse_word(rest)), *alpha}});
    } else {
      out.push_back({rest, parse_msow(rest, *alpha)});
    }
  }
  return out;
}

}  // namespace testing_support
