#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ipoms/step.hpp"
#include "ipoms/stepseq.hpp"

namespace ipoms {

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

using Word = std::vector<int>;

// Automaton over the symbols 0..symbols-1. Missing transitions mean no move.
struct Nfa {
  int symbols = 0;
  std::vector<std::vector<std::pair<int, int>>> delta;  // per state: (symbol, target)
  std::vector<int> initial;
  std::vector<bool> final;

  explicit Nfa(int symbols = 0) : symbols(symbols) {}
  int states() const { return static_cast<int>(delta.size()); }
  int add_state(bool is_final = false);
  void add_transition(int from, int symbol, int to);
  // Sorts transitions and removes duplicates.
  void normalize();
};

// Complete deterministic automaton.
struct Dfa {
  int symbols = 0;
  int initial = 0;
  std::vector<int> table;  // state * symbols + symbol -> state
  std::vector<bool> final;

  int states() const { return static_cast<int>(final.size()); }
  int next(int q, int symbol) const { return table[static_cast<std::size_t>(q) * symbols + symbol]; }
};

bool accepts(const Nfa& a, const Word& w);
bool accepts(const Dfa& a, const Word& w);

// Subset construction; throws CAPACITY beyond `cap` states.
Dfa determinize(const Nfa& a, std::size_t cap = kDefaultStateCap);
// Reachable part, minimized by partition refinement, states renumbered in
// breadth-first order from the initial state.
Dfa minimize(const Dfa& a);
Nfa to_nfa(const Dfa& a);

Nfa nfa_union(const Nfa& a, const Nfa& b);
Nfa intersect(const Nfa& a, const Nfa& b);
Dfa intersect(const Dfa& a, const Dfa& b);
Dfa complement(const Dfa& a);
Dfa complement(const Nfa& a, std::size_t cap = kDefaultStateCap);
// Renames each symbol s to map[s] (a value in 0..symbols-1, or -1 to drop).
Nfa project(const Nfa& a, const std::vector<int>& map, int symbols);

bool is_empty(const Nfa& a);
bool is_empty(const Dfa& a);
// A shortest accepted word, smallest symbols first among equal lengths.
std::optional<Word> shortest_word(const Nfa& a);
std::optional<Word> shortest_word(const Dfa& a);
// Same language, by emptiness of the symmetric difference.
bool equivalent(const Dfa& a, const Dfa& b);
// Accepted words of length <= max_len in length-lexicographic order.
std::vector<Word> accepted_words(const Nfa& a, int max_len, std::size_t limit = SIZE_MAX);

// Text format:
//   nfa
//   alphabet <n>
//   symbol <i> <token>       (optional, one per symbol)
//   states <n>
//   initial <q>...
//   final <q>...
//   trans <p> <symbol> <q>   (one per transition)
// Lines starting with '#' are comments.
std::string to_text(const Nfa& a, const std::vector<std::string>& tokens = {});
Nfa parse_nfa(std::string_view text, std::vector<std::string>* tokens = nullptr);

// Word over an alphabet of steps, and back.
Word encode(const Alphabet& alpha, const StepWord& w);
StepWord decode(const Alphabet& alpha, const Word& w);
std::vector<std::string> tokens(const Alphabet& alpha);

}  // namespace ipoms
