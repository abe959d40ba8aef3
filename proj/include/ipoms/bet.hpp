#pragma once

#include <optional>

#include "ipoms/automaton.hpp"
#include "ipoms/hda.hpp"
#include "ipoms/ipomset.hpp"
#include "ipoms/mso.hpp"

namespace ipoms {

// Minimal automaton of the words over the alphabet satisfying a word
// sentence. Throws INVALID_ARGUMENT for free variables and CAPACITY when a
// subset construction exceeds `cap` states.
Dfa msow_to_dfa(const MsowFormula& f, std::size_t cap = kDefaultStateCap);
Nfa msow_to_nfa(const MsowFormula& f, std::size_t cap = kDefaultStateCap);

// Word sentence describing the language of `a` (symbols are alphabet letter
// indices), by encoding runs of its minimal automaton in binary with set
// variables.
MsowFormula nfa_to_msow(const Nfa& a, const Alphabet& alpha, std::size_t cap = kDefaultStateCap);

// Non-empty words whose adjacent letters glue.
Dfa coh_automaton(const Alphabet& alpha);
// Shape of sparse words: one identity letter, or proper starters and
// proper terminators alternating. Coherence is not checked.
Dfa sparse_word_automaton(const Alphabet& alpha);

struct SatResult {
  bool satisfiable = false;
  // Sparse word of the witness and the witness itself.
  StepWord word;
  std::optional<Ipomset> witness;
};

// Whether some ipomset of width <= k satisfies f, over the labels of f and
// one further label.
SatResult satisfiable(const MsopFormula& f, int k, std::size_t cap = kDefaultStateCap);

struct CheckResult {
  bool holds = false;
  StepWord word;
  std::optional<Ipomset> counterexample;
};

// Whether every ipomset of L(h) satisfies f.
CheckResult model_check(const Hda& h, const MsopFormula& f, std::size_t cap = kDefaultStateCap);

// Ipomset sentence satisfied exactly by the language of h.
MsopFormula hda_to_msop(const Hda& h, std::size_t cap = kDefaultStateCap);

}  // namespace ipoms
