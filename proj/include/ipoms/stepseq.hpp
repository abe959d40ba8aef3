#pragma once

#include <climits>
#include <string>
#include <string_view>
#include <vector>

#include "ipoms/ipomset.hpp"
#include "ipoms/step.hpp"

namespace ipoms {

using StepWord = std::vector<Step>;

// Step sequence, represented by its unique sparse word.
struct StepSequence {
  StepWord sparse;
  friend bool operator==(const StepSequence&, const StepSequence&) = default;
};

// "[a.]; [.a., b.]; [.a, .b]". The empty word prints as "".
StepWord parse_word(std::string_view text);
std::string to_string(const StepWord& w);

// All letters are starters or terminators and adjacent interfaces match.
bool is_coherent(const StepWord& w);
bool is_sparse(const StepWord& w);
bool is_dense(const StepWord& w);

struct GluedWord {
  Ipomset ipomset;
  // events[i][j] = event of the glued ipomset at position j of letter i.
  std::vector<std::vector<EventId>> events;
};

GluedWord glue_word_tracked(const StepWord& w);
Ipomset glue_word(const StepWord& w);

StepWord sparse_decompose(const Ipomset& p);
StepSequence normalize(const StepWord& w);
StepWord dense_refine(const StepWord& w);

inline constexpr int kMinusInf = INT_MIN;
inline constexpr int kPlusInf = INT_MAX;

// Endpoints are 1-based letter positions. Works on every coherent word; phi
// has an entry per position, -1 where the letter is not elementary, and is
// empty for identity words.
struct EndpointMap {
  GluedWord glued;
  std::vector<int> start;
  std::vector<int> end;
  std::vector<EventId> phi;
};

EndpointMap endpoints(const StepWord& w);

enum class SwapKind { starters, terminators, start_end };

// One transposition at letters (position, position+1), with the resulting word.
struct ChainStep {
  SwapKind kind;
  int position;
  StepWord word;
};

struct PreceqResult {
  bool holds = false;
  // Transpositions rewriting v into u.
  std::vector<ChainStep> steps;
};

// Whether u ⪯ v for dense words, with the rewriting chain when it holds.
PreceqResult preceq(const StepWord& u, const StepWord& v);

// Swap adjacent letters at (i, i+1) of a dense word. A starter followed by a
// terminator becomes a terminator followed by a starter. Returns false when
// the letters act on the same event or the pair is a terminator followed by
// a starter.
bool transpose(StepWord& w, int i, SwapKind* kind = nullptr);

// Transpositions rewriting dense(sparse(Q)) into dense(sparse(P)).
std::vector<ChainStep> subsumption_chain(const Ipomset& p, const Ipomset& q);

}  // namespace ipoms
