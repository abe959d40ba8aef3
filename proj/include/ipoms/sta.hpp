#pragma once

#include <string>
#include <vector>

#include "ipoms/automaton.hpp"
#include "ipoms/hda.hpp"
#include "ipoms/step.hpp"
#include "ipoms/stepseq.hpp"

namespace ipoms {

struct StEdge {
  int from = -1;
  Step letter;
  int to = -1;
  auto operator<=>(const StEdge&) const = default;
};

// Automaton over starters and terminators with conclist-labelled states.
// Every edge (q, D, r) has source conclist λ(q) and target conclist λ(r).
class StAutomaton {
 public:
  StAutomaton() = default;
  // Throws INTERFACE_MISMATCH for edges violating the state labelling and
  // INVALID_ARGUMENT for out-of-range states. Edges are kept as a sorted set.
  StAutomaton(std::vector<std::string> names, std::vector<Conclist> labels,
              std::vector<StEdge> edges, std::vector<int> initial, std::vector<int> final);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& name(int q) const { return names_[q]; }
  const Conclist& label(int q) const { return labels_[q]; }
  const std::vector<StEdge>& edges() const { return edges_; }
  const std::vector<int>& initial() const { return initial_; }
  const std::vector<int>& final() const { return final_; }
  bool is_initial(int q) const;
  bool is_final(int q) const;
  // Largest state conclist.
  int width() const;
  std::vector<Label> sigma() const;

 private:
  std::vector<std::string> names_;
  std::vector<Conclist> labels_;
  std::vector<StEdge> edges_;
  std::vector<int> initial_;
  std::vector<int> final_;
};

// States are the cells, edges start resp. terminate every subset of events of
// a cell (the empty subset gives identity loops).
StAutomaton from_hda(const Hda& h);

// A path given by its start state and edge indices into edges().
struct StPath {
  int start = -1;
  std::vector<int> edges;
};

// Step sequence collecting state and edge labels. Throws INVALID_PATH.
StepSequence path_label(const StAutomaton& a, const StPath& path);

// Automaton accepting the sparse words of the step sequences of `a`, over the
// given alphabet. Identity words id_U are accepted when an identity-only path
// leads from an initial to a final state labelled U; `identities` = false
// drops them. Throws WIDTH_EXCEEDED when a state conclist is wider than the
// alphabet allows and ALPHABET_MISMATCH for labels outside it.
Nfa sparse_nfa(const StAutomaton& a, const Alphabet& alpha, bool identities = true);

// Whether the sparse word of P is accepted. Uses width max(1, a.width()) and
// the labels of `a` and P unless k is given; throws WIDTH_EXCEEDED when P is
// wider than k.
bool member(const StAutomaton& a, const Ipomset& p, int k = -1);

// No accepting path: reachability from initial to final states.
bool is_empty(const StAutomaton& a);

}  // namespace ipoms
