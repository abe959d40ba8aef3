#include "ipoms/sta.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ipoms {

StAutomaton::StAutomaton(std::vector<std::string> names, std::vector<Conclist> labels,
                         std::vector<StEdge> edges, std::vector<int> initial,
                         std::vector<int> final)
    : names_(std::move(names)),
      labels_(std::move(labels)),
      edges_(std::move(edges)),
      initial_(std::move(initial)),
      final_(std::move(final)) {
  if (names_.size() != labels_.size())
    throw Error(Errc::invalid_argument, "state names and labels differ in number");
  auto in_range = [&](int q) { return q >= 0 && q < size(); };
  std::vector<Diagnostic> diags;
  for (const auto& e : edges_) {
    if (!in_range(e.from) || !in_range(e.to)) {
      diags.push_back({Errc::invalid_argument, "edge with unknown state"});
      continue;
    }
    if (!e.letter.in_omega())
      diags.push_back({Errc::interface_mismatch, "edge letter " + to_string(e.letter) +
                                                     " is neither starter nor terminator"});
    if (e.letter.source_conclist() != labels_[e.from] || e.letter.target_conclist() != labels_[e.to])
      diags.push_back({Errc::interface_mismatch, "edge " + names_[e.from] + " " +
                                                     to_string(e.letter) + " " + names_[e.to]});
  }
  for (auto* list : {&initial_, &final_}) {
    for (int q : *list)
      if (!in_range(q)) diags.push_back({Errc::invalid_argument, "unknown initial/final state"});
    std::sort(list->begin(), list->end());
    list->erase(std::unique(list->begin(), list->end()), list->end());
  }
  if (!diags.empty()) throw Error(diags);
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool StAutomaton::is_initial(int q) const {
  return std::binary_search(initial_.begin(), initial_.end(), q);
}

bool StAutomaton::is_final(int q) const { return std::binary_search(final_.begin(), final_.end(), q); }

int StAutomaton::width() const {
  int w = 0;
  for (const auto& l : labels_) w = std::max(w, static_cast<int>(l.size()));
  return w;
}

std::vector<Label> StAutomaton::sigma() const {
  std::set<Label> out;
  for (const auto& l : labels_) out.insert(l.begin(), l.end());
  for (const auto& e : edges_) out.insert(e.letter.labels.begin(), e.letter.labels.end());
  return {out.begin(), out.end()};
}

StAutomaton from_hda(const Hda& h) {
  std::vector<std::string> names;
  std::vector<Conclist> labels;
  std::vector<StEdge> edges;
  for (int q = 0; q < h.size(); ++q) {
    names.push_back(h.name(q));
    labels.push_back(h.ev(q));
    EventSet full = all_of(static_cast<int>(h.ev(q).size()));
    for (EventSet a = 0;; ++a) {
      if ((a & full) == a) {
        int lo = h.face(q, a, false);
        if (lo >= 0) edges.push_back({lo, make_starter(h.ev(q), a), q});
        int up = h.face(q, a, true);
        if (up >= 0) edges.push_back({q, make_terminator(h.ev(q), a), up});
      }
      if (a == full) break;
    }
  }
  return StAutomaton(std::move(names), std::move(labels), std::move(edges), h.start(), h.accept());
}

StepSequence path_label(const StAutomaton& a, const StPath& path) {
  if (path.start < 0 || path.start >= a.size()) throw Error(Errc::invalid_path, "unknown start");
  StepWord w{make_identity(a.label(path.start))};
  int q = path.start;
  for (int i : path.edges) {
    if (i < 0 || i >= static_cast<int>(a.edges().size()))
      throw Error(Errc::invalid_path, "unknown edge");
    const StEdge& e = a.edges()[i];
    if (e.from != q) throw Error(Errc::invalid_path, "edge does not leave " + a.name(q));
    w.push_back(e.letter);
    w.push_back(make_identity(a.label(e.to)));
    q = e.to;
  }
  return normalize(w);
}

namespace {

// States reachable from q through chains of starter (resp. terminator) and
// identity edges, with the composite of the chain.
std::set<std::pair<int, Step>> saturate(const StAutomaton& a,
                                        const std::vector<std::vector<int>>& out, int q,
                                        bool starters) {
  std::set<std::pair<int, Step>> seen;
  std::vector<std::pair<int, Step>> stack{{q, make_identity(a.label(q))}};
  seen.insert(stack.back());
  while (!stack.empty()) {
    auto [r, acc] = stack.back();
    stack.pop_back();
    for (int i : out[r]) {
      const StEdge& e = a.edges()[i];
      if (starters ? !e.letter.is_starter() : !e.letter.is_terminator()) continue;
      std::pair<int, Step> next{e.to, glue_steps(acc, e.letter)};
      if (seen.insert(next).second) stack.push_back(std::move(next));
    }
  }
  return seen;
}

}  // namespace

Nfa sparse_nfa(const StAutomaton& a, const Alphabet& alpha, bool identities) {
  for (int q = 0; q < a.size(); ++q)
    if (static_cast<int>(a.label(q).size()) > alpha.k())
      throw Error(Errc::width_exceeded, "state " + a.name(q) + " has width " +
                                            std::to_string(a.label(q).size()) + " > " +
                                            std::to_string(alpha.k()));
  std::vector<std::vector<int>> out(a.size());
  for (std::size_t i = 0; i < a.edges().size(); ++i) out[a.edges()[i].from].push_back(static_cast<int>(i));

  // State 0 starts; 1 + 2q (resp. 2 + 2q) is q after a starter (resp.
  // terminator) block; the last state accepts identity words.
  Nfa n(alpha.size());
  n.add_state();
  for (int q = 0; q < a.size(); ++q) {
    n.add_state(a.is_final(q));
    n.add_state(a.is_final(q));
  }
  int id_state = n.add_state(true);
  n.initial = {0};
  auto after = [](int q, bool starter) { return starter ? 1 + 2 * q : 2 + 2 * q; };

  for (int q = 0; q < a.size(); ++q)
    for (bool starters : {true, false}) {
      for (const auto& [r, comp] : saturate(a, out, q, starters)) {
        if (comp.is_identity()) continue;
        int sym = alpha.require(comp);
        if (a.is_initial(q)) n.add_transition(0, sym, after(r, starters));
        n.add_transition(after(q, !starters), sym, after(r, starters));
      }
    }
  if (identities) {
    std::set<int> reach(a.initial().begin(), a.initial().end());
    std::vector<int> stack(reach.begin(), reach.end());
    while (!stack.empty()) {
      int q = stack.back();
      stack.pop_back();
      for (int i : out[q]) {
        const StEdge& e = a.edges()[i];
        if (e.letter.is_identity() && reach.insert(e.to).second) stack.push_back(e.to);
      }
    }
    for (int q : reach)
      if (a.is_final(q)) n.add_transition(0, alpha.require(make_identity(a.label(q))), id_state);
  }
  n.normalize();
  return n;
}

bool member(const StAutomaton& a, const Ipomset& p, int k) {
  if (k < 0) k = std::max(1, a.width());
  int w = width(p);
  if (w > k)
    throw Error(Errc::width_exceeded, "ipomset of width " + std::to_string(w) + " > " + std::to_string(k));
  k = std::max(k, a.width());
  std::set<Label> sigma(p.labels().begin(), p.labels().end());
  for (Label l : a.sigma()) sigma.insert(l);
  Alphabet alpha({sigma.begin(), sigma.end()}, k);
  return accepts(sparse_nfa(a, alpha), encode(alpha, sparse_decompose(p)));
}

bool is_empty(const StAutomaton& a) {
  std::vector<bool> seen(a.size(), false);
  std::vector<int> stack(a.initial().begin(), a.initial().end());
  for (int q : stack) seen[q] = true;
  std::vector<std::vector<int>> succ(a.size());
  for (const auto& e : a.edges()) succ[e.from].push_back(e.to);
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    if (a.is_final(q)) return false;
    for (int r : succ[q])
      if (!seen[r]) {
        seen[r] = true;
        stack.push_back(r);
      }
  }
  return true;
}

}  // namespace ipoms
