#pragma once

// Builders and brute-force oracles shared by the test binaries.

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ipoms/hda.hpp"
#include "ipoms/ipomset.hpp"
#include "ipoms/step.hpp"
#include "ipoms/stepseq.hpp"

namespace testing_support {

using namespace ipoms;

// mk("abca", "1<2 3<2 3<4", "1>3 1>4 2>4", "3", "") with 1-based events;
// "x>y" in the event-order string means x ⇛ y.
inline Ipomset mk(const std::string& labels, const std::string& prec, const std::string& evord,
                  const std::string& sources, const std::string& targets) {
  IpomsetData d;
  d.labels.assign(labels.begin(), labels.end());
  auto pairs = [](const std::string& s, char sep) {
    std::vector<std::pair<EventId, EventId>> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
      auto k = tok.find(sep);
      out.emplace_back(std::stoi(tok.substr(0, k)) - 1, std::stoi(tok.substr(k + 1)) - 1);
    }
    return out;
  };
  auto ids = [](const std::string& s) {
    std::vector<EventId> out;
    std::istringstream in(s);
    int x;
    while (in >> x) out.push_back(x - 1);
    return out;
  };
  d.prec = pairs(prec, '<');
  d.evord = pairs(evord, '>');
  d.sources = ids(sources);
  d.targets = ids(targets);
  return validate(d, false);
}

// Sequential composition of single events, e.g. chain("ab") = ab.
inline Ipomset chain(const std::string& labels) {
  std::string prec;
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      prec += std::to_string(i + 1) + "<" + std::to_string(j + 1) + " ";
  return mk(labels, prec, "", "", "");
}

// Parallel composition of single events, listed in event order.
inline Ipomset par(const std::string& labels) {
  std::string evord;
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      evord += std::to_string(i + 1) + ">" + std::to_string(j + 1) + " ";
  return mk(labels, "", evord, "", "");
}

// Isomorphism by trying all bijections.
inline bool brute_isomorphic(const Ipomset& p, const Ipomset& q) {
  if (p.size() != q.size()) return false;
  std::vector<int> f(p.size());
  std::iota(f.begin(), f.end(), 0);
  do {
    bool ok = true;
    for (int x = 0; x < p.size() && ok; ++x) {
      ok = p.label(x) == q.label(f[x]) && p.is_source(x) == q.is_source(f[x]) &&
           p.is_target(x) == q.is_target(f[x]);
      for (int y = 0; y < p.size() && ok; ++y)
        ok = p.less(x, y) == q.less(f[x], f[y]) && p.evord(x, y) == q.evord(f[x], f[y]);
    }
    if (ok) return true;
  } while (std::next_permutation(f.begin(), f.end()));
  return false;
}

inline int brute_width(const Ipomset& p) {
  int best = 0;
  for (EventSet s = 0; s < bit(p.size()); ++s) {
    bool antichain = true;
    for (int x = 0; x < p.size() && antichain; ++x)
      if (has(s, x) && (p.successors(x) & s)) antichain = false;
    if (antichain) best = std::max(best, popcount(s));
  }
  return best;
}

// Coherent words over an alphabet, by depth-first extension.
// Extension stops below words for which prune(w) holds.
template <class Visit, class Prune>
void for_each_coherent_word(const std::vector<Step>& letters, int max_len, Visit&& visit,
                            Prune&& prune) {
  StepWord w;
  auto rec = [&](auto&& self) -> void {
    if (!w.empty()) {
      if (prune(w)) return;
      visit(w);
    }
    if (static_cast<int>(w.size()) == max_len) return;
    for (const Step& s : letters) {
      if (!w.empty() && w.back().target_conclist() != s.source_conclist()) continue;
      w.push_back(s);
      self(self);
      w.pop_back();
    }
  };
  rec(rec);
}

template <class Visit>
void for_each_coherent_word(const std::vector<Step>& letters, int max_len, Visit&& visit) {
  for_each_coherent_word(letters, max_len, visit, [](const StepWord&) { return false; });
}

// Number of events of the gluing of a coherent word.
inline int word_events(const StepWord& w) {
  int n = w[0].size() - popcount(w[0].started());
  for (const Step& s : w) n += popcount(s.started());
  return n;
}

// Random coherent word of the given length with letters of width <= k.
inline StepWord random_coherent_word(std::mt19937& rng, const std::vector<Step>& letters,
                                     int length) {
  StepWord w;
  while (static_cast<int>(w.size()) < length) {
    std::vector<const Step*> options;
    for (const Step& s : letters)
      if (w.empty() || w.back().target_conclist() == s.source_conclist()) options.push_back(&s);
    w.push_back(*options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)]);
  }
  return w;
}

// Random valid HDA of dimension <= 2 with at most max_cells cells. Squares are
// glued onto 4-cycles of edges; a square [x,y] has y-edges v00->v01 and
// v10->v11 as faces of position 0 and x-edges v00->v10, v01->v11 as faces of
// position 1.
inline Hda random_hda(std::mt19937& rng, const std::vector<Label>& sigma, int max_cells = 20) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  HdaData d;
  int vertices = uniform(2, 5);
  for (int v = 0; v < vertices; ++v) d.cells.push_back({"v" + std::to_string(v), {}, {}});
  struct Edge {
    int from, to;
    Label label;
    std::string name;
  };
  std::vector<Edge> edges;
  auto cells = [&] { return static_cast<int>(d.cells.size()); };
  auto edge = [&](int from, int to, Label l) -> std::string {
    for (const Edge& e : edges)
      if (e.from == from && e.to == to && e.label == l) return e.name;
    std::string name = "e" + std::to_string(edges.size());
    edges.push_back({from, to, l, name});
    d.cells.push_back({name, {l}, {{"v" + std::to_string(from), "v" + std::to_string(to)}}});
    return name;
  };
  auto label = [&] { return sigma[uniform(0, static_cast<int>(sigma.size()) - 1)]; };
  int squares = uniform(0, 3);
  for (int s = 0; s < squares && cells() + 5 <= max_cells; ++s) {
    int v00 = uniform(0, vertices - 1), v01 = uniform(0, vertices - 1);
    int v10 = uniform(0, vertices - 1), v11 = uniform(0, vertices - 1);
    Label x = label(), y = label();
    std::string y0 = edge(v00, v01, y), y1 = edge(v10, v11, y);
    std::string x0 = edge(v00, v10, x), x1 = edge(v01, v11, x);
    d.cells.push_back({"s" + std::to_string(s), {x, y}, {{y0, y1}, {x0, x1}}});
  }
  int extra = uniform(1, 6);
  for (int i = 0; i < extra && cells() < max_cells; ++i)
    edge(uniform(0, vertices - 1), uniform(0, vertices - 1), label());
  int n = cells();
  for (int i = uniform(1, 2); i > 0; --i) d.start.push_back(d.cells[uniform(0, n - 1)].name);
  for (int i = uniform(1, 2); i > 0; --i) d.accept.push_back(d.cells[uniform(0, n - 1)].name);
  return validate_hda(d);
}

}  // namespace testing_support
