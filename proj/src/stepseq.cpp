#include "ipoms/stepseq.hpp"

#include <algorithm>
#include <optional>

#include "ipoms/sweep.hpp"

namespace ipoms {

StepWord parse_word(std::string_view text) {
  StepWord w;
  std::size_t begin = 0;
  bool blank = text.find_first_not_of(" \t\r\n") == std::string_view::npos;
  if (blank) return w;
  while (begin <= text.size()) {
    std::size_t end = text.find(';', begin);
    if (end == std::string_view::npos) end = text.size();
    w.push_back(parse_step(text.substr(begin, end - begin)));
    begin = end + 1;
  }
  return w;
}

std::string to_string(const StepWord& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += "; ";
    out += to_string(w[i]);
  }
  return out;
}

bool is_coherent(const StepWord& w) {
  if (w.empty()) return false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!w[i].in_omega()) return false;
    if (i + 1 < w.size() && w[i].target_conclist() != w[i + 1].source_conclist()) return false;
  }
  return true;
}

bool is_sparse(const StepWord& w) {
  if (w.size() == 1 && w[0].is_identity()) return true;
  if (w.empty()) return false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].is_identity() || !w[i].in_omega()) return false;
    if (i > 0 && w[i].is_starter() == w[i - 1].is_starter()) return false;
  }
  return true;
}

bool is_dense(const StepWord& w) {
  if (w.size() == 1 && w[0].is_identity()) return true;
  if (w.empty()) return false;
  return std::all_of(w.begin(), w.end(), [](const Step& s) { return s.is_elementary(); });
}

namespace {

void require_coherent(const StepWord& w) {
  if (!is_coherent(w)) throw Error(Errc::not_coherent, "word \"" + to_string(w) + "\"");
}

bool all_identities(const StepWord& w) {
  return std::all_of(w.begin(), w.end(), [](const Step& s) { return s.is_identity(); });
}

}  // namespace

GluedWord glue_word_tracked(const StepWord& w) {
  require_coherent(w);
  GluedWord out;
  out.ipomset = to_ipomset(w[0]);
  out.events.emplace_back();
  for (int j = 0; j < w[0].size(); ++j) out.events[0].push_back(j);
  for (std::size_t i = 1; i < w.size(); ++i) {
    auto r = glue_tracked(out.ipomset, to_ipomset(w[i]));
    out.ipomset = std::move(r.ipomset);
    out.events.push_back(std::move(r.right_map));
  }
  return out;
}

Ipomset glue_word(const StepWord& w) { return glue_word_tracked(w).ipomset; }

StepWord sparse_decompose(const Ipomset& p) {
  auto blocks = interval_sweep(p);
  if (!blocks) throw Error(Errc::not_interval, "no step decomposition: " + describe(p));
  if (blocks->empty()) return {make_identity(source_conclist(p))};
  StepWord w;
  for (const auto& b : *blocks) {
    EventSet active = b.start ? b.active_after : b.active_before;
    auto order = p.sorted_by_evord(active);
    Step s;
    for (std::size_t i = 0; i < order.size(); ++i) {
      s.labels.push_back(p.label(order[i]));
      if (has(b.active_before, order[i])) s.sources |= bit(static_cast<int>(i));
      if (has(b.active_after, order[i])) s.targets |= bit(static_cast<int>(i));
    }
    w.push_back(std::move(s));
  }
  return w;
}

StepSequence normalize(const StepWord& w) {
  require_coherent(w);
  if (all_identities(w)) return {{w[0]}};
  StepWord out;
  for (const Step& s : w) {
    if (s.is_identity()) continue;
    if (!out.empty() && out.back().is_starter() == s.is_starter())
      out.back() = glue_steps(out.back(), s);
    else
      out.push_back(s);
  }
  return {out};
}

StepWord dense_refine(const StepWord& w) {
  require_coherent(w);
  if (all_identities(w)) return {w[0]};
  StepWord out;
  for (const Step& s : w) {
    if (s.is_identity()) continue;
    if (s.is_starter()) {
      EventSet present = s.sources;
      for (int a = 0; a < s.size(); ++a) {
        if (!has(s.started(), a)) continue;
        EventSet keep = present | bit(a);
        out.push_back(restrict_step(s, keep, present, keep));
        present = keep;
      }
    } else {
      EventSet present = s.all();
      for (int b = 0; b < s.size(); ++b) {
        if (!has(s.terminated(), b)) continue;
        out.push_back(restrict_step(s, present, present, present & ~bit(b)));
        present &= ~bit(b);
      }
    }
  }
  return out;
}

EndpointMap endpoints(const StepWord& w) {
  EndpointMap m;
  m.glued = glue_word_tracked(w);
  const Ipomset& p = m.glued.ipomset;
  m.start.assign(p.size(), kPlusInf);
  m.end.assign(p.size(), kMinusInf);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (EventId e : m.glued.events[i]) {
      m.start[e] = std::min(m.start[e], static_cast<int>(i) + 1);
      m.end[e] = std::max(m.end[e], static_cast<int>(i) + 1);
    }
  for (EventId e = 0; e < p.size(); ++e) {
    if (p.is_source(e)) m.start[e] = kMinusInf;
    if (p.is_target(e)) m.end[e] = kPlusInf;
  }
  if (all_identities(w)) return m;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Step& s = w[i];
    EventId e = -1;
    if (s.is_elementary()) {
      int pos = std::countr_zero(s.started() | s.terminated());
      e = m.glued.events[i][pos];
    }
    m.phi.push_back(e);
  }
  return m;
}

namespace {

Conclist without(const Conclist& u, int pos) {
  Conclist out = u;
  out.erase(out.begin() + pos);
  return out;
}

int acting_position(const Step& s) { return std::countr_zero(s.started() | s.terminated()); }

}  // namespace

bool transpose(StepWord& w, int i, SwapKind* kind) {
  const Step& l1 = w[i];
  const Step& l2 = w[i + 1];
  Step n1, n2;
  SwapKind k;
  if (l1.is_starter() && l2.is_starter()) {
    int p1 = acting_position(l1), p2 = acting_position(l2);
    int a2 = p1 < p2 ? p1 : p1 + 1;
    int b1 = p2 < a2 ? p2 : p2 - 1;
    n1 = make_starter(without(l2.labels, a2), bit(b1));
    n2 = make_starter(l2.labels, bit(a2));
    k = SwapKind::starters;
  } else if (l1.is_terminator() && l2.is_terminator()) {
    int q1 = acting_position(l1), q2 = acting_position(l2);
    int a1 = q2 < q1 ? q2 : q2 + 1;
    int b2 = q1 < a1 ? q1 : q1 - 1;
    n1 = make_terminator(l1.labels, bit(a1));
    n2 = make_terminator(without(l1.labels, a1), bit(b2));
    k = SwapKind::terminators;
  } else if (l1.is_starter() && l2.is_terminator()) {
    int pa = acting_position(l1), pb = acting_position(l2);
    if (pa == pb) return false;
    n1 = make_terminator(without(l1.labels, pa), bit(pb < pa ? pb : pb - 1));
    n2 = make_starter(without(l1.labels, pb), bit(pa < pb ? pa : pa - 1));
    k = SwapKind::start_end;
  } else {
    return false;
  }
  w[i] = std::move(n1);
  w[i + 1] = std::move(n2);
  if (kind) *kind = k;
  return true;
}

namespace {

using Steps = std::vector<ChainStep>;

// Moves letter `from` down to position `to` by adjacent transpositions,
// recording each intermediate word.
bool sink(StepWord& w, int from, int to, Steps& steps) {
  for (int j = from - 1; j >= to; --j) {
    SwapKind k;
    if (!transpose(w, j, &k)) return false;
    steps.push_back({k, j, w});
  }
  return true;
}

// Three-case induction on the first letters of the suffixes u[i..], v[i..]:
// either u starts with a starter, v starts with a terminator, or u starts
// with a terminator while v starts with a starter.
std::optional<Steps> solve(const StepWord& u, const StepWord& v, int i) {
  int n = static_cast<int>(u.size());
  if (i == n) return u == v ? std::optional<Steps>(Steps{}) : std::nullopt;
  if (u[i].is_starter()) {
    for (int m = i; m < n && v[m].is_starter(); ++m) {
      StepWord x = v;
      Steps steps;
      if (!sink(x, m, i, steps) || x[i] != u[i]) continue;
      if (auto rest = solve(u, x, i + 1)) {
        steps.insert(steps.end(), rest->begin(), rest->end());
        return steps;
      }
    }
    return std::nullopt;
  }
  if (v[i].is_terminator()) {
    // Rearrange u instead; terminator swaps are reversible.
    for (int m = i; m < n && u[m].is_terminator(); ++m) {
      StepWord y = u;
      Steps forward;
      if (!sink(y, m, i, forward) || y[i] != v[i]) continue;
      auto rest = solve(y, v, i + 1);
      if (!rest) continue;
      Steps steps = *rest;
      for (int t = static_cast<int>(forward.size()) - 1; t >= 0; --t)
        steps.push_back({SwapKind::terminators, forward[t].position,
                         t == 0 ? u : forward[t - 1].word});
      return steps;
    }
    return std::nullopt;
  }
  for (int k = i + 1; k < n; ++k) {
    if (!v[k].is_terminator()) continue;
    StepWord x = v;
    Steps steps;
    if (!sink(x, k, i, steps) || x[i] != u[i]) continue;
    if (auto rest = solve(u, x, i + 1)) {
      steps.insert(steps.end(), rest->begin(), rest->end());
      return steps;
    }
  }
  return std::nullopt;
}

}  // namespace

PreceqResult preceq(const StepWord& u, const StepWord& v) {
  require_coherent(u);
  require_coherent(v);
  if (!is_dense(u) || !is_dense(v)) throw Error(Errc::not_dense, "preceq needs dense words");
  if (u.size() != v.size())
    throw Error(Errc::length_mismatch, "words of length " + std::to_string(u.size()) + " and " +
                                           std::to_string(v.size()));
  PreceqResult r;
  if (u.front().source_conclist() != v.front().source_conclist() ||
      u.back().target_conclist() != v.back().target_conclist())
    return r;
  if (auto steps = solve(u, v, 0)) {
    r.holds = true;
    r.steps = std::move(*steps);
  }
  return r;
}

std::vector<ChainStep> subsumption_chain(const Ipomset& p, const Ipomset& q) {
  if (!subsumes(p, q)) throw Error(Errc::not_subsumed, describe(p) + " vs " + describe(q));
  auto r = preceq(dense_refine(sparse_decompose(p)), dense_refine(sparse_decompose(q)));
  if (!r.holds) throw Error(Errc::not_subsumed, "no transposition chain found");
  return r.steps;
}

}  // namespace ipoms
