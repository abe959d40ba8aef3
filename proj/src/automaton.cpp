#include "ipoms/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace ipoms {

int Nfa::add_state(bool is_final) {
  delta.emplace_back();
  final.push_back(is_final);
  return states() - 1;
}

void Nfa::add_transition(int from, int symbol, int to) { delta[from].emplace_back(symbol, to); }

void Nfa::normalize() {
  for (auto& row : delta) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  std::sort(initial.begin(), initial.end());
  initial.erase(std::unique(initial.begin(), initial.end()), initial.end());
}

namespace {

void require_same(int a, int b) {
  if (a != b)
    throw Error(Errc::alphabet_mismatch,
                "automata over " + std::to_string(a) + " and " + std::to_string(b) + " symbols");
}

void require_word(int symbols, const Word& w) {
  for (int s : w)
    if (s < 0 || s >= symbols) throw Error(Errc::alphabet_mismatch, "symbol out of range");
}

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

bool accepts(const Nfa& a, const Word& w) {
  require_word(a.symbols, w);
  std::vector<bool> cur(a.states(), false);
  for (int q : a.initial) cur[q] = true;
  for (int s : w) {
    std::vector<bool> nxt(a.states(), false);
    for (int q = 0; q < a.states(); ++q)
      if (cur[q])
        for (auto [sym, r] : a.delta[q])
          if (sym == s) nxt[r] = true;
    cur = std::move(nxt);
  }
  for (int q = 0; q < a.states(); ++q)
    if (cur[q] && a.final[q]) return true;
  return false;
}

bool accepts(const Dfa& a, const Word& w) {
  require_word(a.symbols, w);
  int q = a.initial;
  for (int s : w) q = a.next(q, s);
  return a.final[q];
}

Dfa determinize(const Nfa& a, std::size_t cap) {
  Dfa d;
  d.symbols = a.symbols;
  std::unordered_map<std::vector<int>, int, VectorHash> index;
  std::vector<std::vector<int>> sets;
  auto intern = [&](std::vector<int> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    auto [it, fresh] = index.emplace(s, static_cast<int>(sets.size()));
    if (fresh) {
      if (sets.size() >= cap)
        throw Error(Errc::capacity, "subset construction exceeds " + std::to_string(cap) + " states");
      bool fin = std::any_of(s.begin(), s.end(), [&](int q) { return a.final[q]; });
      d.final.push_back(fin);
      sets.push_back(std::move(s));
    }
    return it->second;
  };
  d.initial = intern(a.initial);
  std::vector<std::vector<int>> buckets(a.symbols);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (auto& b : buckets) b.clear();
    for (int q : sets[i])
      for (auto [sym, r] : a.delta[q]) buckets[sym].push_back(r);
    d.table.resize(sets.size() * a.symbols);
    for (int sym = 0; sym < a.symbols; ++sym) {
      int t = intern(buckets[sym]);
      d.table.resize(sets.size() * a.symbols);
      d.table[i * a.symbols + sym] = t;
    }
  }
  d.table.resize(sets.size() * a.symbols);
  return d;
}

Dfa minimize(const Dfa& a) {
  // Reachable states.
  std::vector<int> order{a.initial};
  std::vector<int> pos(a.states(), -1);
  pos[a.initial] = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int s = 0; s < a.symbols; ++s) {
      int r = a.next(order[i], s);
      if (pos[r] < 0) {
        pos[r] = static_cast<int>(order.size());
        order.push_back(r);
      }
    }
  int n = static_cast<int>(order.size());
  std::vector<int> cls(n);
  for (int i = 0; i < n; ++i) cls[i] = a.final[order[i]] ? 1 : 0;
  int classes = 0;
  for (;;) {
    std::unordered_map<std::vector<int>, int, VectorHash> sig;
    std::vector<int> next_cls(n);
    std::vector<int> key(a.symbols + 1);
    for (int i = 0; i < n; ++i) {
      key[0] = cls[i];
      for (int s = 0; s < a.symbols; ++s) key[s + 1] = cls[pos[a.next(order[i], s)]];
      next_cls[i] = sig.emplace(key, static_cast<int>(sig.size())).first->second;
    }
    int count = static_cast<int>(sig.size());
    cls = std::move(next_cls);
    if (count == classes) break;
    classes = count;
  }
  // Renumber classes breadth-first from the initial state.
  std::vector<int> rep(classes, -1), id(classes, -1);
  for (int i = 0; i < n; ++i)
    if (rep[cls[i]] < 0) rep[cls[i]] = i;
  Dfa m;
  m.symbols = a.symbols;
  std::vector<int> queue{cls[0]};
  id[cls[0]] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (int s = 0; s < a.symbols; ++s) {
      int c = cls[pos[a.next(order[rep[queue[i]]], s)]];
      if (id[c] < 0) {
        id[c] = static_cast<int>(queue.size());
        queue.push_back(c);
      }
    }
  m.final.resize(queue.size());
  m.table.resize(queue.size() * a.symbols);
  for (std::size_t i = 0; i < queue.size(); ++i) {
    int q = order[rep[queue[i]]];
    m.final[i] = a.final[q];
    for (int s = 0; s < a.symbols; ++s) m.table[i * a.symbols + s] = id[cls[pos[a.next(q, s)]]];
  }
  m.initial = 0;
  return m;
}

Nfa to_nfa(const Dfa& a) {
  Nfa n(a.symbols);
  for (int q = 0; q < a.states(); ++q) n.add_state(a.final[q]);
  for (int q = 0; q < a.states(); ++q)
    for (int s = 0; s < a.symbols; ++s) n.add_transition(q, s, a.next(q, s));
  n.initial = {a.initial};
  return n;
}

Nfa nfa_union(const Nfa& a, const Nfa& b) {
  require_same(a.symbols, b.symbols);
  Nfa u = a;
  int off = a.states();
  for (int q = 0; q < b.states(); ++q) {
    u.add_state(b.final[q]);
    for (auto [s, r] : b.delta[q]) u.delta[off + q].emplace_back(s, off + r);
  }
  for (int q : b.initial) u.initial.push_back(off + q);
  return u;
}

Nfa intersect(const Nfa& a, const Nfa& b) {
  require_same(a.symbols, b.symbols);
  Nfa p(a.symbols);
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> pairs;
  auto intern = [&](int x, int y) {
    auto [it, fresh] = index.emplace(std::pair{x, y}, static_cast<int>(pairs.size()));
    if (fresh) {
      pairs.emplace_back(x, y);
      p.add_state(a.final[x] && b.final[y]);
    }
    return it->second;
  };
  for (int x : a.initial)
    for (int y : b.initial) p.initial.push_back(intern(x, y));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [x, y] = pairs[i];
    for (auto [s, x2] : a.delta[x])
      for (auto [t, y2] : b.delta[y])
        if (s == t) {
          int r = intern(x2, y2);
          p.delta[i].emplace_back(s, r);
        }
  }
  p.normalize();
  return p;
}

Dfa intersect(const Dfa& a, const Dfa& b) {
  require_same(a.symbols, b.symbols);
  Dfa p;
  p.symbols = a.symbols;
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> pairs;
  auto intern = [&](int x, int y) {
    auto [it, fresh] = index.emplace(std::pair{x, y}, static_cast<int>(pairs.size()));
    if (fresh) {
      pairs.emplace_back(x, y);
      p.final.push_back(a.final[x] && b.final[y]);
    }
    return it->second;
  };
  p.initial = intern(a.initial, b.initial);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [x, y] = pairs[i];
    for (int s = 0; s < a.symbols; ++s) {
      int r = intern(a.next(x, s), b.next(y, s));
      p.table.resize(pairs.size() * a.symbols);
      p.table[i * a.symbols + s] = r;
    }
  }
  p.table.resize(pairs.size() * a.symbols);
  return p;
}

Dfa complement(const Dfa& a) {
  Dfa c = a;
  c.final.flip();
  return c;
}

Dfa complement(const Nfa& a, std::size_t cap) { return complement(determinize(a, cap)); }

Nfa project(const Nfa& a, const std::vector<int>& map, int symbols) {
  Nfa p(symbols);
  p.delta.resize(a.states());
  p.final = a.final;
  p.initial = a.initial;
  for (int q = 0; q < a.states(); ++q)
    for (auto [s, r] : a.delta[q])
      if (map[s] >= 0) p.delta[q].emplace_back(map[s], r);
  p.normalize();
  return p;
}

std::optional<Word> shortest_word(const Nfa& a) {
  // Breadth-first search with parent links; symbols tried in increasing order.
  std::vector<int> parent(a.states(), -2), via(a.states(), -1);
  std::deque<int> queue;
  for (int q : a.initial)
    if (parent[q] == -2) {
      parent[q] = -1;
      queue.push_back(q);
    }
  std::vector<std::vector<std::pair<int, int>>> sorted = a.delta;
  for (auto& row : sorted) std::sort(row.begin(), row.end());
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    if (a.final[q]) {
      Word w;
      for (int x = q; parent[x] >= 0; x = parent[x]) w.push_back(via[x]);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (auto [s, r] : sorted[q])
      if (parent[r] == -2) {
        parent[r] = q;
        via[r] = s;
        queue.push_back(r);
      }
  }
  return std::nullopt;
}

std::optional<Word> shortest_word(const Dfa& a) { return shortest_word(to_nfa(a)); }

bool is_empty(const Nfa& a) { return !shortest_word(a).has_value(); }
bool is_empty(const Dfa& a) { return !shortest_word(a).has_value(); }

bool equivalent(const Dfa& a, const Dfa& b) {
  require_same(a.symbols, b.symbols);
  return is_empty(intersect(a, complement(b))) && is_empty(intersect(complement(a), b));
}

std::vector<Word> accepted_words(const Nfa& a, int max_len, std::size_t limit) {
  std::vector<Word> out;
  // Layered search over (word, reachable set); dead prefixes are dropped.
  std::vector<std::pair<Word, std::vector<int>>> layer{{{}, a.initial}};
  std::sort(layer[0].second.begin(), layer[0].second.end());
  layer[0].second.erase(std::unique(layer[0].second.begin(), layer[0].second.end()),
                        layer[0].second.end());
  for (int len = 0; len <= max_len && !layer.empty(); ++len) {
    for (const auto& [w, set] : layer) {
      if (std::any_of(set.begin(), set.end(), [&](int q) { return a.final[q]; })) {
        out.push_back(w);
        if (out.size() >= limit) return out;
      }
    }
    if (len == max_len) break;
    std::vector<std::pair<Word, std::vector<int>>> next;
    for (const auto& [w, set] : layer) {
      std::map<int, std::vector<int>> by_symbol;
      for (int q : set)
        for (auto [s, r] : a.delta[q]) by_symbol[s].push_back(r);
      for (auto& [s, targets] : by_symbol) {
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        Word w2 = w;
        w2.push_back(s);
        next.emplace_back(std::move(w2), std::move(targets));
      }
    }
    layer = std::move(next);
  }
  return out;
}

std::string to_text(const Nfa& a, const std::vector<std::string>& tokens) {
  std::ostringstream out;
  out << "nfa\nalphabet " << a.symbols << "\n";
  for (std::size_t i = 0; i < tokens.size(); ++i) out << "symbol " << i << " " << tokens[i] << "\n";
  out << "states " << a.states() << "\ninitial";
  std::vector<int> init = a.initial;
  std::sort(init.begin(), init.end());
  for (int q : init) out << " " << q;
  out << "\nfinal";
  for (int q = 0; q < a.states(); ++q)
    if (a.final[q]) out << " " << q;
  out << "\n";
  for (int q = 0; q < a.states(); ++q) {
    auto row = a.delta[q];
    std::sort(row.begin(), row.end());
    for (auto [s, r] : row) out << "trans " << q << " " << s << " " << r << "\n";
  }
  return out.str();
}

Nfa parse_nfa(std::string_view text, std::vector<std::string>* tokens) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto fail = [](const std::string& msg) -> void { throw Error(Errc::parse_error, "nfa: " + msg); };
  Nfa a;
  bool header = false, have_states = false;
  int lineno = 0;
  auto state = [&](int q) {
    if (!have_states || q < 0 || q >= a.states()) fail("state out of range");
    return q;
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw) || kw[0] == '#') continue;
    if (!header) {
      if (kw != "nfa") fail("missing header");
      header = true;
      continue;
    }
    if (kw == "alphabet") {
      if (!(ls >> a.symbols) || a.symbols < 0) fail("bad alphabet size");
    } else if (kw == "symbol") {
      int i;
      std::string tok;
      if (!(ls >> i) || i < 0 || i >= a.symbols) fail("bad symbol index");
      std::getline(ls, tok);
      tok.erase(0, tok.find_first_not_of(' '));
      if (tokens) {
        if (static_cast<int>(tokens->size()) <= i) tokens->resize(i + 1);
        (*tokens)[i] = tok;
      }
    } else if (kw == "states") {
      int n;
      if (!(ls >> n) || n < 0) fail("bad state count");
      a.delta.assign(n, {});
      a.final.assign(n, false);
      have_states = true;
    } else if (kw == "initial") {
      for (int q; ls >> q;) a.initial.push_back(state(q));
    } else if (kw == "final") {
      for (int q; ls >> q;) a.final[state(q)] = true;
    } else if (kw == "trans") {
      int p, s, q;
      if (!(ls >> p >> s >> q)) fail("bad transition on line " + std::to_string(lineno));
      if (s < 0 || s >= a.symbols) fail("symbol out of range on line " + std::to_string(lineno));
      a.add_transition(state(p), s, state(q));
    } else {
      fail("unknown keyword " + kw);
    }
  }
  if (!header) fail("missing header");
  a.normalize();
  return a;
}

Word encode(const Alphabet& alpha, const StepWord& w) {
  Word out;
  for (const Step& s : w) out.push_back(alpha.require(s));
  return out;
}

StepWord decode(const Alphabet& alpha, const Word& w) {
  StepWord out;
  for (int s : w) out.push_back(alpha.letter(s));
  return out;
}

std::vector<std::string> tokens(const Alphabet& alpha) {
  std::vector<std::string> out;
  for (const Step& s : alpha.letters()) out.push_back(to_string(s));
  return out;
}

}  // namespace ipoms
