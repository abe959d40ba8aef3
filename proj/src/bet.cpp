#include "ipoms/bet.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "ipoms/error.hpp"
#include "ipoms/sta.hpp"

namespace ipoms {
namespace {

// Automaton over symbols letter << vars.size() | track bits. Each first-order
// track of an accepted word carries exactly one mark.
struct Tracked {
  Dfa dfa;
  std::vector<std::string> vars;
};

int index_of(const std::vector<std::string>& vars, const std::string& v) {
  auto it = std::find(vars.begin(), vars.end(), v);
  return it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
}

// Dfa from a transition function returning -1 for the sink.
template <class F>
Dfa build(int letters, int nv, int states, const std::vector<int>& finals, F step) {
  Dfa d;
  d.symbols = letters << nv;
  d.initial = 0;
  d.final.assign(states + 1, false);
  for (int q : finals) d.final[q] = true;
  d.table.resize(static_cast<std::size_t>(states + 1) * d.symbols);
  int mask = (1 << nv) - 1;
  for (int q = 0; q <= states; ++q)
    for (int s = 0; s < d.symbols; ++s) {
      int r = q == states ? -1 : step(q, s >> nv, s & mask);
      d.table[static_cast<std::size_t>(q) * d.symbols + s] = r < 0 ? states : r;
    }
  return minimize(d);
}

// Product with an arbitrary boolean acceptance condition.
template <class Op>
Dfa combine(const Dfa& a, const Dfa& b, Op op) {
  Dfa p;
  p.symbols = a.symbols;
  std::unordered_map<long long, int> index;
  std::vector<std::pair<int, int>> pairs;
  auto intern = [&](int x, int y) {
    auto [it, fresh] = index.emplace(static_cast<long long>(x) * b.states() + y,
                                     static_cast<int>(pairs.size()));
    if (fresh) {
      pairs.emplace_back(x, y);
      p.final.push_back(op(a.final[x], b.final[y]));
    }
    return it->second;
  };
  p.initial = intern(a.initial, b.initial);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [x, y] = pairs[i];
    for (int s = 0; s < a.symbols; ++s) {
      int r = intern(a.next(x, s), b.next(y, s));
      p.table.push_back(r);
    }
  }
  return minimize(p);
}

class Compiler {
 public:
  Compiler(const Alphabet& alpha, std::size_t cap) : alpha_(alpha), letters_(alpha.size()), cap_(cap) {}

  Tracked compile(const FormulaPtr& f) {
    switch (f->op) {
      case Op::truth:
      case Op::falsity: {
        std::vector<int> fin;
        if (f->op == Op::truth) fin.push_back(0);
        return {build(letters_, 0, 1, fin, [](int, int, int) { return 0; }), {}};
      }
      case Op::letter: {
        int want = alpha_.require(f->letter);
        return {build(letters_, 1, 2, {1},
                      [&](int q, int l, int bits) {
                        if (!bits) return q;
                        return q == 0 && l == want ? 1 : -1;
                      }),
                {f->x}};
      }
      case Op::less:
      case Op::succ:
      case Op::eq:
        return relation(f->op, f->x, f->y);
      case Op::in:
        return {build(letters_, 2, 2, {1},
                      [](int q, int, int bits) {
                        if (!(bits & 1)) return q;
                        return q == 0 && (bits & 2) ? 1 : -1;
                      }),
                {f->x, f->y}};
      case Op::neg:
        return negate(compile(f->kids[0]));
      case Op::conj:
      case Op::disj: {
        bool is_and = f->op == Op::conj;
        Tracked acc = compile(f->kids[0]);
        for (std::size_t i = 1; i < f->kids.size(); ++i) {
          Tracked next = compile(f->kids[i]);
          acc = is_and ? apply(acc, next, [](bool a, bool b) { return a && b; }, false)
                       : apply(acc, next, [](bool a, bool b) { return a || b; }, false);
        }
        return acc;
      }
      case Op::implies:
        return apply(compile(f->kids[0]), compile(f->kids[1]),
                     [](bool a, bool b) { return !a || b; }, true);
      case Op::iff:
        return apply(compile(f->kids[0]), compile(f->kids[1]),
                     [](bool a, bool b) { return a == b; }, true);
      case Op::exists:
      case Op::exists_set:
      case Op::forall:
      case Op::forall_set:
        return quantifier(f);
      default:
        throw Error(Errc::invalid_argument, "not a word formula: " + to_string(f));
    }
  }

 private:
  const Alphabet& alpha_;
  int letters_;
  std::size_t cap_;
  std::unordered_map<std::string, Tracked> cache_;

  Tracked relation(Op op, const std::string& x, const std::string& y) {
    if (x == y) {
      if (op == Op::eq) return {sing({x}, 1), {x}};
      return {build(letters_, 1, 1, {}, [](int, int, int) { return 0; }), {x}};
    }
    // States: 0 nothing marked, 1 x marked, 2 both marked.
    auto step = [op](int q, int, int bits) {
      bool bx = bits & 1, by = bits & 2;
      if (!bx && !by) return (op == Op::succ && q == 1) ? -1 : q;
      if (op == Op::eq) return q == 0 && bx && by ? 2 : -1;
      if (q == 0 && bx && !by) return 1;
      if (q == 1 && !bx && by) return 2;
      return -1;
    };
    return {build(letters_, 2, 3, {2}, step), {x, y}};
  }

  // Words with exactly one mark on each track in `mask`.
  Dfa sing(const std::vector<std::string>& vars, int mask) {
    int nv = static_cast<int>(vars.size());
    std::vector<int> tracks;
    for (int t = 0; t < nv; ++t)
      if (mask >> t & 1) tracks.push_back(t);
    int n = static_cast<int>(tracks.size());
    return build(letters_, nv, 1 << n, {(1 << n) - 1}, [&](int q, int, int bits) {
      for (int i = 0; i < n; ++i)
        if (bits >> tracks[i] & 1) {
          if (q >> i & 1) return -1;
          q |= 1 << i;
        }
      return q;
    });
  }

  int first_order_mask(const std::vector<std::string>& vars) const {
    int mask = 0;
    for (std::size_t t = 0; t < vars.size(); ++t)
      if (is_first_order(vars[t])) mask |= 1 << t;
    return mask;
  }

  Tracked restrict_sing(Dfa d, const std::vector<std::string>& vars) {
    int mask = first_order_mask(vars);
    if (mask) d = minimize(intersect(d, sing(vars, mask)));
    return {std::move(d), vars};
  }

  Tracked negate(const Tracked& t) { return restrict_sing(complement(t.dfa), t.vars); }

  // Cylindrification onto w, which contains t.vars.
  Tracked align(const Tracked& t, const std::vector<std::string>& w) {
    if (t.vars == w) return t;
    int nw = static_cast<int>(w.size()), nv = static_cast<int>(t.vars.size());
    if (nw > 20) throw Error(Errc::capacity, "too many free variables in a subformula");
    std::vector<int> where(nv);
    for (int i = 0; i < nv; ++i) where[i] = index_of(w, t.vars[i]);
    Dfa d;
    d.symbols = letters_ << nw;
    d.initial = t.dfa.initial;
    d.final = t.dfa.final;
    std::vector<int> old(d.symbols);
    int mask = (1 << nw) - 1;
    for (int s = 0; s < d.symbols; ++s) {
      int bits = s & mask, ob = 0;
      for (int i = 0; i < nv; ++i)
        if (bits >> where[i] & 1) ob |= 1 << i;
      old[s] = (s >> nw) << nv | ob;
    }
    d.table.resize(static_cast<std::size_t>(t.dfa.states()) * d.symbols);
    for (int q = 0; q < t.dfa.states(); ++q)
      for (int s = 0; s < d.symbols; ++s)
        d.table[static_cast<std::size_t>(q) * d.symbols + s] = t.dfa.next(q, old[s]);
    int fresh = 0;
    for (int i = 0; i < nw; ++i)
      if (is_first_order(w[i]) && index_of(t.vars, w[i]) < 0) fresh |= 1 << i;
    if (fresh) d = intersect(d, sing(w, fresh));
    return {minimize(d), w};
  }

  template <class Fn>
  Tracked apply(const Tracked& a, const Tracked& b, Fn op, bool resing) {
    std::vector<std::string> w = a.vars;
    for (const auto& v : b.vars)
      if (index_of(w, v) < 0) w.push_back(v);
    Tracked x = align(a, w), y = align(b, w);
    Dfa d = combine(x.dfa, y.dfa, op);
    if (resing) return restrict_sing(std::move(d), w);
    return {std::move(d), w};
  }

  Tracked exists(const Tracked& t, const std::string& v) {
    int pos = index_of(t.vars, v);
    if (pos < 0) {
      if (!is_first_order(v)) return t;
      // A position must exist.
      int nv = static_cast<int>(t.vars.size());
      Dfa some = build(letters_, nv, 2, {1}, [](int, int, int) { return 1; });
      return {minimize(intersect(t.dfa, some)), t.vars};
    }
    int nv = static_cast<int>(t.vars.size());
    std::vector<std::string> rest = t.vars;
    rest.erase(rest.begin() + pos);
    std::vector<int> map(t.dfa.symbols);
    int low = (1 << pos) - 1;
    for (int s = 0; s < t.dfa.symbols; ++s) {
      int bits = s & ((1 << nv) - 1);
      int nb = (bits & low) | ((bits >> (pos + 1)) << pos);
      map[s] = (s >> nv) << (nv - 1) | nb;
    }
    Nfa n = project(to_nfa(t.dfa), map, letters_ << (nv - 1));
    return {minimize(determinize(n, cap_)), rest};
  }

  Tracked quantifier(const FormulaPtr& f) {
    std::vector<std::string> free;
    std::string key;
    std::vector<std::string> scope;
    canonical(f, scope, free, key);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      const std::string& v = f->x;
      Tracked body = compile(f->kids[0]);
      bool universal = f->op == Op::forall || f->op == Op::forall_set;
      Tracked r = universal ? negate(exists(negate(body), v)) : exists(body, v);
      for (auto& name : r.vars) name = "#" + std::to_string(index_of(free, name));
      it = cache_.emplace(std::move(key), std::move(r)).first;
    }
    Tracked r = it->second;
    for (auto& name : r.vars) name = free[std::stoi(name.substr(1))];
    return r;
  }

  // Serialization with bound variables numbered by depth and free variables
  // by first occurrence.
  static void canonical(const FormulaPtr& f, std::vector<std::string>& scope,
                        std::vector<std::string>& free, std::string& out) {
    auto var = [&](const std::string& v) {
      for (std::size_t i = scope.size(); i-- > 0;)
        if (scope[i] == v) {
          out += (is_first_order(v) ? "b" : "B") + std::to_string(i) + ',';
          return;
        }
      int at = index_of(free, v);
      if (at < 0) {
        at = static_cast<int>(free.size());
        free.push_back(v);
      }
      out += (is_first_order(v) ? "f" : "F") + std::to_string(at) + ',';
    };
    out += std::to_string(static_cast<int>(f->op));
    out += '(';
    switch (f->op) {
      case Op::letter:
        out += to_string(f->letter);
        var(f->x);
        break;
      case Op::less:
      case Op::succ:
      case Op::eq:
      case Op::in:
        var(f->x);
        var(f->y);
        break;
      case Op::exists:
      case Op::exists_set:
      case Op::forall:
      case Op::forall_set:
        scope.push_back(f->x);
        canonical(f->kids[0], scope, free, out);
        scope.pop_back();
        break;
      default:
        for (const auto& k : f->kids) canonical(k, scope, free, out);
    }
    out += ')';
  }
};

Label fresh_label(const std::vector<Label>& used) {
  for (Label c = 'a'; c <= 'z'; ++c)
    if (std::find(used.begin(), used.end(), c) == used.end()) return c;
  throw Error(Errc::invalid_argument, "no label left");
}

std::vector<Label> merge_labels(std::vector<Label> a, const std::vector<Label>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

Dfa msow_to_dfa(const MsowFormula& f, std::size_t cap) {
  if (!free_variables(f.formula).empty())
    throw Error(Errc::invalid_argument, "formula has free variables");
  if (!is_msow(f.formula, f.alphabet))
    throw Error(Errc::invalid_argument, "not a word formula over the alphabet");
  Compiler c(f.alphabet, cap);
  return c.compile(f.formula).dfa;
}

Nfa msow_to_nfa(const MsowFormula& f, std::size_t cap) { return to_nfa(msow_to_dfa(f, cap)); }

MsowFormula nfa_to_msow(const Nfa& a, const Alphabet& alpha, std::size_t cap) {
  if (a.symbols != alpha.size())
    throw Error(Errc::invalid_argument, "automaton symbols do not match the alphabet");
  Dfa d = minimize(determinize(a, cap));
  int n = d.states();
  // Co-reachable states.
  std::vector<bool> live(d.final);
  for (bool changed = true; changed;) {
    changed = false;
    for (int q = 0; q < n; ++q)
      for (int s = 0; !live[q] && s < d.symbols; ++s)
        if (live[d.next(q, s)]) live[q] = changed = true;
  }
  // States reached after at least one letter, numbered in binary.
  std::vector<int> code(n, -1);
  int codes = 0;
  std::vector<int> used;
  for (int q = 0; q < n; ++q)
    for (int s = 0; live[q] && s < d.symbols; ++s) {
      int r = d.next(q, s);
      if (!live[r]) continue;
      if (code[r] < 0) code[r] = codes++;
      used.push_back(s);
    }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());

  std::vector<FormulaPtr> parts;
  if (d.final[d.initial]) parts.push_back(mso::neg(mso::exists("x", mso::truth())));
  if (codes > 0) {
    int m = 1;
    while ((1 << m) < codes) ++m;
    std::vector<std::string> sets;
    for (int b = 1; b <= m; ++b) sets.push_back("X" + std::to_string(b));
    auto state_is = [&](const std::string& x, int c) {
      std::vector<FormulaPtr> bits;
      for (int b = 0; b < m; ++b) {
        FormulaPtr f = mso::in(x, sets[b]);
        bits.push_back(c >> b & 1 ? f : mso::neg(f));
      }
      return mso::conj(std::move(bits));
    };
    auto letters = [&](const std::string& x, const std::vector<int>& syms) {
      std::vector<FormulaPtr> fs;
      for (int s : syms) fs.push_back(mso::letter(alpha.letter(s), x));
      return mso::disj(std::move(fs));
    };
    auto moves = [&](int q, const std::string& y) {
      // Disjunction over targets r of "y is in state r and read a letter to r".
      std::map<int, std::vector<int>> by_target;
      for (int s = 0; s < d.symbols; ++s)
        if (code[d.next(q, s)] >= 0 && live[d.next(q, s)]) by_target[d.next(q, s)].push_back(s);
      std::vector<FormulaPtr> fs;
      for (const auto& [r, syms] : by_target)
        fs.push_back(mso::conj({state_is(y, code[r]), letters(y, syms)}));
      return mso::disj(std::move(fs));
    };
    FormulaPtr first = mso::forall(
        "x", mso::implies(mso::neg(mso::exists("y", mso::less("y", "x"))), moves(d.initial, "x")));
    std::vector<FormulaPtr> steps;
    for (int q = 0; q < n; ++q)
      if (code[q] >= 0) steps.push_back(mso::conj({state_is("x", code[q]), moves(q, "y")}));
    FormulaPtr next =
        mso::forall(std::vector<std::string>{"x", "y"}, mso::implies(mso::succ("x", "y"), mso::disj(std::move(steps))));
    std::vector<FormulaPtr> ends;
    for (int q = 0; q < n; ++q)
      if (code[q] >= 0 && d.final[q]) ends.push_back(state_is("x", code[q]));
    FormulaPtr last = mso::forall(
        "x", mso::implies(mso::neg(mso::exists("y", mso::less("x", "y"))), mso::disj(std::move(ends))));
    FormulaPtr filter = mso::forall("x", letters("x", used));
    parts.push_back(mso::conj({mso::exists("x", mso::truth()), filter,
                               mso::exists(sets, mso::conj({first, next, last}))}));
  }
  return {rename_apart(mso::disj(std::move(parts))), alpha};
}

Dfa coh_automaton(const Alphabet& alpha) {
  // State 0 initial, 1 sink, then one state per conclist.
  std::map<Conclist, int> state;
  for (const Step& d : alpha.letters()) {
    state.emplace(d.source_conclist(), 0);
    state.emplace(d.target_conclist(), 0);
  }
  int n = 2;
  for (auto& [u, q] : state) q = n++;
  Dfa a;
  a.symbols = alpha.size();
  a.initial = 0;
  a.final.assign(n, true);
  a.final[0] = a.final[1] = false;
  a.table.assign(static_cast<std::size_t>(n) * a.symbols, 1);
  for (int s = 0; s < a.symbols; ++s) {
    const Step& d = alpha.letter(s);
    int from = state.at(d.source_conclist()), to = state.at(d.target_conclist());
    a.table[s] = to;
    a.table[static_cast<std::size_t>(from) * a.symbols + s] = to;
  }
  return minimize(a);
}

Dfa sparse_word_automaton(const Alphabet& alpha) {
  // 0 initial, 1 identity read, 2 after a starter, 3 after a terminator, 4 sink.
  Dfa a;
  a.symbols = alpha.size();
  a.initial = 0;
  a.final = {false, true, true, true, false};
  a.table.assign(5 * static_cast<std::size_t>(a.symbols), 4);
  for (int s = 0; s < a.symbols; ++s) {
    const Step& d = alpha.letter(s);
    if (d.is_identity()) {
      a.table[s] = 1;
    } else if (d.is_starter()) {
      a.table[s] = 2;
      a.table[3 * static_cast<std::size_t>(a.symbols) + s] = 2;
    } else {
      a.table[s] = 3;
      a.table[2 * static_cast<std::size_t>(a.symbols) + s] = 3;
    }
  }
  return minimize(a);
}

SatResult satisfiable(const MsopFormula& f, int k, std::size_t cap) {
  if (k < 1) throw Error(Errc::invalid_argument, "width bound must be positive");
  std::vector<Label> sigma = labels(f.formula);
  sigma.push_back(fresh_label(sigma));
  std::sort(sigma.begin(), sigma.end());
  Alphabet alpha(sigma, k);
  Dfa hat = msow_to_dfa(hat_translate(f, alpha), cap);
  auto w = shortest_word(intersect(hat, sparse_word_automaton(alpha)));
  SatResult r;
  if (!w) return r;
  r.satisfiable = true;
  r.word = decode(alpha, *w);
  r.witness = glue_word(r.word);
  if (!eval_ipomset(*r.witness, f)) throw std::logic_error("satisfiability witness rejected");
  return r;
}

CheckResult model_check(const Hda& h, const MsopFormula& f, std::size_t cap) {
  StAutomaton st = from_hda(h);
  Alphabet alpha(merge_labels(h.labels(), labels(f.formula)), std::max(1, st.width()));
  Nfa lang = sparse_nfa(st, alpha, true);
  Dfa bad = complement(msow_to_dfa(hat_translate(f, alpha), cap));
  auto w = shortest_word(intersect(lang, to_nfa(bad)));
  CheckResult r;
  if (!w) {
    r.holds = true;
    return r;
  }
  r.word = decode(alpha, *w);
  r.counterexample = glue_word(r.word);
  if (eval_ipomset(*r.counterexample, f)) throw std::logic_error("counterexample satisfies the formula");
  return r;
}

MsopFormula hda_to_msop(const Hda& h, std::size_t cap) {
  StAutomaton st = from_hda(h);
  Alphabet alpha(h.labels(), std::max(1, st.width()));
  return bar_translate(nfa_to_msow(sparse_nfa(st, alpha, true), alpha, cap));
}

}  // namespace ipoms
