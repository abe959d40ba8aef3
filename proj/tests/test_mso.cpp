#include <doctest.h>

#include <functional>
#include <map>
#include <set>

#include "ipoms/mso.hpp"
#include "formula_support.hpp"

using namespace ipoms;
using namespace testing_support;

namespace {

// Ipomset and coherent word of the two-a, c, d example; events 1..4 are the
// left a, the right a, the source c and d.
Ipomset example_ipomset() { return mk("aacd", "1<2 3<4 3<2", "1>3 1>4 2>4", "3", ""); }
const char* kPinnedLong = "[a., .c.]; [.a., .c]; [.a., d.]; [.a, .d.]; [a., .d.]; [.a, .d.]; [.d]";
const char* kPinned = "[a., .c.]; [.a., .c]; [.a., d.]; [.a, .d.]; [a., .d.]; [.a, .d]";
const char* kConcurrentAB = "exists x. exists y. a(x) & b(y) & !(x < y) & !(y < x)";

// Direct interpretation of the syntax tree, without compilation.
struct Naive {
  const Ipomset* p = nullptr;
  const StepWord* w = nullptr;
  std::map<std::string, int> fo;
  std::map<std::string, EventSet> so;

  int size() const { return p ? p->size() : static_cast<int>(w->size()); }
  bool less(int x, int y) const { return p ? p->less(x, y) : x < y; }

  bool eval(const FormulaPtr& f) {
    auto x = [&] { return fo.at(f->x); };
    auto y = [&] { return fo.at(f->y); };
    switch (f->op) {
      case Op::truth: return true;
      case Op::falsity: return false;
      case Op::label: return p->label(x()) == f->label;
      case Op::src: return p->is_source(x());
      case Op::tgt: return p->is_target(x());
      case Op::less: return less(x(), y());
      case Op::evord: return p->evord(x(), y());
      case Op::eq: return x() == y();
      case Op::succ: {
        if (!less(x(), y())) return false;
        for (int z = 0; z < size(); ++z)
          if (less(x(), z) && less(z, y())) return false;
        return true;
      }
      case Op::in: return has(so.at(f->y), x());
      case Op::letter: return (*w)[x()] == f->letter;
      case Op::neg: return !eval(f->kids[0]);
      case Op::conj:
        for (const auto& k : f->kids)
          if (!eval(k)) return false;
        return true;
      case Op::disj:
        for (const auto& k : f->kids)
          if (eval(k)) return true;
        return false;
      case Op::implies: return !eval(f->kids[0]) || eval(f->kids[1]);
      case Op::iff: return eval(f->kids[0]) == eval(f->kids[1]);
      case Op::exists:
      case Op::forall: {
        bool ex = f->op == Op::exists;
        auto saved = fo;
        bool result = !ex;
        for (int v = 0; v < size() && result != ex; ++v) {
          fo[f->x] = v;
          if (eval(f->kids[0]) == ex) result = ex;
        }
        fo = saved;
        return result;
      }
      case Op::exists_set:
      case Op::forall_set: {
        bool ex = f->op == Op::exists_set;
        auto saved = so;
        bool result = !ex;
        for (EventSet s = 0; s <= all_of(size()) && result != ex; ++s) {
          so[f->x] = s;
          if (eval(f->kids[0]) == ex) result = ex;
        }
        so = saved;
        return result;
      }
    }
    return false;
  }
};

bool naive_ipomset(const Ipomset& p, const FormulaPtr& f, const Valuation& nu = {}) {
  Naive n{&p, nullptr, nu.first, nu.second};
  return n.eval(f);
}

bool naive_word(const StepWord& w, const FormulaPtr& f, const Valuation& nu = {}) {
  Naive n{nullptr, &w, nu.first, nu.second};
  return n.eval(f);
}

std::vector<std::string> bound_names(const FormulaPtr& f) {
  std::vector<std::string> out;
  std::function<void(const FormulaPtr&)> go = [&](const FormulaPtr& g) {
    if (g->op == Op::exists || g->op == Op::forall || g->op == Op::exists_set || g->op == Op::forall_set)
      out.push_back(g->x);
    for (const auto& k : g->kids) go(k);
  };
  go(f);
  return out;
}

bool letters_within(const FormulaPtr& f, const Alphabet& alpha) {
  bool ok = true;
  std::function<void(const FormulaPtr&)> go = [&](const FormulaPtr& g) {
    if (g->op == Op::letter) ok = ok && alpha.index(g->letter).has_value();
    for (const auto& k : g->kids) go(k);
  };
  go(f);
  return ok;
}

}  // namespace

TEST_CASE("formula text round-trips") {
  for (const char* text :
       {kConcurrentAB, "forall X. exists x. x in X -> src(x) | tgt(x)", "!(a(x) <-> b(y)) & x => y",
        "exists x, y. x <. y & ([.a., b.](x) | [](y))", "(true -> false) -> true", "a(x) <-> b(x) <-> c(x)",
        "!exists x. a(x)", "(exists x. a(x)) & b(y)"}) {
    FormulaPtr f = parse_formula(text);
    std::string printed = to_string(f);
    CHECK(to_string(parse_formula(printed)) == printed);
  }
  CHECK(to_string(parse_formula("exists x, y. x < y")) == "exists x. exists y. x < y");
  CHECK(to_string(parse_formula("true -> false -> true")) == "true -> false -> true");
  CHECK(parse_formula("(true -> false) -> true")->kids[0]->op == Op::implies);

  std::mt19937 rng(1);
  Alphabet alpha({'a', 'b'}, 2);
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = random_formula(rng, 5, i % 2 == 0, alpha.letters(), {}, {});
    std::string printed = to_string(f);
    FormulaPtr g = parse_formula(printed);
    CHECK(to_string(g) == printed);
    CHECK(node_count(g) == node_count(f));
  }

  for (const char* bad : {"exists x a(x)", "a(x", "x <", "forall in. true", "ab(x)", "[a.(x)", "x y"}) {
    try {
      parse_formula(bad);
      FAIL("accepted " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::parse_error);
    }
  }
  CHECK_THROWS_AS(parse_msop("[a.](x)"), Error);
  CHECK_THROWS_AS(parse_msop("a(X)"), Error);
  CHECK_THROWS_AS(parse_msow("src(x)", alpha), Error);
  try {
    parse_msow("exists x. [c.](x)", alpha);
    FAIL("foreign letter accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::alphabet_mismatch);
  }
}

TEST_CASE("formula queries") {
  FormulaPtr f = parse_formula("exists x. a(x) & x < y & x in X | forall Y. z in Y");
  CHECK(free_variables(f) == std::vector<std::string>{"y", "X", "z"});
  CHECK(variables(f) == std::vector<std::string>{"X", "Y", "x", "y", "z"});
  CHECK(labels(f) == std::vector<Label>{'a'});
  CHECK(is_msop(f));
  CHECK_FALSE(is_msow(f, Alphabet({'a'}, 1)));
  FormulaPtr g = parse_formula("exists x. exists x. x < y");
  FormulaPtr r = rename_apart(g);
  auto names = bound_names(r);
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == 2);
  CHECK(free_variables(r) == std::vector<std::string>{"y"});
}

TEST_CASE("concurrent a and b") {
  MsopFormula phi = parse_msop(kConcurrentAB);
  CHECK(eval_ipomset(par("ab"), phi));
  CHECK_FALSE(eval_ipomset(chain("ab"), phi));
  CHECK_FALSE(eval_ipomset(chain("ba"), phi));
  CHECK(eval_ipomset(par("abb"), phi));
}

TEST_CASE("sources of the example ipomset") {
  Ipomset p = example_ipomset();
  FormulaPtr f = parse_formula("src(x)");
  for (int e = 0; e < 4; ++e) CHECK(eval_ipomset(p, f, {{{"x", e}}, {}}) == (e == 2));
  try {
    eval_ipomset(p, f);
    FAIL("free variable without a value");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unbound_variable);
  }
}

TEST_CASE("compiled evaluation agrees with direct interpretation") {
  std::mt19937 rng(2);
  auto ipomsets = small_ipomsets(3);
  Alphabet alpha({'a', 'b'}, 1);
  auto words = all_words(alpha.letters(), 3);
  for (int i = 0; i < 400; ++i) {
    bool word = i % 2 == 1;
    FormulaPtr f = random_formula(rng, 5, word, alpha.letters(), {}, {});
    Evaluator eval(f);
    if (word) {
      for (std::size_t j = 0; j < words.size(); j += 7) CHECK(eval(words[j]) == naive_word(words[j], f));
    } else {
      for (std::size_t j = 0; j < ipomsets.size(); j += 5)
        CHECK(eval(ipomsets[j]) == naive_ipomset(ipomsets[j], f));
    }
  }
}

TEST_CASE("guarded set quantifiers agree with direct interpretation") {
  // Shapes recognized as range and closure guards, with free variables.
  std::vector<std::string> texts{
      "exists X. (forall u. u in X -> !src(u)) & (forall u. forall v. u in X & u < v -> v in X) & x in X & !(y in X)",
      "forall X. (forall u. u in X -> a(u)) & (forall u. forall v. u in X & v < u -> v in X) -> x in X | y in X",
      "forall X. forall Y. x in X & (forall u. forall v. u in X & u < v -> v in Y) & "
      "(forall u. forall v. u in Y & v < u -> v in X) -> y in Y",
      "exists X. exists Y. (forall u. u in Y -> b(u)) & x in Y & (forall u. forall v. u in Y & v => u -> v in X) & "
      "!(y in X)",
  };
  auto ipomsets = small_ipomsets(3);
  for (const auto& text : texts) {
    FormulaPtr f = parse_formula(text);
    Evaluator eval(f);
    for (const auto& p : ipomsets)
      for (int x = 0; x < p.size(); ++x)
        for (int y = 0; y < p.size(); ++y) {
          Valuation nu{{{"x", x}, {"y", y}}, {}};
          CHECK(eval(p, nu) == naive_ipomset(p, f, nu));
        }
  }
}

TEST_CASE("coherence formula") {
  Alphabet alpha({'a', 'b'}, 2);
  MsowFormula coh{coh_formula(alpha), alpha};
  CHECK(eval_word(parse_word(kPinnedLong), {coh_formula(Alphabet({'a', 'c', 'd'}, 2)), Alphabet({'a', 'c', 'd'}, 2)}));
  CHECK_FALSE(eval_word(parse_word("[a.]; [.b]"), coh));
  for (const auto& w : all_words(Alphabet({'a', 'b'}, 1).letters(), 3)) CHECK(eval_word(w, coh) == is_coherent(w));
  CHECK_FALSE(eval_word({}, coh));
}

TEST_CASE("pinning formula") {
  Alphabet alpha({'a', 'b'}, 1);
  for (const char* text : {"[a.]; [.a]", "[b.]; [.b]; [a.]", "[.a.]", "[]"}) {
    StepWord target = parse_word(text);
    MsowFormula pin{pinning_formula(target), alpha};
    for (const auto& w : all_words(alpha.letters(), 3)) CHECK(eval_word(w, pin) == (w == target));
  }
  MsowFormula empty{pinning_formula({}), alpha};
  CHECK(eval_word({}, empty));
  CHECK_FALSE(eval_word(parse_word("[a.]"), empty));
}

TEST_CASE("event identification on the example word") {
  Alphabet alpha({'a', 'c', 'd'}, 2);
  StepWord w = parse_word(kPinnedLong);
  auto sim = [&](int p, int i, int q, int j) {
    return Evaluator(sim_formula(alpha, "x", i, "y", j))(w, {{{"x", p - 1}, {"y", q - 1}}, {}});
  };
  CHECK(sim(1, 1, 4, 1));
  CHECK(sim(1, 2, 2, 2));
  CHECK(sim(3, 2, 7, 1));
  CHECK(sim(5, 1, 6, 1));
  CHECK_FALSE(sim(1, 1, 5, 1));
  // Oracle: event tracking of the gluing.
  GluedWord g = glue_word_tracked(w);
  for (int p = 0; p < 7; ++p)
    for (int i = 1; i <= 2; ++i)
      for (int q = 0; q < 7; ++q)
        for (int j = 1; j <= 2; ++j) {
          bool defined = i <= w[p].size() && j <= w[q].size();
          bool same = defined && g.events[p][i - 1] == g.events[q][j - 1];
          if (!defined && p == q && i == j) same = true;
          CHECK(sim(p + 1, i, q + 1, j) == same);
        }
  for (int p = 0; p < 7; ++p)
    for (int i = 1; i <= 2; ++i)
      CHECK(Evaluator(dom_formula(alpha, "x", i))(w, {{{"x", p}}, {}}) == (w[p].size() >= i));
}

TEST_CASE("endpoint comparisons") {
  Ipomset p = example_ipomset();
  auto holds = [&](Endpoint f, int x, Endpoint g, int y) {
    return eval_ipomset(p, endpoint_less(f, "x", g, "y"), {{{"x", x - 1}, {"y", y - 1}}, {}});
  };
  CHECK(holds(Endpoint::st, 3, Endpoint::st, 1));
  CHECK_FALSE(holds(Endpoint::st, 1, Endpoint::st, 3));
  CHECK_FALSE(holds(Endpoint::en, 2, Endpoint::en, 4));
  CHECK(holds(Endpoint::en, 3, Endpoint::en, 4));
  for (int e = 1; e <= 4; ++e) CHECK(holds(Endpoint::st, 1, Endpoint::en, e));

  // Oracle: start and end steps of the sparse decomposition.
  int checked = 0;
  for (const auto& q : small_ipomsets(4)) {
    if (!is_interval(q)) continue;
    EndpointMap em = endpoints(sparse_decompose(q));
    const Ipomset& r = em.glued.ipomset;
    auto value = [&](Endpoint f, int x) { return f == Endpoint::st ? em.start[x] : em.end[x]; };
    for (Endpoint f : {Endpoint::st, Endpoint::en})
      for (Endpoint g : {Endpoint::st, Endpoint::en}) {
        Evaluator eval(endpoint_less(f, "x", g, "y"));
        for (int x = 0; x < r.size(); ++x)
          for (int y = 0; y < r.size(); ++y) {
            CHECK(eval(r, {{{"x", x}, {"y", y}}, {}}) == (value(f, x) < value(g, y)));
            ++checked;
          }
      }
  }
  CHECK(checked > 1000);
}

TEST_CASE("step formulas") {
  Alphabet alpha({'a', 'b'}, 2);
  struct Letter {
    Step d;
    Evaluator st, en;
  };
  std::vector<Letter> evals;
  for (const Step& d : alpha.letters())
    evals.push_back({d, Evaluator(step_formula(d, Endpoint::st, "x")), Evaluator(step_formula(d, Endpoint::en, "x"))});
  int checked = 0;
  for (const auto& q : small_ipomsets(3)) {
    if (!is_interval(q) || width(q) > 2 || q.is_identity()) continue;
    StepWord w = sparse_decompose(q);
    EndpointMap em = endpoints(w);
    const Ipomset& r = em.glued.ipomset;
    for (int x = 0; x < r.size(); ++x)
      for (auto& ev : evals) {
        bool st = em.start[x] != kMinusInf && w[em.start[x] - 1] == ev.d;
        bool en = em.end[x] != kPlusInf && w[em.end[x] - 1] == ev.d;
        CHECK(ev.st(r, {{{"x", x}}, {}}) == st);
        CHECK(ev.en(r, {{{"x", x}}, {}}) == en);
        checked += st + en;
      }
  }
  CHECK(checked > 100);
}

TEST_CASE("width guard and identities") {
  FormulaPtr guard = width_guard(2);
  for (const auto& q : small_ipomsets(3))
    CHECK(eval_ipomset(q, guard) == (!q.is_identity() && width(q) <= 2));
  for (const Conclist& u : {Conclist{}, Conclist{'a'}, Conclist{'a', 'b'}, Conclist{'b', 'a'}}) {
    FormulaPtr f = identity_formula(u);
    for (const auto& q : small_ipomsets(2)) CHECK(eval_ipomset(q, f) == (q == identity(u)));
  }
}

TEST_CASE("ipomset formulas translated to word formulas") {
  Alphabet alpha({'a', 'b'}, 2);
  std::vector<std::string> battery{kConcurrentAB,
                                   "exists x. a(x) & src(x)",
                                   "forall x. tgt(x) -> b(x)",
                                   "exists x. exists y. x => y & a(y)",
                                   "exists x. exists y. x <. y",
                                   "exists X. forall x. (x in X <-> a(x)) & exists y. y in X & !src(y)",
                                   "forall x. exists y. x = y & !(x < y)"};
  auto ipomsets = small_ipomsets(3);
  for (const auto& text : battery) {
    MsopFormula phi = parse_msop(text);
    MsowFormula hat = hat_translate(phi, alpha);
    CHECK(letters_within(hat.formula, alpha));
    auto names = bound_names(hat.formula);
    CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
    Evaluator eval(hat.formula);
    for (const auto& p : ipomsets) {
      if (!is_interval(p) || width(p) > 2) continue;
      StepWord w = sparse_decompose(p);
      INFO(text << " on " << to_string(w));
      CHECK(eval(w) == eval_ipomset(p, phi));
      // Another representative of the same ipomset.
      StepWord d = dense_refine(w);
      if (d != w && d.size() <= 6) CHECK(eval(d) == eval(w));
    }
  }
  // Words that are not coherent are rejected.
  MsowFormula hat = hat_translate(parse_msop("true"), alpha);
  CHECK_FALSE(eval_word(parse_word("[a.]; [.b]"), hat));
  CHECK(eval_word(parse_word("[]; [a.]; [.a]; []"), hat));
  CHECK(eval_word(parse_word("[]"), hat));
  CHECK_FALSE(eval_word(parse_word("[]"), hat_translate(parse_msop("exists x. true"), alpha)));
}

TEST_CASE("word formulas translated to ipomset formulas") {
  Alphabet alpha({'a', 'c', 'd'}, 2);
  MsowFormula pin{pinning_formula(parse_word(kPinned)), alpha};
  MsopFormula bar = bar_translate(pin);
  CHECK(is_msop(bar.formula));
  auto names = bound_names(bar.formula);
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
  Evaluator eval(bar.formula);
  CHECK(eval(example_ipomset()));
  int satisfied = 0;
  for (int n = 0; n <= 4; ++n)
    for (const auto& q : enumerate_ipomsets(n, {'a', 'c', 'd'}, true)) {
      bool sat = eval(q);
      satisfied += sat;
      if (sat) CHECK(isomorphic(q, example_ipomset()));
    }
  CHECK(satisfied == 1);
}

TEST_CASE("bar translation on sparse words") {
  Alphabet alpha({'a', 'b'}, 2);
  std::vector<std::string> battery{"exists x. [a.](x)",
                                   "forall x. forall y. x < y -> !([.a](x) & [.b](y))",
                                   "exists x. exists y. x <. y & [a., b.](x)",
                                   "exists X. forall x. x in X <-> exists y. y < x",
                                   "[.a.](x) | forall x. x = x",
                                   "exists x. [] (x)"};
  std::vector<StepWord> sparse;
  for (const auto& p : small_ipomsets(2))
    if (is_interval(p) && width(p) <= 2) sparse.push_back(sparse_decompose(p));
  for (const auto& text : battery) {
    FormulaPtr f = parse_formula(text);
    if (!free_variables(f).empty()) f = mso::forall("x", f);
    MsowFormula phi{f, alpha};
    MsopFormula bar = bar_translate(phi);
    Evaluator eval(bar.formula);
    for (const auto& w : sparse) {
      INFO(text << " on " << to_string(w));
      CHECK(eval(glue_word(w)) == eval_word(w, phi));
    }
  }
}
