#include <doctest.h>

#include <random>
#include <set>

#include "ipoms/automaton.hpp"

using namespace ipoms;

namespace {

Nfa random_nfa(std::mt19937& rng, int symbols, int states) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Nfa a(symbols);
  for (int q = 0; q < states; ++q) a.add_state(uniform(0, 2) == 0);
  a.initial = {uniform(0, states - 1)};
  int edges = uniform(states, 3 * states);
  for (int i = 0; i < edges; ++i)
    a.add_transition(uniform(0, states - 1), uniform(0, symbols - 1), uniform(0, states - 1));
  a.normalize();
  return a;
}

std::vector<Word> all_words(int symbols, int max_len) {
  std::vector<Word> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (static_cast<int>(out[i].size()) == max_len) continue;
    for (int s = 0; s < symbols; ++s) {
      Word w = out[i];
      w.push_back(s);
      out.push_back(w);
    }
  }
  return out;
}

// Membership by explicit run sets, independent of the library's accepts().
bool runs(const Nfa& a, const Word& w) {
  std::set<int> cur(a.initial.begin(), a.initial.end());
  for (int s : w) {
    std::set<int> next;
    for (int q : cur)
      for (auto [t, r] : a.delta[q])
        if (t == s) next.insert(r);
    cur = next;
  }
  for (int q : cur)
    if (a.final[q]) return true;
  return false;
}

}  // namespace

TEST_CASE("boolean operations agree with run sets") {
  std::mt19937 rng(5);
  auto words = all_words(2, 6);
  for (int round = 0; round < 60; ++round) {
    Nfa a = random_nfa(rng, 2, 1 + round % 6);
    Nfa b = random_nfa(rng, 2, 1 + round % 5);
    Dfa da = determinize(a), db = determinize(b);
    Dfa ma = minimize(da);
    CHECK(ma.states() <= da.states());
    CHECK(equivalent(da, ma));
    Dfa inter = intersect(da, db);
    Nfa ninter = intersect(a, b);
    Nfa uni = nfa_union(a, b);
    Dfa comp = complement(a);
    for (const Word& w : words) {
      bool in_a = runs(a, w), in_b = runs(b, w);
      CHECK(accepts(a, w) == in_a);
      CHECK(accepts(da, w) == in_a);
      CHECK(accepts(ma, w) == in_a);
      CHECK(accepts(inter, w) == (in_a && in_b));
      CHECK(accepts(ninter, w) == (in_a && in_b));
      CHECK(accepts(uni, w) == (in_a || in_b));
      CHECK(accepts(comp, w) == !in_a);
    }
    // De Morgan and double complement.
    CHECK(equivalent(complement(intersect(da, db)),
                     determinize(nfa_union(to_nfa(complement(da)), to_nfa(complement(db))))));
    CHECK(equivalent(complement(complement(da)), da));
    CHECK(is_empty(intersect(da, complement(da))));
  }
}

TEST_CASE("minimal automata are canonical") {
  std::mt19937 rng(9);
  for (int round = 0; round < 30; ++round) {
    Nfa a = random_nfa(rng, 2, 4);
    Dfa m1 = minimize(determinize(a));
    // The same language through a detour: union with itself.
    Dfa m2 = minimize(determinize(nfa_union(a, a)));
    CHECK(m1.states() == m2.states());
    CHECK(m1.table == m2.table);
    CHECK(m1.final == m2.final);
  }
}

TEST_CASE("shortest words and enumeration") {
  std::mt19937 rng(11);
  auto words = all_words(3, 5);
  for (int round = 0; round < 40; ++round) {
    Nfa a = random_nfa(rng, 3, 5);
    std::vector<Word> expected;
    for (const Word& w : words)
      if (runs(a, w)) expected.push_back(w);
    auto got = accepted_words(a, 5);
    std::set<Word> gs(got.begin(), got.end()), es(expected.begin(), expected.end());
    CHECK(gs == es);
    CHECK(got.size() == gs.size());
    for (std::size_t i = 1; i < got.size(); ++i) CHECK(got[i - 1].size() <= got[i].size());
    auto shortest = shortest_word(a);
    if (expected.empty()) {
      if (shortest) CHECK(shortest->size() > 5);
    } else {
      REQUIRE(shortest.has_value());
      CHECK(shortest->size() == expected.front().size());
      CHECK(runs(a, *shortest));
    }
    CHECK(is_empty(a) == !shortest.has_value());
  }
}

TEST_CASE("projection renames symbols") {
  Nfa a(3);
  for (int i = 0; i < 3; ++i) a.add_state(i == 2);
  a.initial = {0};
  a.add_transition(0, 0, 1);
  a.add_transition(1, 2, 2);
  Nfa p = project(a, {1, -1, 0}, 2);
  CHECK(accepts(p, Word{1, 0}));
  CHECK_FALSE(accepts(p, Word{0, 1}));
  CHECK(accepted_words(p, 4).size() == 1);
}

TEST_CASE("text format round-trips") {
  std::mt19937 rng(3);
  Nfa a = random_nfa(rng, 3, 5);
  std::vector<std::string> toks{"[a.]", "[.a]", "[.a., b.]"};
  std::string text = to_text(a, toks);
  std::vector<std::string> back;
  Nfa b = parse_nfa(text, &back);
  CHECK(back == toks);
  CHECK(to_text(b, back) == text);
  CHECK(equivalent(determinize(a), determinize(b)));
  CHECK_THROWS_AS(parse_nfa("alphabet 2"), Error);
  CHECK_THROWS_AS(parse_nfa("nfa\nalphabet 1\nstates 1\ntrans 0 1 0"), Error);
}

TEST_CASE("errors") {
  Nfa a(2), b(3);
  a.add_state(true);
  b.add_state(true);
  a.initial = b.initial = {0};
  try {
    intersect(a, b);
    FAIL("mismatched alphabets accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::alphabet_mismatch);
  }
  // Subset construction blow-up: (a|b)*a(a|b)^n needs 2^(n+1) states.
  Nfa big(2);
  int n = 12;
  for (int q = 0; q <= n + 1; ++q) big.add_state(q == n + 1);
  big.initial = {0};
  big.add_transition(0, 0, 0);
  big.add_transition(0, 1, 0);
  big.add_transition(0, 0, 1);
  for (int q = 1; q <= n; ++q) {
    big.add_transition(q, 0, q + 1);
    big.add_transition(q, 1, q + 1);
  }
  try {
    determinize(big, 1000);
    FAIL("capacity ignored");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::capacity);
  }
  CHECK(minimize(determinize(big)).states() == (1 << (n + 1)));
}

TEST_CASE("step alphabets encode words") {
  Alphabet alpha({'a', 'b'}, 2);
  StepWord w = parse_word("[a.]; [.a., b.]; [.a, .b]");
  Word code = encode(alpha, w);
  CHECK(decode(alpha, code) == w);
  CHECK(tokens(alpha).size() == 35);
  try {
    encode(alpha, parse_word("[c]"));
    FAIL("foreign letter encoded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::alphabet_mismatch);
  }
}
