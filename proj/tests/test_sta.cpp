#include <doctest.h>

#include <set>

#include "ipoms/io.hpp"
#include "ipoms/sta.hpp"
#include "support.hpp"

using namespace ipoms;
using namespace testing_support;

namespace {

Hda fixture(const std::string& name) { return parse_hda(read_file(IPOMS_FIXTURES "/" + name)); }

bool has_edge(const StAutomaton& a, const std::string& from, const std::string& letter,
              const std::string& to) {
  for (const auto& e : a.edges())
    if (a.name(e.from) == from && to_string(e.letter) == letter && a.name(e.to) == to) return true;
  return false;
}

std::set<StepWord> nfa_words(const Nfa& n, const Alphabet& alpha, int max_len) {
  std::set<StepWord> out;
  for (const Word& w : accepted_words(n, max_len)) out.insert(decode(alpha, w));
  return out;
}

}  // namespace

TEST_CASE("ST-automaton of the two-square fixture") {
  StAutomaton a = from_hda(fixture("two_squares.json"));
  CHECK(a.size() == 15);
  CHECK(a.width() == 2);
  CHECK(a.sigma() == std::vector<Label>{'a', 'b', 'c'});
  CHECK(has_edge(a, "ac", "[b.]", "bc"));
  CHECK(has_edge(a, "bc", "[.b]", "cc"));
  CHECK(has_edge(a, "ac", "[b., a.]", "bd"));
  CHECK(has_edge(a, "bd", "[.b, .a.]", "cd"));
  CHECK(has_edge(a, "bd", "[.b., .a.]", "bd"));
  for (const auto& e : a.edges()) {
    CHECK(e.letter.source_conclist() == a.label(e.from));
    CHECK(e.letter.target_conclist() == a.label(e.to));
  }
  // Identity loops: one per cell.
  int loops = 0;
  for (const auto& e : a.edges()) loops += e.letter.is_identity();
  CHECK(loops == 15);
  CHECK_FALSE(is_empty(a));

  Alphabet alpha({'a', 'b', 'c'}, 2);
  auto words = nfa_words(sparse_nfa(a, alpha), alpha, 6);
  REQUIRE(words.size() == 1);
  CHECK(to_string(*words.begin()) == "[b.]; [.b]; [c.]; [.c]");
  CHECK(member(a, chain("bc")));
  CHECK_FALSE(member(a, par("bc")));
  CHECK_FALSE(member(a, chain("b")));
  CHECK_THROWS_AS(member(a, par("abc")), Error);
}

TEST_CASE("ST-automaton of the cube fixture") {
  Hda h = fixture("squares.json");
  StAutomaton a = from_hda(h);
  CHECK(a.size() == 21);
  CHECK(has_edge(a, "t3", "[a., .c.]", "q1"));
  CHECK(has_edge(a, "q3", "[.a, .d]", "v8"));
  Ipomset cube = mk("aacd", "1<2 3<4 3<2", "1>3 1>4 2>4", "3", "");
  CHECK(member(a, cube, 2));
  Alphabet alpha({'a', 'c', 'd'}, 2);
  CHECK(accepts(sparse_nfa(a, alpha), encode(alpha, sparse_decompose(cube))));
  CHECK_THROWS_AS(sparse_nfa(a, Alphabet({'a', 'c', 'd'}, 1)), Error);
}

TEST_CASE("path labels") {
  StAutomaton a = from_hda(fixture("two_squares.json"));
  auto edge = [&](const std::string& from, const std::string& letter) {
    for (std::size_t i = 0; i < a.edges().size(); ++i) {
      const auto& e = a.edges()[i];
      if (a.name(e.from) == from && to_string(e.letter) == letter) return static_cast<int>(i);
    }
    FAIL("missing edge");
    return -1;
  };
  int ac = 0;
  while (a.name(ac) != "ac") ++ac;
  CHECK(path_label(a, {ac, {}}).sparse == parse_word("[]"));
  StPath bc{ac, {edge("ac", "[b.]"), edge("bc", "[.b]"), edge("cc", "[c.]"), edge("dc", "[.c]")}};
  CHECK(to_string(path_label(a, bc).sparse) == "[b.]; [.b]; [c.]; [.c]");
  StPath looped{ac, {edge("ac", "[b.]"), edge("bc", "[.b.]"), edge("bc", "[.b]"), edge("cc", "[c.]"),
                     edge("dc", "[.c]")}};
  CHECK(path_label(a, looped) == path_label(a, bc));
  CHECK_THROWS_AS(path_label(a, {ac, {edge("cc", "[c.]")}}), Error);
}

TEST_CASE("identity words and edge validation") {
  StAutomaton single({"q"}, {{}}, {}, {0}, {0});
  Alphabet alpha({'a'}, 1);
  auto words = nfa_words(sparse_nfa(single, alpha), alpha, 3);
  REQUIRE(words.size() == 1);
  CHECK(to_string(*words.begin()) == "[]");
  CHECK(member(single, identity({})));
  CHECK(nfa_words(sparse_nfa(single, alpha, false), alpha, 3).empty());

  StAutomaton held({"q"}, {{'a'}}, {}, {0}, {0});
  CHECK(member(held, identity({'a'})));
  CHECK_FALSE(member(held, chain("a")));

  try {
    StAutomaton({"p", "q"}, {{}, {'a'}}, {{0, parse_step("[b.]"), 1}}, {0}, {1});
    FAIL("mislabelled edge accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::interface_mismatch);
  }
  StAutomaton none({"p", "q"}, {{}, {'a'}}, {{0, parse_step("[a.]"), 1}}, {0}, {});
  CHECK(is_empty(none));
}

TEST_CASE("sparse NFA matches path enumeration on random HDAs") {
  std::mt19937 rng(23);
  Alphabet alpha({'a', 'b'}, 2);
  int nonempty = 0;
  for (int round = 0; round < 25; ++round) {
    Hda h = random_hda(rng, {'a', 'b'});
    std::set<StepWord> expected;
    for (const auto& p : language_enum(h, 6)) expected.insert(sparse_decompose(p));
    auto got = nfa_words(sparse_nfa(from_hda(h), alpha), alpha, 6);
    CHECK(got == expected);
    for (const auto& w : got) {
      CHECK(is_coherent(w));
      if (w.size() > 1) CHECK(is_sparse(w));
    }
    nonempty += !expected.empty();
  }
  CHECK(nonempty >= 10);
}
