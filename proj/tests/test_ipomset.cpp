#include <doctest.h>

#include <map>
#include <set>

#include "support.hpp"

using namespace ipoms;
using namespace testing_support;

namespace {

// The four-event ipomset with a source c used throughout the figures.
Ipomset steps_ipomset() { return mk("abca", "1<2 3<2 3<4", "1>3 1>4 2>4", "3", ""); }

// All interval ipomsets with n events by trying every relation assignment,
// deduplicated with brute-force isomorphism.
std::vector<Ipomset> brute_enumerate(int n, const std::vector<Label>& sigma, bool interfaces) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<Ipomset> out;
  std::size_t total = 1;
  for (std::size_t k = 0; k < pairs.size(); ++k) total *= 4;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<EventSet> prec(n, 0), evord(n, 0);
    std::size_t c = code;
    for (auto [i, j] : pairs) {
      switch (c % 4) {
        case 0: prec[i] |= bit(j); break;
        case 1: prec[j] |= bit(i); break;
        case 2: evord[i] |= bit(j); break;
        default: evord[j] |= bit(i); break;
      }
      c /= 4;
    }
    Ipomset skeleton(std::vector<Label>(n, sigma[0]), prec, evord, 0, 0);
    if (!check(skeleton, true).empty()) continue;
    std::size_t labelings = 1;
    for (int i = 0; i < n; ++i) labelings *= sigma.size();
    for (std::size_t lc = 0; lc < labelings; ++lc) {
      std::vector<Label> labels(n);
      std::size_t l = lc;
      for (int i = 0; i < n; ++i) {
        labels[i] = sigma[l % sigma.size()];
        l /= sigma.size();
      }
      for (EventSet s = 0; s < bit(n); ++s)
        for (EventSet t = 0; t < bit(n); ++t) {
          if (!interfaces && (s || t)) continue;
          Ipomset cand(labels, prec, evord, s, t);
          if (!check(cand, true).empty()) continue;
          bool seen = false;
          for (const auto& q : out)
            if (brute_isomorphic(q, cand)) {
              seen = true;
              break;
            }
          if (!seen) out.push_back(cand);
        }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("validation accepts the four-event figure ipomset") {
  Ipomset p = steps_ipomset();
  CHECK(p.size() == 4);
  CHECK(check(p).empty());
}

TEST_CASE("validation reports every violated invariant") {
  SUBCASE("precedence and event order on the same pair") {
    IpomsetData d{{'a', 'b'}, {{0, 1}}, {{0, 1}}, {}, {}};
    CHECK_THROWS_AS(validate(d), Error);
    try {
      validate(d);
    } catch (const Error& e) {
      CHECK(e.has(Errc::exactly_one_violation));
    }
  }
  SUBCASE("unrelated pair") {
    IpomsetData d{{'a', 'b'}, {}, {}, {}, {}};
    try {
      validate(d);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::exactly_one_violation);
    }
  }
  SUBCASE("source and target placement") {
    IpomsetData d{{'a', 'b'}, {{0, 1}}, {}, {1}, {0}};
    try {
      validate(d);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.has(Errc::non_minimal_source));
      CHECK(e.has(Errc::non_maximal_target));
    }
  }
  SUBCASE("event order cycle") {
    IpomsetData d{{'a', 'a', 'a'}, {}, {{0, 1}, {1, 2}, {2, 0}}, {}, {}};
    try {
      validate(d);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.has(Errc::evord_cycle));
    }
  }
  SUBCASE("2+2 is rejected only when interval is required") {
    IpomsetData d{{'a', 'b', 'c', 'd'}, {{0, 1}, {2, 3}}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}, {}, {}};
    CHECK_NOTHROW(validate(d, false));
    try {
      validate(d, true);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::not_interval);
    }
  }
  SUBCASE("single event") {
    IpomsetData d{{'e'}, {}, {}, {}, {}};
    CHECK_NOTHROW(validate(d));
  }
}

TEST_CASE("canonical order peels the least minimal event") {
  CHECK(canonical_order(steps_ipomset()) == std::vector<EventId>{0, 2, 1, 3});
  CHECK(canonical_order(par("ac")) == std::vector<EventId>{0, 1});
  CHECK(canonical_order(Ipomset()).empty());
}

TEST_CASE("isomorphism via canonical forms") {
  Ipomset p = steps_ipomset();
  // Same ipomset with events listed in reverse.
  Ipomset q = mk("acba", "4<3 2<3 2<1", "4>2 4>1 3>1", "2", "");
  auto iso = isomorphism(p, q);
  REQUIRE(iso);
  CHECK(*iso == std::vector<EventId>{3, 2, 1, 0});
  CHECK(isomorphic(mk("aa", "", "1>2", "", ""), mk("aa", "", "2>1", "", "")));
  CHECK_FALSE(isomorphic(chain("ab"), chain("ba")));
}

TEST_CASE("canonical order is invariant under renumbering") {
  auto all = enumerate_ipomsets_upto(4, {'a', 'b'}, true);
  std::mt19937 rng(7);
  for (const auto& p : all) {
    std::vector<EventId> perm(p.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Label> labels(p.size());
    std::vector<EventSet> prec(p.size(), 0), evord(p.size(), 0);
    EventSet s = 0, t = 0;
    for (int x = 0; x < p.size(); ++x) {
      labels[perm[x]] = p.label(x);
      for (int y = 0; y < p.size(); ++y) {
        if (p.less(x, y)) prec[perm[x]] |= bit(perm[y]);
        if (p.evord(x, y)) evord[perm[x]] |= bit(perm[y]);
      }
      if (p.is_source(x)) s |= bit(perm[x]);
      if (p.is_target(x)) t |= bit(perm[x]);
    }
    Ipomset q(labels, prec, evord, s, t);
    REQUIRE(canonical_form(q) == canonical_form(p));
    auto iso = isomorphism(p, q);
    REQUIRE(iso);
    CHECK(*iso == perm);
  }
}

TEST_CASE("gluing reproduces the composition figure") {
  Ipomset left = mk("abc", "2<3", "3>1 1>2", "", "3");
  Ipomset right = mk("dc", "", "1>2", "2", "");
  Ipomset expected = mk("abcd", "1<4 2<4 2<3", "4>3 3>1 1>2", "", "");
  Ipomset r = glue(left, right);
  CHECK(check(r).empty());
  CHECK(isomorphic(r, expected));
  CHECK(brute_isomorphic(r, expected));
}

TEST_CASE("gluing is not cancellative") {
  Ipomset start = mk("a", "", "", "", "1");
  Ipomset r1 = glue(start, mk("aa", "", "1>2", "1", ""));
  Ipomset r2 = glue(start, mk("aa", "", "2>1", "1", ""));
  CHECK(isomorphic(r1, par("aa")));
  CHECK(isomorphic(r2, par("aa")));
}

TEST_CASE("gluing checks interfaces") {
  CHECK_THROWS_AS(glue(mk("a", "", "", "", "1"), mk("b", "", "", "1", "")), Error);
  Ipomset p = steps_ipomset();
  CHECK(isomorphic(glue(identity(source_conclist(p)), p), p));
  CHECK(isomorphic(glue(p, identity(target_conclist(p))), p));
}

TEST_CASE("gluing is associative with identities neutral") {
  auto small = enumerate_ipomsets_upto(2, {'a', 'b'}, true);
  int triples = 0;
  for (const auto& p : small)
    for (const auto& q : small) {
      if (target_conclist(p) != source_conclist(q)) continue;
      Ipomset pq = glue(p, q);
      CHECK(check(pq).empty());
      CHECK(isomorphic(glue(identity(source_conclist(p)), p), p));
      for (const auto& r : small) {
        if (target_conclist(q) != source_conclist(r)) continue;
        ++triples;
        CHECK(isomorphic(glue(pq, r), glue(p, glue(q, r))));
      }
    }
  CHECK(triples > 100);
}

TEST_CASE("subsumption examples") {
  Ipomset left = mk("acb", "1<2 1<3 2<3", "", "1", "");
  Ipomset middle = mk("acb", "1<3 2<3", "1>2", "1", "");
  Ipomset right = mk("abc", "1<2", "1>3 2>3", "1", "");
  CHECK(subsumes(left, middle));
  CHECK(subsumes(middle, right));
  CHECK(subsumes(left, right));
  CHECK_FALSE(subsumes(middle, left));
  CHECK_FALSE(subsumes(right, middle));

  CHECK(subsumes(chain("ab"), par("ab")));
  CHECK(subsumes(chain("ab"), par("ba")));
  CHECK(subsumptions(chain("aa"), par("aa")).size() == 2);
  CHECK(subsumptions(par("aa"), par("aa")).size() == 1);
}

TEST_CASE("subsumption is a partial order up to isomorphism on small ipomsets") {
  auto all = enumerate_ipomsets_upto(3, {'a', 'b'}, true);
  std::map<std::tuple<int, EventSet, EventSet, std::vector<Label>>, std::vector<const Ipomset*>>
      groups;
  for (const auto& p : all) {
    auto labels = p.labels();
    std::sort(labels.begin(), labels.end());
    groups[{p.size(), popcount(p.sources()), popcount(p.targets()), labels}].push_back(&p);
  }
  for (auto& [key, members] : groups)
    for (auto* p : members) {
      CHECK(subsumes(*p, *p));
      for (auto* q : members) {
        if (p != q && subsumes(*p, *q)) CHECK_FALSE(subsumes(*q, *p));
        if (!subsumes(*p, *q)) continue;
        for (auto* r : members)
          if (subsumes(*q, *r)) CHECK(subsumes(*p, *r));
      }
    }
}

TEST_CASE("gluing is monotone for subsumption") {
  auto all = enumerate_ipomsets_upto(2, {'a'}, true);
  for (const auto& p : all)
    for (const auto& q : all) {
      if (!subsumes(p, q)) continue;
      for (const auto& p2 : all)
        for (const auto& q2 : all) {
          if (!subsumes(p2, q2)) continue;
          if (target_conclist(p) != source_conclist(p2)) continue;
          if (target_conclist(q) != source_conclist(q2)) continue;
          CHECK(subsumes(glue(p, p2), glue(q, q2)));
        }
    }
}

TEST_CASE("width and interval checks") {
  CHECK(width(chain("abc")) == 1);
  CHECK(width(par("abc")) == 3);
  CHECK(width(steps_ipomset()) == 2);
  CHECK(width(Ipomset()) == 0);
  CHECK(is_interval(steps_ipomset()));
  CHECK(is_interval(par("abc")));
  IpomsetData d{{'a', 'b', 'c', 'd'}, {{0, 1}, {2, 3}}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}, {}, {}};
  CHECK_FALSE(is_interval(validate(d, false)));
}

TEST_CASE("width equals the largest antichain") {
  for (const auto& p : enumerate_ipomsets_upto(5, {'a'}, true)) CHECK(width(p) == brute_width(p));
}

TEST_CASE("transitive event order conversions are inverse") {
  Ipomset p = steps_ipomset();
  TransitiveIpomset t = to_transitive(p);
  // x1 ⇛ x3 and x1 ⇛ x4 are already stored; closure adds nothing through x2 ⇛ x4.
  CHECK(has(t.evord[0], 2));
  CHECK(from_transitive(t) == p);
  for (const auto& q : enumerate_ipomsets_upto(4, {'a', 'b'}, true)) {
    auto tq = to_transitive(q);
    CHECK(from_transitive(tq) == q);
    CHECK(to_transitive(from_transitive(tq)) == tq);
  }
  // Chain with event order between comparable events: G drops it.
  TransitiveIpomset c{{'a', 'b'}, {bit(1), 0}, {bit(1), 0}, 0, 0};
  CHECK(from_transitive(c).evord_row(0) == 0);
}

TEST_CASE("enumeration counts") {
  CHECK(enumerate_ipomsets(1, {'a'}, true).size() == 4);
  CHECK(enumerate_ipomsets(0, {'a'}, true).size() == 1);
  CHECK(enumerate_ipomsets(2, {'a'}, false).size() == 2);
  CHECK_THROWS_AS(enumerate_ipomsets(6, {'a'}, false), Error);
}

TEST_CASE("enumeration matches a brute-force relation search") {
  for (int n = 0; n <= 3; ++n) {
    auto fast = enumerate_ipomsets(n, {'a', 'b'}, true);
    auto slow = brute_enumerate(n, {'a', 'b'}, true);
    CHECK(fast.size() == slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) {
      CHECK(check(fast[i]).empty());
      for (std::size_t j = i + 1; j < fast.size(); ++j) CHECK_FALSE(isomorphic(fast[i], fast[j]));
    }
  }
  CHECK(enumerate_ipomsets(4, {'a'}, false).size() == brute_enumerate(4, {'a'}, false).size());
}
