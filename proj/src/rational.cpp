#include "ipoms/rational.hpp"

#include <cctype>

#include "ipoms/error.hpp"
#include "ipoms/stepseq.hpp"

namespace ipoms {
namespace {

RationalPtr node(RationalExpr::Kind kind, std::vector<RationalPtr> kids = {}) {
  auto e = std::make_shared<RationalExpr>();
  e->kind = kind;
  e->kids = std::move(kids);
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  RationalPtr parse() {
    RationalPtr e = alt();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw Error(Errc::parse_error, "rational expression at " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RationalPtr alt() {
    std::vector<RationalPtr> kids{seq()};
    while (eat('|')) kids.push_back(seq());
    return kids.size() == 1 ? kids[0] : node(RationalExpr::Kind::alt, std::move(kids));
  }

  RationalPtr seq() {
    std::vector<RationalPtr> kids{postfix()};
    while (eat('*')) kids.push_back(postfix());
    return kids.size() == 1 ? kids[0] : node(RationalExpr::Kind::glue, std::move(kids));
  }

  RationalPtr postfix() {
    RationalPtr e = atom();
    while (eat('+')) e = node(RationalExpr::Kind::plus, {e});
    return e;
  }

  RationalPtr atom() {
    skip();
    if (pos_ == text_.size()) fail("expression expected");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RationalPtr e = alt();
      if (!eat(')')) fail("')' expected");
      return e;
    }
    if (c == '0' || c == '1') {
      ++pos_;
      return node(c == '0' ? RationalExpr::Kind::empty : RationalExpr::Kind::unit);
    }
    auto lit = std::make_shared<RationalExpr>();
    lit->kind = RationalExpr::Kind::literal;
    if (c == '[') {
      std::size_t end = text_.find(']', pos_);
      if (end == std::string_view::npos) fail("']' expected");
      lit->literal = parse_step(text_.substr(pos_, end + 1 - pos_));
      pos_ = end + 1;
      return lit;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      ++pos_;
      lit->literal = Step{{c}, 0, 0};
      return lit;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

void print(const RationalPtr& e, int prec, std::string& out) {
  using K = RationalExpr::Kind;
  int mine = e->kind == K::alt ? 0 : e->kind == K::glue ? 1 : e->kind == K::plus ? 2 : 3;
  if (mine < prec) out += '(';
  switch (e->kind) {
    case K::empty: out += '0'; break;
    case K::unit: out += '1'; break;
    case K::literal:
      if (e->literal.size() == 1 && !e->literal.sources && !e->literal.targets)
        out += e->literal.labels[0];
      else
        out += to_string(e->literal);
      break;
    case K::alt:
    case K::glue:
      for (std::size_t i = 0; i < e->kids.size(); ++i) {
        if (i) out += e->kind == K::alt ? " | " : " * ";
        print(e->kids[i], mine + 1, out);
      }
      break;
    case K::plus:
      print(e->kids[0], 3, out);
      out += '+';
      break;
  }
  if (mine < prec) out += ')';
}

IpomsetSet close(const IpomsetSet& s) {
  IpomsetSet out;
  for (const Ipomset& p : s)
    if (!out.count(p)) out.merge(subsumption_closure(p));
  return out;
}

IpomsetSet glue_sets(const IpomsetSet& a, const IpomsetSet& b, int n) {
  IpomsetSet out;
  for (const Ipomset& p : a) {
    auto tp = target_conclist(p);
    for (const Ipomset& q : b) {
      if (tp != source_conclist(q)) continue;
      int size = p.size() + q.size() - static_cast<int>(tp.size());
      if (size <= n) out.insert(canonical_form(glue(p, q)));
    }
  }
  return close(out);
}

IpomsetSet eval(const RationalPtr& e, int n) {
  using K = RationalExpr::Kind;
  switch (e->kind) {
    case K::empty: return {};
    case K::unit: return {identity({})};
    case K::literal: {
      if (e->literal.size() > n) return {};
      return subsumption_closure(to_ipomset(e->literal));
    }
    case K::alt: {
      IpomsetSet out;
      for (const auto& k : e->kids) out.merge(eval(k, n));
      return out;
    }
    case K::glue: {
      IpomsetSet acc = eval(e->kids[0], n);
      for (std::size_t i = 1; i < e->kids.size(); ++i) acc = glue_sets(acc, eval(e->kids[i], n), n);
      return acc;
    }
    case K::plus: {
      IpomsetSet base = eval(e->kids[0], n);
      IpomsetSet acc = base;
      for (;;) {
        IpomsetSet more = glue_sets(acc, base, n);
        std::size_t before = acc.size();
        acc.merge(more);
        if (acc.size() == before) return acc;
      }
    }
  }
  return {};
}

}  // namespace

RationalPtr parse_rational(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const RationalPtr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

IpomsetSet subsumption_closure(const Ipomset& p) {
  // Dense words reachable by transpositions glue to exactly the subsumed
  // ipomsets.
  IpomsetSet out{canonical_form(p)};
  std::set<StepWord> seen;
  std::vector<StepWord> queue{dense_refine(sparse_decompose(p))};
  seen.insert(queue[0]);
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (int j = 0; j + 1 < static_cast<int>(queue[i].size()); ++j) {
      StepWord w = queue[i];
      if (!transpose(w, j) || !seen.insert(w).second) continue;
      out.insert(canonical_form(glue_word(w)));
      queue.push_back(std::move(w));
    }
  }
  return out;
}

IpomsetSet rational_eval(const RationalPtr& e, int n) {
  if (n < 0 || n > kMaxRationalEvents)
    throw Error(Errc::bound_exceeded,
                "event bound " + std::to_string(n) + " outside 0.." + std::to_string(kMaxRationalEvents));
  return eval(e, n);
}

}  // namespace ipoms
