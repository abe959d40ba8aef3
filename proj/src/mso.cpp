#include "ipoms/mso.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace ipoms {

bool is_first_order(std::string_view var) {
  return !var.empty() && std::islower(static_cast<unsigned char>(var[0]));
}

namespace mso {

namespace {

FormulaPtr make(Op op, std::string x = {}, std::string y = {}, std::vector<FormulaPtr> kids = {}) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->x = std::move(x);
  f->y = std::move(y);
  f->kids = std::move(kids);
  return f;
}

FormulaPtr flat(Op op, std::vector<FormulaPtr> fs, Op unit) {
  if (fs.empty()) return make(unit);
  if (fs.size() == 1) return fs.front();
  return make(op, {}, {}, std::move(fs));
}

}  // namespace

FormulaPtr truth() { return make(Op::truth); }
FormulaPtr falsity() { return make(Op::falsity); }

FormulaPtr label(Label a, const std::string& x) {
  auto f = std::make_shared<Formula>();
  f->op = Op::label;
  f->label = a;
  f->x = x;
  return f;
}

FormulaPtr src(const std::string& x) { return make(Op::src, x); }
FormulaPtr tgt(const std::string& x) { return make(Op::tgt, x); }
FormulaPtr less(const std::string& x, const std::string& y) { return make(Op::less, x, y); }
FormulaPtr evord(const std::string& x, const std::string& y) { return make(Op::evord, x, y); }
FormulaPtr eq(const std::string& x, const std::string& y) { return make(Op::eq, x, y); }
FormulaPtr succ(const std::string& x, const std::string& y) { return make(Op::succ, x, y); }
FormulaPtr in(const std::string& x, const std::string& set) { return make(Op::in, x, set); }

FormulaPtr letter(const Step& d, const std::string& x) {
  auto f = std::make_shared<Formula>();
  f->op = Op::letter;
  f->letter = d;
  f->x = x;
  return f;
}

FormulaPtr neg(FormulaPtr f) { return make(Op::neg, {}, {}, {std::move(f)}); }
FormulaPtr conj(std::vector<FormulaPtr> fs) { return flat(Op::conj, std::move(fs), Op::truth); }
FormulaPtr disj(std::vector<FormulaPtr> fs) { return flat(Op::disj, std::move(fs), Op::falsity); }
FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
  return make(Op::implies, {}, {}, {std::move(a), std::move(b)});
}
FormulaPtr iff(FormulaPtr a, FormulaPtr b) {
  return make(Op::iff, {}, {}, {std::move(a), std::move(b)});
}

FormulaPtr exists(const std::string& v, FormulaPtr body) {
  return make(is_first_order(v) ? Op::exists : Op::exists_set, v, {}, {std::move(body)});
}

FormulaPtr forall(const std::string& v, FormulaPtr body) {
  return make(is_first_order(v) ? Op::forall : Op::forall_set, v, {}, {std::move(body)});
}

FormulaPtr exists(const std::vector<std::string>& vs, FormulaPtr body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = exists(*it, std::move(body));
  return body;
}

FormulaPtr forall(const std::vector<std::string>& vs, FormulaPtr body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = forall(*it, std::move(body));
  return body;
}

}  // namespace mso

// ---------------------------------------------------------------- printing

namespace {

bool is_quantifier(Op op) {
  return op == Op::exists || op == Op::forall || op == Op::exists_set || op == Op::forall_set;
}

int level(Op op) {
  switch (op) {
    case Op::iff: return 1;
    case Op::implies: return 2;
    case Op::disj: return 3;
    case Op::conj: return 4;
    default: return 5;
  }
}

void print(const FormulaPtr& f, std::string& out);

// Prints a child, parenthesized unless its operator binds tighter than min.
void print_child(const FormulaPtr& f, int min, std::string& out) {
  bool paren = is_quantifier(f->op) || level(f->op) < min;
  if (paren) out += '(';
  print(f, out);
  if (paren) out += ')';
}

void print(const FormulaPtr& f, std::string& out) {
  switch (f->op) {
    case Op::truth: out += "true"; return;
    case Op::falsity: out += "false"; return;
    case Op::label: out += std::string(1, f->label) + "(" + f->x + ")"; return;
    case Op::src: out += "src(" + f->x + ")"; return;
    case Op::tgt: out += "tgt(" + f->x + ")"; return;
    case Op::less: out += f->x + " < " + f->y; return;
    case Op::evord: out += f->x + " => " + f->y; return;
    case Op::eq: out += f->x + " = " + f->y; return;
    case Op::succ: out += f->x + " <. " + f->y; return;
    case Op::in: out += f->x + " in " + f->y; return;
    case Op::letter: out += to_string(f->letter) + "(" + f->x + ")"; return;
    case Op::neg:
      out += '!';
      print_child(f->kids[0], 5, out);
      return;
    case Op::conj:
    case Op::disj:
      if (f->kids.empty()) {
        out += f->op == Op::conj ? "true" : "false";
        return;
      }
      for (std::size_t i = 0; i < f->kids.size(); ++i) {
        if (i > 0) out += f->op == Op::conj ? " & " : " | ";
        print_child(f->kids[i], level(f->op) + 1, out);
      }
      return;
    case Op::implies:
      print_child(f->kids[0], 3, out);
      out += " -> ";
      print_child(f->kids[1], 2, out);
      return;
    case Op::iff:
      print_child(f->kids[0], 1, out);
      out += " <-> ";
      print_child(f->kids[1], 2, out);
      return;
    case Op::exists:
    case Op::exists_set:
    case Op::forall:
    case Op::forall_set:
      out += (f->op == Op::exists || f->op == Op::exists_set) ? "exists " : "forall ";
      out += f->x + ". ";
      print(f->kids[0], out);
      return;
  }
}

}  // namespace

std::string to_string(const FormulaPtr& f) {
  std::string out;
  print(f, out);
  return out;
}

// ----------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  FormulaPtr parse() {
    FormulaPtr f = formula();
    skip();
    if (pos_ != text_.size()) fail("unexpected \"" + std::string(text_.substr(pos_, 10)) + "\"");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::parse_error, "formula at " + std::to_string(pos_) + ": " + msg);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view tok) {
    skip();
    return text_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected \"" + std::string(tok) + "\"");
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  // Keyword followed by a non-identifier character.
  bool keyword(std::string_view kw) {
    skip();
    if (text_.substr(pos_, kw.size()) != kw) return false;
    std::size_t end = pos_ + kw.size();
    if (end < text_.size() && ident_char(text_[end])) return false;
    pos_ = end;
    return true;
  }

  std::string variable() {
    std::string v = ident();
    static const std::set<std::string> reserved{"exists", "forall", "in", "true", "false", "src", "tgt"};
    if (reserved.count(v)) fail("reserved word \"" + v + "\" used as variable");
    return v;
  }

  FormulaPtr formula() {
    FormulaPtr f = implication();
    while (accept("<->")) f = mso::iff(f, implication());
    return f;
  }

  FormulaPtr implication() {
    FormulaPtr f = disjunction();
    if (accept("->")) return mso::implies(f, implication());
    return f;
  }

  FormulaPtr disjunction() {
    std::vector<FormulaPtr> fs{conjunction()};
    while (accept("|")) fs.push_back(conjunction());
    return mso::disj(std::move(fs));
  }

  FormulaPtr conjunction() {
    std::vector<FormulaPtr> fs{unary()};
    while (accept("&")) fs.push_back(unary());
    return mso::conj(std::move(fs));
  }

  FormulaPtr unary() {
    if (accept("!")) return mso::neg(unary());
    if (accept("(")) {
      FormulaPtr f = formula();
      expect(")");
      return f;
    }
    for (bool ex : {true, false}) {
      if (keyword(ex ? "exists" : "forall")) {
        std::vector<std::string> vars{variable()};
        while (accept(",")) vars.push_back(variable());
        expect(".");
        FormulaPtr body = formula();
        return ex ? mso::exists(vars, body) : mso::forall(vars, body);
      }
    }
    return atom();
  }

  std::string argument() {
    expect("(");
    std::string v = variable();
    expect(")");
    return v;
  }

  FormulaPtr atom() {
    if (keyword("true")) return mso::truth();
    if (keyword("false")) return mso::falsity();
    skip();
    if (peek("[")) {
      std::size_t end = text_.find(']', pos_);
      if (end == std::string_view::npos) fail("unterminated letter");
      Step d = parse_step(text_.substr(pos_, end + 1 - pos_));
      pos_ = end + 1;
      return mso::letter(d, argument());
    }
    if (keyword("src")) return mso::src(argument());
    if (keyword("tgt")) return mso::tgt(argument());
    std::string name = ident();
    if (peek("(")) {
      if (name.size() != 1 || !is_label(name[0])) fail("unknown predicate \"" + name + "\"");
      return mso::label(name[0], argument());
    }
    static const std::set<std::string> reserved{"exists", "forall", "in", "true", "false"};
    if (reserved.count(name)) fail("unexpected \"" + name + "\"");
    if (keyword("in")) return mso::in(name, variable());
    if (accept("=>")) return mso::evord(name, variable());
    if (accept("<.")) return mso::succ(name, variable());
    if (peek("<->")) fail("expected a relation after \"" + name + "\"");
    if (accept("<")) return mso::less(name, variable());
    if (accept("=")) return mso::eq(name, variable());
    fail("expected a relation after \"" + name + "\"");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text).parse(); }

// ------------------------------------------------------------------ queries

namespace {

void walk(const FormulaPtr& f, const std::function<void(const Formula&)>& visit) {
  visit(*f);
  for (const auto& k : f->kids) walk(k, visit);
}

bool binary_atom(Op op) {
  return op == Op::less || op == Op::evord || op == Op::eq || op == Op::succ || op == Op::in;
}

bool unary_atom(Op op) {
  return op == Op::label || op == Op::src || op == Op::tgt || op == Op::letter;
}

void collect_free(const FormulaPtr& f, std::vector<std::string>& bound, std::set<std::string>& seen,
                  std::vector<std::string>& out) {
  auto use = [&](const std::string& v) {
    if (std::find(bound.begin(), bound.end(), v) == bound.end() && seen.insert(v).second)
      out.push_back(v);
  };
  if (unary_atom(f->op)) use(f->x);
  if (binary_atom(f->op)) {
    use(f->x);
    use(f->y);
  }
  if (is_quantifier(f->op)) {
    bound.push_back(f->x);
    collect_free(f->kids[0], bound, seen, out);
    bound.pop_back();
    return;
  }
  for (const auto& k : f->kids) collect_free(k, bound, seen, out);
}

}  // namespace

std::vector<std::string> free_variables(const FormulaPtr& f) {
  std::vector<std::string> bound, out;
  std::set<std::string> seen;
  collect_free(f, bound, seen, out);
  return out;
}

std::vector<std::string> variables(const FormulaPtr& f) {
  std::set<std::string> out;
  walk(f, [&](const Formula& g) {
    if (!g.x.empty()) out.insert(g.x);
    if (!g.y.empty()) out.insert(g.y);
  });
  return {out.begin(), out.end()};
}

std::vector<Label> labels(const FormulaPtr& f) {
  std::set<Label> out;
  walk(f, [&](const Formula& g) {
    if (g.op == Op::label) out.insert(g.label);
    if (g.op == Op::letter) out.insert(g.letter.labels.begin(), g.letter.labels.end());
  });
  return {out.begin(), out.end()};
}

std::size_t node_count(const FormulaPtr& f) {
  std::size_t n = 0;
  walk(f, [&](const Formula&) { ++n; });
  return n;
}

namespace {

// Sort discipline: atoms take first-order arguments, except the set of "in".
bool well_sorted(const Formula& g) {
  if (unary_atom(g.op)) return is_first_order(g.x);
  if (g.op == Op::in) return is_first_order(g.x) && !is_first_order(g.y);
  if (binary_atom(g.op)) return is_first_order(g.x) && is_first_order(g.y);
  return true;
}

}  // namespace

bool is_msop(const FormulaPtr& f) {
  bool ok = true;
  walk(f, [&](const Formula& g) { ok = ok && g.op != Op::letter && well_sorted(g); });
  return ok;
}

bool is_msow(const FormulaPtr& f, const Alphabet& alpha) {
  bool ok = true;
  walk(f, [&](const Formula& g) {
    ok = ok && well_sorted(g) && g.op != Op::label && g.op != Op::src && g.op != Op::tgt &&
         g.op != Op::evord && (g.op != Op::letter || alpha.index(g.letter).has_value());
  });
  return ok;
}

MsopFormula parse_msop(std::string_view text) {
  FormulaPtr f = parse_formula(text);
  walk(f, [&](const Formula& g) {
    if (g.op == Op::letter) throw Error(Errc::parse_error, "letter atoms are not ipomset formulas");
    if (!well_sorted(g)) throw Error(Errc::parse_error, "variable of the wrong order in an atom");
  });
  return {f};
}

MsowFormula parse_msow(std::string_view text, const Alphabet& alpha) {
  FormulaPtr f = parse_formula(text);
  walk(f, [&](const Formula& g) {
    if (g.op == Op::label || g.op == Op::src || g.op == Op::tgt || g.op == Op::evord)
      throw Error(Errc::parse_error, "ipomset atom in a word formula");
    if (!well_sorted(g)) throw Error(Errc::parse_error, "variable of the wrong order in an atom");
    if (g.op == Op::letter) alpha.require(g.letter);
  });
  return {f, alpha};
}

}  // namespace ipoms
