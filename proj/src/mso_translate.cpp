#include <functional>
#include <map>
#include <optional>
#include <set>

#include "ipoms/mso.hpp"

namespace ipoms {

using namespace mso;

namespace {

// Names not occurring in `avoid` and not handed out before.
class Fresh {
 public:
  explicit Fresh(std::vector<std::string> avoid = {}) : used_(avoid.begin(), avoid.end()) {}

  std::string operator()(const std::string& base) {
    std::string name = base;
    int& i = next_[base];
    while (used_.count(name)) name = base + "_" + std::to_string(++i);
    used_.insert(name);
    return name;
  }

 private:
  std::set<std::string> used_;
  std::map<std::string, int> next_;
};

FormulaPtr letters_where(const Alphabet& alpha, const std::string& x,
                         const std::function<bool(const Step&)>& keep) {
  std::vector<FormulaPtr> out;
  for (const Step& d : alpha.letters())
    if (keep(d)) out.push_back(letter(d, x));
  return disj(std::move(out));
}

// Rank of position p among the positions in mask, or -1 if p is not in it.
int rank_in(EventSet mask, int p) {
  if (!has(mask, p)) return -1;
  return popcount(mask & all_of(p));
}

// Consecutive letters at u and v where (u,i) and (v,j) denote one event.
FormulaPtr glue_formula(const Alphabet& alpha, const std::string& u, int i, const std::string& v, int j) {
  // Group both sides by (interface conclist, rank) of the shared event.
  std::map<std::pair<Conclist, int>, std::pair<std::vector<FormulaPtr>, std::vector<FormulaPtr>>> groups;
  for (const Step& d : alpha.letters()) {
    if (d.size() >= i) {
      int r = rank_in(d.targets, i - 1);
      if (r >= 0) groups[{d.target_conclist(), r}].first.push_back(letter(d, u));
    }
    if (d.size() >= j) {
      int r = rank_in(d.sources, j - 1);
      if (r >= 0) groups[{d.source_conclist(), r}].second.push_back(letter(d, v));
    }
  }
  std::vector<FormulaPtr> cases;
  for (auto& [key, sides] : groups)
    if (!sides.first.empty() && !sides.second.empty())
      cases.push_back(conj({disj(sides.first), disj(sides.second)}));
  if (cases.empty()) return falsity();
  return conj({succ(u, v), disj(std::move(cases))});
}

std::vector<std::string> numbered(const std::string& base, int n, Fresh& fresh) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(fresh(base + std::to_string(i)));
  return out;
}

FormulaPtr chain_evord(const std::vector<std::string>& xs) {
  std::vector<FormulaPtr> out;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) out.push_back(evord(xs[i], xs[i + 1]));
  return conj(std::move(out));
}

FormulaPtr one_of(const std::string& y, const std::vector<std::string>& xs) {
  std::vector<FormulaPtr> out;
  for (const auto& x : xs) out.push_back(eq(y, x));
  return disj(std::move(out));
}

// MSOP abbreviations over the successor relation.
FormulaPtr expand_succ(const std::string& x, const std::string& y, Fresh& fresh) {
  std::string z = fresh("z");
  return conj({less(x, y), neg(exists(z, conj({less(x, z), less(z, y)})))});
}

}  // namespace

FormulaPtr rename_apart(const FormulaPtr& f) {
  Fresh fresh(free_variables(f));
  std::map<std::string, std::string> env;
  std::function<FormulaPtr(const FormulaPtr&)> go = [&](const FormulaPtr& g) -> FormulaPtr {
    auto name = [&](const std::string& v) {
      auto it = env.find(v);
      return it == env.end() ? v : it->second;
    };
    auto h = std::make_shared<Formula>(*g);
    if (g->op == Op::exists || g->op == Op::forall || g->op == Op::exists_set || g->op == Op::forall_set) {
      auto it = env.find(g->x);
      std::optional<std::string> saved;
      if (it != env.end()) saved = it->second;
      h->x = env[g->x] = fresh(g->x);
      h->kids = {go(g->kids[0])};
      if (saved) env[g->x] = *saved;
      else env.erase(g->x);
      return h;
    }
    if (!h->x.empty()) h->x = name(g->x);
    if (!h->y.empty()) h->y = name(g->y);
    for (auto& k : h->kids) k = go(k);
    return h;
  };
  return go(f);
}

// ------------------------------------------------------------ basic formulas

FormulaPtr coh_formula(const Alphabet& alpha) {
  std::map<Conclist, std::pair<std::vector<FormulaPtr>, std::vector<FormulaPtr>>> groups;
  for (const Step& d : alpha.letters()) {
    groups[d.target_conclist()].first.push_back(letter(d, "x"));
    groups[d.source_conclist()].second.push_back(letter(d, "y"));
  }
  std::vector<FormulaPtr> cases;
  for (auto& [u, sides] : groups)
    if (!sides.first.empty() && !sides.second.empty())
      cases.push_back(conj({disj(sides.first), disj(sides.second)}));
  return conj({exists("z", truth()),
               forall("x", forall("y", implies(succ("x", "y"), disj(std::move(cases)))))});
}

FormulaPtr width_guard(int k) {
  Fresh fresh;
  auto xs = numbered("x", k + 1, fresh);
  std::vector<FormulaPtr> distinct, ordered;
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) {
      if (i < j) distinct.push_back(neg(eq(xs[i], xs[j])));
      if (i != j) ordered.push_back(less(xs[i], xs[j]));
    }
  return conj({exists("x", disj({neg(src("x")), neg(tgt("x"))})),
               forall(xs, implies(conj(std::move(distinct)), disj(std::move(ordered))))});
}

FormulaPtr pinning_formula(const StepWord& w) {
  Fresh fresh({"y"});
  auto ys = numbered("y", static_cast<int>(w.size()), fresh);
  std::vector<FormulaPtr> parts;
  for (std::size_t i = 0; i < w.size(); ++i) parts.push_back(letter(w[i], ys[i]));
  for (std::size_t i = 0; i + 1 < w.size(); ++i) parts.push_back(succ(ys[i], ys[i + 1]));
  parts.push_back(forall("y", one_of("y", ys)));
  return exists(ys, conj(std::move(parts)));
}

FormulaPtr identity_formula(const Conclist& u) {
  Fresh fresh({"y"});
  auto xs = numbered("x", static_cast<int>(u.size()), fresh);
  std::vector<FormulaPtr> parts;
  for (std::size_t i = 0; i < u.size(); ++i) {
    parts.push_back(label(u[i], xs[i]));
    parts.push_back(src(xs[i]));
    parts.push_back(tgt(xs[i]));
  }
  parts.push_back(chain_evord(xs));
  parts.push_back(forall("y", one_of("y", xs)));
  return exists(xs, conj(std::move(parts)));
}

FormulaPtr dom_formula(const Alphabet& alpha, const std::string& x, int i) {
  return letters_where(alpha, x, [&](const Step& d) { return d.size() >= i; });
}

FormulaPtr sim_formula(const Alphabet& alpha, const std::string& x, int i, const std::string& y, int j) {
  int k = alpha.k();
  if (k == 0) return falsity();
  Fresh fresh({x, y});
  auto sets = numbered("S", k, fresh);
  std::string u = fresh("u"), v = fresh("v");
  std::vector<FormulaPtr> premise{in(x, sets[i - 1])};
  for (int a = 1; a <= k; ++a)
    for (int b = 1; b <= k; ++b) {
      FormulaPtr step = disj({glue_formula(alpha, u, a, v, b), glue_formula(alpha, v, b, u, a)});
      if (step->op == Op::falsity) continue;
      premise.push_back(forall(u, forall(v, implies(conj({in(u, sets[a - 1]), step}), in(v, sets[b - 1])))));
    }
  return forall(sets, implies(conj(std::move(premise)), in(y, sets[j - 1])));
}

// --------------------------------------------------- ipomsets to words

namespace {

class Hat {
 public:
  Hat(const Alphabet& alpha, const FormulaPtr& f) : alpha_(alpha), fresh_(variables(f)) {}

  FormulaPtr run(const FormulaPtr& f) {
    std::map<std::string, int> tau;
    for (const auto& v : free_variables(f)) {
      if (is_first_order(v))
        tau[v] = 1;
      else
        sets_[v] = split(v);
    }
    return tr(f, tau);
  }

 private:
  using Tau = std::map<std::string, int>;

  std::vector<std::string> split(const std::string& set) { return numbered(set + "_", alpha_.k(), fresh_); }

  // Every pair ~-equivalent to (x,i) satisfies the letter-local predicate.
  FormulaPtr closed_letter_pred(const std::string& x, int i, bool source) {
    std::vector<FormulaPtr> parts;
    Fresh local({x});
    std::string x2 = local("x");
    for (int i2 = 1; i2 <= alpha_.k(); ++i2) {
      FormulaPtr local_pred = letters_where(alpha_, x2, [&](const Step& d) {
        return d.size() >= i2 && has(source ? d.sources : d.targets, i2 - 1);
      });
      parts.push_back(forall(x2, implies(sim_formula(alpha_, x2, i2, x, i), local_pred)));
    }
    return conj(std::move(parts));
  }

  FormulaPtr tr(const FormulaPtr& f, const Tau& tau) {
    int k = alpha_.k();
    switch (f->op) {
      case Op::truth:
      case Op::falsity: return f;
      case Op::label: {
        int i = tau.at(f->x);
        return letters_where(alpha_, f->x, [&](const Step& d) { return d.size() >= i && d.labels[i - 1] == f->label; });
      }
      case Op::src: return closed_letter_pred(f->x, tau.at(f->x), true);
      case Op::tgt: return closed_letter_pred(f->x, tau.at(f->x), false);
      case Op::eq: return sim_formula(alpha_, f->x, tau.at(f->x), f->y, tau.at(f->y));
      case Op::less: {
        Fresh local({f->x, f->y});
        std::string x2 = local("x"), y2 = local("y");
        std::vector<FormulaPtr> parts;
        for (int i2 = 1; i2 <= k; ++i2)
          for (int j2 = 1; j2 <= k; ++j2)
            parts.push_back(forall(x2, forall(y2, implies(conj({sim_formula(alpha_, x2, i2, f->x, tau.at(f->x)),
                                                                  sim_formula(alpha_, y2, j2, f->y, tau.at(f->y))}),
                                                            less(x2, y2)))));
        return conj(std::move(parts));
      }
      case Op::evord: {
        Fresh local({f->x, f->y});
        std::string z = local("z");
        std::vector<FormulaPtr> parts;
        for (int i2 = 1; i2 <= k; ++i2)
          for (int j2 = i2 + 1; j2 <= k; ++j2)
            parts.push_back(exists(z, conj({sim_formula(alpha_, z, i2, f->x, tau.at(f->x)),
                                             sim_formula(alpha_, z, j2, f->y, tau.at(f->y))})));
        return disj(std::move(parts));
      }
      case Op::succ: {
        Fresh local(variables(f));
        return tr(expand_succ(f->x, f->y, local), tau);
      }
      case Op::in: {
        const auto& parts_of = sets_.at(f->y);
        Fresh local({f->x});
        std::string y2 = local("y");
        std::vector<FormulaPtr> parts;
        for (int j = 1; j <= k; ++j)
          parts.push_back(exists(y2, conj({sim_formula(alpha_, f->x, tau.at(f->x), y2, j), in(y2, parts_of[j - 1])})));
        return disj(std::move(parts));
      }
      case Op::letter: throw Error(Errc::invalid_argument, "letter atom in an ipomset formula");
      case Op::neg: return neg(tr(f->kids[0], tau));
      case Op::conj:
      case Op::disj: {
        std::vector<FormulaPtr> kids;
        for (const auto& c : f->kids) kids.push_back(tr(c, tau));
        return f->op == Op::conj ? conj(std::move(kids)) : disj(std::move(kids));
      }
      case Op::implies: return implies(tr(f->kids[0], tau), tr(f->kids[1], tau));
      case Op::iff: return iff(tr(f->kids[0], tau), tr(f->kids[1], tau));
      case Op::exists:
      case Op::forall: {
        bool ex = f->op == Op::exists;
        std::vector<FormulaPtr> cases;
        Tau inner = tau;
        for (int i = 1; i <= k; ++i) {
          inner[f->x] = i;
          FormulaPtr body = tr(f->kids[0], inner);
          FormulaPtr d = dom_formula(alpha_, f->x, i);
          cases.push_back(ex ? exists(f->x, conj({d, body})) : forall(f->x, implies(d, body)));
        }
        return ex ? disj(std::move(cases)) : conj(std::move(cases));
      }
      case Op::exists_set:
      case Op::forall_set: {
        bool ex = f->op == Op::exists_set;
        auto saved = sets_.find(f->x) == sets_.end() ? std::optional<std::vector<std::string>>{}
                                                      : std::optional<std::vector<std::string>>{sets_[f->x]};
        auto parts = split(f->x);
        sets_[f->x] = parts;
        FormulaPtr body = tr(f->kids[0], tau);
        std::string u = fresh_("u");
        for (int i = k; i >= 1; --i) {
          const std::string& s = parts[i - 1];
          FormulaPtr guard = forall(u, implies(in(u, s), dom_formula(alpha_, u, i)));
          body = ex ? exists(s, conj({guard, body})) : forall(s, implies(guard, body));
        }
        if (saved) sets_[f->x] = *saved;
        else sets_.erase(f->x);
        return body;
      }
    }
    return f;
  }

  const Alphabet& alpha_;
  Fresh fresh_;
  std::map<std::string, std::vector<std::string>> sets_;
};

void require_msop(const FormulaPtr& f) {
  if (!is_msop(f)) throw Error(Errc::invalid_argument, "not an ipomset formula: " + to_string(f));
}

}  // namespace

FormulaPtr hat_body(const MsopFormula& f, const Alphabet& alpha) {
  require_msop(f.formula);
  return rename_apart(Hat(alpha, f.formula).run(f.formula));
}

MsowFormula hat_translate(const MsopFormula& f, const Alphabet& alpha) {
  return {rename_apart(conj({coh_formula(alpha), hat_body(f, alpha)})), alpha};
}

// --------------------------------------------------- words to ipomsets

FormulaPtr endpoint_less(Endpoint f, const std::string& x, Endpoint g, const std::string& y) {
  Fresh local({x, y});
  if (f == Endpoint::en && g == Endpoint::st) return less(x, y);
  if (f == Endpoint::st && g == Endpoint::en) return neg(less(y, x));
  std::string z = local("z");
  if (f == Endpoint::st)
    return disj({conj({src(x), neg(src(y))}), exists(z, conj({neg(less(z, x)), less(z, y)}))});
  return disj({conj({tgt(y), neg(tgt(x))}), exists(z, conj({less(x, z), neg(less(y, z))}))});
}

FormulaPtr step_formula(const Step& d, Endpoint at, const std::string& x) {
  bool starter = at == Endpoint::st;
  if (starter ? !d.is_proper_starter() : !d.is_proper_terminator()) return falsity();
  Fresh local({x});
  auto xs = numbered("x", d.size(), local);
  std::string y = local("y");
  FormulaPtr member = starter ? conj({neg(endpoint_less(Endpoint::st, x, Endpoint::st, y)),
                                      endpoint_less(Endpoint::st, x, Endpoint::en, y)})
                              : conj({endpoint_less(Endpoint::st, y, Endpoint::en, x),
                                      neg(endpoint_less(Endpoint::en, y, Endpoint::en, x))});
  std::vector<FormulaPtr> parts{starter ? neg(src(x)) : neg(tgt(x)), forall(y, iff(member, one_of(y, xs)))};
  for (int i = 0; i < d.size(); ++i) {
    parts.push_back(label(d.labels[i], xs[i]));
    FormulaPtr before = starter ? endpoint_less(Endpoint::st, xs[i], Endpoint::st, x)
                                : endpoint_less(Endpoint::en, x, Endpoint::en, xs[i]);
    bool kept = has(starter ? d.sources : d.targets, i);
    parts.push_back(kept ? before : neg(before));
  }
  parts.push_back(chain_evord(xs));
  return exists(xs, conj(std::move(parts)));
}

namespace {

class Bar {
 public:
  explicit Bar(const FormulaPtr& f) : fresh_(variables(f)) {}

  FormulaPtr run(const FormulaPtr& f) {
    std::map<std::string, Endpoint> tau;
    for (const auto& v : free_variables(f)) {
      if (is_first_order(v)) tau[v] = Endpoint::st;
      else sets_[v] = split(v);
    }
    return tr(f, tau);
  }

 private:
  using Tau = std::map<std::string, Endpoint>;

  std::pair<std::string, std::string> split(const std::string& set) {
    return {fresh_(set + "_st"), fresh_(set + "_en")};
  }

  // Sets of events standing for a set of positions: events of the right
  // kind, closed under sharing the step.
  std::vector<FormulaPtr> guards(const std::string& set, Endpoint at) {
    std::string u = fresh_("u"), v = fresh_("v");
    auto kind = [&](const std::string& e) { return at == Endpoint::st ? neg(src(e)) : neg(tgt(e)); };
    FormulaPtr range = forall(u, implies(in(u, set), kind(u)));
    FormulaPtr closed = forall(u, forall(v, implies(conj({in(u, set), kind(v), neg(endpoint_less(at, u, at, v)),
                                                           neg(endpoint_less(at, v, at, u))}),
                                                     in(v, set))));
    return {range, closed};
  }

  FormulaPtr tr(const FormulaPtr& f, const Tau& tau) {
    switch (f->op) {
      case Op::truth:
      case Op::falsity: return f;
      case Op::letter: return step_formula(f->letter, tau.at(f->x), f->x);
      case Op::less: return endpoint_less(tau.at(f->x), f->x, tau.at(f->y), f->y);
      case Op::eq: return tr(conj({neg(less(f->x, f->y)), neg(less(f->y, f->x))}), tau);
      case Op::succ: {
        Fresh local(variables(f));
        return tr(expand_succ(f->x, f->y, local), tau);
      }
      case Op::in: {
        const auto& [st, en] = sets_.at(f->y);
        return in(f->x, tau.at(f->x) == Endpoint::st ? st : en);
      }
      case Op::label:
      case Op::src:
      case Op::tgt:
      case Op::evord: throw Error(Errc::invalid_argument, "ipomset atom in a word formula");
      case Op::neg: return neg(tr(f->kids[0], tau));
      case Op::conj:
      case Op::disj: {
        std::vector<FormulaPtr> kids;
        for (const auto& c : f->kids) kids.push_back(tr(c, tau));
        return f->op == Op::conj ? conj(std::move(kids)) : disj(std::move(kids));
      }
      case Op::implies: return implies(tr(f->kids[0], tau), tr(f->kids[1], tau));
      case Op::iff: return iff(tr(f->kids[0], tau), tr(f->kids[1], tau));
      case Op::exists:
      case Op::forall: {
        bool ex = f->op == Op::exists;
        Tau inner = tau;
        std::vector<FormulaPtr> cases;
        for (Endpoint at : {Endpoint::st, Endpoint::en}) {
          inner[f->x] = at;
          FormulaPtr body = tr(f->kids[0], inner);
          FormulaPtr kind = at == Endpoint::st ? neg(src(f->x)) : neg(tgt(f->x));
          cases.push_back(ex ? exists(f->x, conj({kind, body})) : forall(f->x, implies(kind, body)));
        }
        return ex ? disj(std::move(cases)) : conj(std::move(cases));
      }
      case Op::exists_set:
      case Op::forall_set: {
        bool ex = f->op == Op::exists_set;
        auto it = sets_.find(f->x);
        auto saved = it == sets_.end() ? std::optional<std::pair<std::string, std::string>>{}
                                       : std::optional<std::pair<std::string, std::string>>{it->second};
        auto names = split(f->x);
        sets_[f->x] = names;
        FormulaPtr body = tr(f->kids[0], tau);
        for (Endpoint at : {Endpoint::en, Endpoint::st}) {
          const std::string& s = at == Endpoint::st ? names.first : names.second;
          auto g = guards(s, at);
          if (ex) {
            g.push_back(body);
            body = exists(s, conj(std::move(g)));
          } else {
            body = forall(s, implies(conj(std::move(g)), body));
          }
        }
        if (saved) sets_[f->x] = *saved;
        else sets_.erase(f->x);
        return body;
      }
    }
    return f;
  }

  Fresh fresh_;
  std::map<std::string, std::pair<std::string, std::string>> sets_;
};

}  // namespace

MsopFormula bar_translate(const MsowFormula& f) {
  if (!is_msow(f.formula, f.alphabet))
    throw Error(Errc::invalid_argument, "not a word formula over the alphabet: " + to_string(f.formula));
  std::vector<FormulaPtr> identities;
  for (const Step& d : f.alphabet.letters())
    if (d.is_identity() && eval_word({d}, f)) identities.push_back(identity_formula(d.labels));
  FormulaPtr body = Bar(f.formula).run(f.formula);
  return {rename_apart(disj({disj(std::move(identities)), conj({width_guard(f.alphabet.k()), body})}))};
}

}  // namespace ipoms
