#include <algorithm>
#include <bit>
#include <bitset>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "ipoms/mso.hpp"

namespace ipoms {

namespace {

// Unary predicate on one variable, evaluated once per structure to a mask.
struct Pred {
  enum Kind { label, src, tgt, letter, top, bottom, pnot, pand, por } kind = top;
  Label l = 0;
  Step d;
  std::vector<int> kids;
};

enum Rel { rel_less, rel_evord, rel_eq, rel_succ, rel_count };

enum class Kind { truth, falsity, mask, rel, in, neg, conj, disj, implies, iff, ex, all, ex_set, all_set };

// x in X => theta(x), restricting the range of X.
struct DomainGuard {
  int set;
  int u;
  int theta;
};

// (x in X & theta(x, y)) => y in Y, closing the sets under theta.
struct ClosureGuard {
  int from, to;
  int u, v;
  int theta;
};

// x in X with x bound outside.
struct Seed {
  int x;
  int set;
};

// Joint elements (set, event) of a block of set quantifiers.
using Elements = std::bitset<256>;

struct Node {
  Kind kind = Kind::truth;
  int a = -1, b = -1;  // slots; a is the bound slot of a quantifier
  int pred = -1;
  int rel = -1;
  std::vector<int> kids;
  // Set quantifiers bind a block of directly nested sets of one kind.
  // Guards and seeds are conjuncts of the body (resp. the premise) that are
  // enforced by the enumeration; the other conjuncts are in rest.
  std::vector<int> block;
  std::vector<Seed> seeds;
  std::vector<DomainGuard> domain_guards;
  std::vector<ClosureGuard> closure_guards;
  std::vector<int> rest;
  int conclusion = -1;
  std::vector<int> free_slots;
  bool memo = false;
};

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint64_t>& k) const {
    std::size_t h = 1469598103934665603ULL;
    for (auto v : k) h = (h ^ v) * 1099511628211ULL;
    return h;
  }
};

using Memo = std::unordered_map<std::vector<std::uint64_t>, bool, KeyHash>;

bool mentions(const FormulaPtr& f, const std::string& v) {
  auto fv = free_variables(f);
  return std::find(fv.begin(), fv.end(), v) != fv.end();
}

void flatten_conj(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->op != Op::conj) {
    out.push_back(f);
    return;
  }
  for (const auto& k : f->kids) flatten_conj(k, out);
}

bool quantified(const FormulaPtr& f) {
  if (f->op == Op::exists || f->op == Op::forall || f->op == Op::exists_set || f->op == Op::forall_set)
    return true;
  for (const auto& k : f->kids)
    if (quantified(k)) return true;
  return false;
}

// Quantifier-free conjuncts first, then by size.
FormulaPtr cheap_first(std::vector<FormulaPtr> parts) {
  std::vector<std::pair<std::size_t, FormulaPtr>> keyed;
  for (auto& c : parts) keyed.emplace_back(quantified(c) ? node_count(c) : 0, std::move(c));
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  parts.clear();
  for (auto& [w, c] : keyed) parts.push_back(std::move(c));
  return mso::conj(std::move(parts));
}

// Moves conjuncts not mentioning x out of first-order existentials:
// exists x. (a & b(x)) becomes a & exists x. b(x). Universal quantifiers are
// left alone so that guard shapes survive.
FormulaPtr miniscope(const FormulaPtr& f) {
  if (f->kids.empty()) return f;
  auto g = std::make_shared<Formula>(*f);
  for (auto& k : g->kids) k = miniscope(k);
  if (g->op == Op::conj) {
    std::vector<FormulaPtr> parts;
    flatten_conj(g, parts);
    return cheap_first(std::move(parts));
  }
  if (g->op != Op::exists) return g;
  std::vector<FormulaPtr> parts, inside, outside;
  flatten_conj(g->kids[0], parts);
  for (const auto& c : parts) (mentions(c, g->x) ? inside : outside).push_back(c);
  if (outside.empty()) return mso::exists(g->x, cheap_first(std::move(inside)));
  outside.push_back(mso::exists(g->x, cheap_first(std::move(inside))));
  return cheap_first(std::move(outside));
}

}  // namespace

struct Evaluator::Impl {
  std::vector<Pred> preds;
  std::map<std::pair<int, std::string>, int> atom_index;
  std::vector<Node> nodes;
  int root = -1;
  int slots = 0;
  std::vector<std::pair<std::string, int>> free_vars;  // name, slot

  // Per-structure state.
  int n = 0;
  std::vector<EventSet> masks;
  std::vector<EventSet> rows[rel_count];
  std::vector<std::uint64_t> val;
  std::vector<Memo> memos;
  std::vector<int> dirty;

  using Scope = std::vector<std::pair<std::string, int>>;

  int slot_of(const std::string& name, Scope& scope) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == name) return it->second;
    for (auto& [v, s] : free_vars)
      if (v == name) return s;
    free_vars.emplace_back(name, slots);
    return slots++;
  }

  int add_pred(Pred p) {
    preds.push_back(std::move(p));
    return static_cast<int>(preds.size()) - 1;
  }

  int atom_pred(const Formula& f) {
    Pred p;
    std::string key;
    switch (f.op) {
      case Op::label: p.kind = Pred::label, p.l = f.label, key = std::string(1, f.label); break;
      case Op::src: p.kind = Pred::src; break;
      case Op::tgt: p.kind = Pred::tgt; break;
      default: p.kind = Pred::letter, p.d = f.letter, key = to_string(f.letter); break;
    }
    auto k = std::make_pair(static_cast<int>(p.kind), key);
    auto it = atom_index.find(k);
    if (it != atom_index.end()) return it->second;
    int id = add_pred(std::move(p));
    atom_index[k] = id;
    return id;
  }

  // Predicate index if f is a boolean combination of unary atoms on the
  // single variable `var` (set on first atom), otherwise -1.
  int try_pred(const FormulaPtr& f, std::string& var) {
    switch (f->op) {
      case Op::label:
      case Op::src:
      case Op::tgt:
      case Op::letter:
        if (!var.empty() && var != f->x) return -1;
        var = f->x;
        return atom_pred(*f);
      case Op::truth: return add_pred({Pred::top, 0, {}, {}});
      case Op::falsity: return add_pred({Pred::bottom, 0, {}, {}});
      case Op::neg:
      case Op::conj:
      case Op::disj: {
        std::vector<int> kids;
        for (const auto& k : f->kids) {
          int p = try_pred(k, var);
          if (p < 0) return -1;
          kids.push_back(p);
        }
        Pred::Kind kind = f->op == Op::neg ? Pred::pnot : f->op == Op::conj ? Pred::pand : Pred::por;
        return add_pred({kind, 0, {}, std::move(kids)});
      }
      default: return -1;
    }
  }

  int add_node(Node node) {
    nodes.push_back(std::move(node));
    return static_cast<int>(nodes.size()) - 1;
  }

  int compile(const FormulaPtr& f, Scope& scope) {
    Node node;
    if (f->op != Op::truth && f->op != Op::falsity) {
      std::string var;
      std::size_t mark = preds.size();
      int p = try_pred(f, var);
      if (p >= 0 && !var.empty()) {
        node.kind = Kind::mask;
        node.pred = p;
        node.a = slot_of(var, scope);
        return add_node(std::move(node));
      }
      // Discard partial predicates, keeping interned atoms consistent.
      if (p < 0 || var.empty()) {
        for (auto it = atom_index.begin(); it != atom_index.end();)
          it = it->second >= static_cast<int>(mark) ? atom_index.erase(it) : std::next(it);
        preds.resize(mark);
      }
    }
    switch (f->op) {
      case Op::truth: node.kind = Kind::truth; break;
      case Op::falsity: node.kind = Kind::falsity; break;
      case Op::less:
      case Op::evord:
      case Op::eq:
      case Op::succ:
        node.kind = Kind::rel;
        node.rel = f->op == Op::less ? rel_less : f->op == Op::evord ? rel_evord : f->op == Op::eq ? rel_eq : rel_succ;
        node.a = slot_of(f->x, scope);
        node.b = slot_of(f->y, scope);
        break;
      case Op::in:
        node.kind = Kind::in;
        node.a = slot_of(f->x, scope);
        node.b = slot_of(f->y, scope);
        break;
      case Op::neg:
      case Op::conj:
      case Op::disj:
      case Op::implies:
      case Op::iff:
        node.kind = f->op == Op::neg ? Kind::neg : f->op == Op::conj ? Kind::conj : f->op == Op::disj ? Kind::disj
                    : f->op == Op::implies ? Kind::implies : Kind::iff;
        for (const auto& k : f->kids) node.kids.push_back(compile(k, scope));
        break;
      case Op::exists:
      case Op::forall:
        node.kind = f->op == Op::exists ? Kind::ex : Kind::all;
        node.a = slots++;
        scope.emplace_back(f->x, node.a);
        node.kids.push_back(compile(f->kids[0], scope));
        scope.pop_back();
        break;
      case Op::exists_set:
      case Op::forall_set:
        compile_set(f, scope, node);
        break;
      default: break;
    }
    return add_node(std::move(node));
  }

  static std::vector<FormulaPtr> conjuncts(const FormulaPtr& f) {
    if (f->op == Op::conj) return f->kids;
    return {f};
  }

  using Block = std::vector<std::pair<std::string, int>>;

  static int block_index(const Block& block, const std::string& name) {
    for (std::size_t i = 0; i < block.size(); ++i)
      if (block[i].first == name) return static_cast<int>(i);
    return -1;
  }

  static bool mentions_block(const FormulaPtr& f, const Block& block) {
    for (const auto& v : free_variables(f))
      if (block_index(block, v) >= 0) return true;
    return false;
  }

  bool match_domain_guard(const FormulaPtr& c, const Block& block, Scope& scope, Node& node) {
    if (c->op != Op::forall) return false;
    const auto& body = c->kids[0];
    if (body->op != Op::implies) return false;
    const auto& prem = body->kids[0];
    if (prem->op != Op::in || prem->x != c->x) return false;
    int set = block_index(block, prem->y);
    if (set < 0 || mentions_block(body->kids[1], block)) return false;
    int u = slots++;
    scope.emplace_back(c->x, u);
    int theta = compile(body->kids[1], scope);
    scope.pop_back();
    node.domain_guards.push_back({set, u, theta});
    return true;
  }

  bool match_closure_guard(const FormulaPtr& c, const Block& block, Scope& scope, Node& node) {
    if (c->op != Op::forall || c->kids[0]->op != Op::forall) return false;
    const std::string& x = c->x;
    const std::string& y = c->kids[0]->x;
    if (x == y) return false;
    const auto& body = c->kids[0]->kids[0];
    if (body->op != Op::implies) return false;
    const auto& concl = body->kids[1];
    if (concl->op != Op::in || concl->x != y) return false;
    auto prem = conjuncts(body->kids[0]);
    if (prem.empty() || prem[0]->op != Op::in || prem[0]->x != x) return false;
    int from = block_index(block, prem[0]->y), to = block_index(block, concl->y);
    if (from < 0 || to < 0) return false;
    FormulaPtr t = mso::conj(std::vector<FormulaPtr>(prem.begin() + 1, prem.end()));
    if (mentions_block(t, block)) return false;
    int u = slots++, v = slots++;
    scope.emplace_back(x, u);
    scope.emplace_back(y, v);
    int th = compile(t, scope);
    scope.pop_back();
    scope.pop_back();
    node.closure_guards.push_back({from, to, u, v, th});
    return true;
  }

  bool match_seed(const FormulaPtr& c, const Block& block, Scope& scope, Node& node) {
    if (c->op != Op::in || block_index(block, c->x) >= 0) return false;
    int set = block_index(block, c->y);
    if (set < 0) return false;
    node.seeds.push_back({slot_of(c->x, scope), set});
    return true;
  }

  void compile_set(const FormulaPtr& f, Scope& scope, Node& node) {
    bool ex = f->op == Op::exists_set;
    node.kind = ex ? Kind::ex_set : Kind::all_set;
    // Directly nested quantifiers of the same kind form one block.
    Block block;
    FormulaPtr body = f;
    while (body->op == f->op && block_index(block, body->x) < 0) {
      block.emplace_back(body->x, slots++);
      body = body->kids[0];
    }
    for (const auto& [name, slot] : block) node.block.push_back(slot);
    node.a = node.block.front();
    std::vector<FormulaPtr> parts;
    FormulaPtr concl;
    if (ex) {
      parts = conjuncts(body);
    } else if (body->op == Op::implies) {
      parts = conjuncts(body->kids[0]);
      concl = body->kids[1];
    } else {
      concl = body;
    }
    // Guards are compiled in the outer scope: they mention the block only
    // through the matched membership atoms.
    for (const auto& c : parts) {
      if (match_domain_guard(c, block, scope, node) || match_closure_guard(c, block, scope, node) ||
          match_seed(c, block, scope, node))
        continue;
      scope.insert(scope.end(), block.begin(), block.end());
      node.rest.push_back(compile(c, scope));
      scope.resize(scope.size() - block.size());
    }
    if (concl) {
      scope.insert(scope.end(), block.begin(), block.end());
      node.conclusion = compile(concl, scope);
      scope.resize(scope.size() - block.size());
    }
  }

  // Free slots of each node, bottom-up; nodes are stored children first.
  void analyze() {
    std::vector<std::set<int>> fs(nodes.size());
    std::vector<bool> has_quant(nodes.size(), false);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Node& nd = nodes[i];
      std::set<int>& s = fs[i];
      auto absorb = [&](int k, const std::vector<int>& bound) {
        for (int x : fs[k])
          if (std::find(bound.begin(), bound.end(), x) == bound.end()) s.insert(x);
        has_quant[i] = has_quant[i] || has_quant[k];
      };
      switch (nd.kind) {
        case Kind::mask: s.insert(nd.a); break;
        case Kind::rel:
        case Kind::in:
          s.insert(nd.a);
          s.insert(nd.b);
          break;
        case Kind::ex:
        case Kind::all:
          absorb(nd.kids[0], {nd.a});
          break;
        case Kind::ex_set:
        case Kind::all_set:
          for (const auto& g : nd.domain_guards) absorb(g.theta, {g.u});
          for (const auto& g : nd.closure_guards) absorb(g.theta, {g.u, g.v});
          for (const auto& sd : nd.seeds) s.insert(sd.x);
          for (int k : nd.rest) absorb(k, nd.block);
          if (nd.conclusion >= 0) absorb(nd.conclusion, nd.block);
          break;
        default:
          for (int k : nd.kids) absorb(k, {});
      }
      bool quant = nd.kind == Kind::ex || nd.kind == Kind::all || nd.kind == Kind::ex_set || nd.kind == Kind::all_set;
      nd.free_slots.assign(s.begin(), s.end());
      nd.memo = quant && has_quant[i];
      has_quant[i] = has_quant[i] || quant;
    }
    memos.assign(nodes.size(), {});
  }

  // ------------------------------------------------------------ structures

  void reset(int size) {
    n = size;
    val.assign(slots, 0);
    for (int i : dirty) memos[i].clear();
    dirty.clear();
    for (auto& r : rows) r.assign(n, 0);
    masks.assign(preds.size(), 0);
  }

  void compute_masks(const std::function<EventSet(const Pred&)>& atom) {
    EventSet all = all_of(n);
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const Pred& p = preds[i];
      EventSet m = 0;
      switch (p.kind) {
        case Pred::top: m = all; break;
        case Pred::bottom: m = 0; break;
        case Pred::pnot: m = all & ~masks[p.kids[0]]; break;
        case Pred::pand:
          m = all;
          for (int k : p.kids) m &= masks[k];
          break;
        case Pred::por:
          for (int k : p.kids) m |= masks[k];
          break;
        default: m = atom(p);
      }
      masks[i] = m;
    }
  }

  void load(const Ipomset& p) {
    reset(p.size());
    compute_masks([&](const Pred& pr) -> EventSet {
      EventSet m = 0;
      switch (pr.kind) {
        case Pred::label:
          for (int x = 0; x < n; ++x)
            if (p.label(x) == pr.l) m |= bit(x);
          return m;
        case Pred::src: return p.sources();
        case Pred::tgt: return p.targets();
        default: throw Error(Errc::invalid_argument, "letter atom evaluated on an ipomset");
      }
    });
    for (int x = 0; x < n; ++x) {
      rows[rel_less][x] = p.successors(x);
      rows[rel_evord][x] = p.evord_row(x);
      rows[rel_eq][x] = bit(x);
    }
    for (int x = 0; x < n; ++x) {
      EventSet covered = 0;
      for (int z = 0; z < n; ++z)
        if (p.less(x, z)) covered |= p.successors(z);
      rows[rel_succ][x] = p.successors(x) & ~covered;
    }
  }

  void load(const StepWord& w) {
    reset(static_cast<int>(w.size()));
    compute_masks([&](const Pred& pr) -> EventSet {
      if (pr.kind != Pred::letter)
        throw Error(Errc::invalid_argument, "ipomset atom evaluated on a word");
      EventSet m = 0;
      for (int i = 0; i < n; ++i)
        if (w[i] == pr.d) m |= bit(i);
      return m;
    });
    for (int i = 0; i < n; ++i) {
      rows[rel_less][i] = all_of(n) & ~all_of(i + 1);
      rows[rel_eq][i] = bit(i);
      rows[rel_succ][i] = i + 1 < n ? bit(i + 1) : 0;
    }
  }

  void bind(const Valuation& nu) {
    for (const auto& [name, slot] : free_vars) {
      if (is_first_order(name)) {
        auto it = nu.first.find(name);
        if (it == nu.first.end()) throw Error(Errc::unbound_variable, "unbound variable " + name);
        if (it->second < 0 || it->second >= n)
          throw Error(Errc::invalid_argument, "variable " + name + " out of range");
        val[slot] = static_cast<std::uint64_t>(it->second);
      } else {
        auto it = nu.second.find(name);
        if (it == nu.second.end()) throw Error(Errc::unbound_variable, "unbound variable " + name);
        if (it->second & ~all_of(n)) throw Error(Errc::invalid_argument, "set " + name + " out of range");
        val[slot] = it->second;
      }
    }
  }

  // ------------------------------------------------------------ evaluation

  bool eval(int id) {
    const Node& nd = nodes[id];
    switch (nd.kind) {
      case Kind::truth: return true;
      case Kind::falsity: return false;
      case Kind::mask: return has(masks[nd.pred], static_cast<int>(val[nd.a]));
      case Kind::rel: return has(rows[nd.rel][val[nd.a]], static_cast<int>(val[nd.b]));
      case Kind::in: return has(val[nd.b], static_cast<int>(val[nd.a]));
      case Kind::neg: return !eval(nd.kids[0]);
      case Kind::conj:
        for (int k : nd.kids)
          if (!eval(k)) return false;
        return true;
      case Kind::disj:
        for (int k : nd.kids)
          if (eval(k)) return true;
        return false;
      case Kind::implies: return !eval(nd.kids[0]) || eval(nd.kids[1]);
      case Kind::iff: return eval(nd.kids[0]) == eval(nd.kids[1]);
      default: break;
    }
    if (!nd.memo) return quantify(nd);
    std::vector<std::uint64_t> key;
    key.reserve(nd.free_slots.size());
    for (int s : nd.free_slots) key.push_back(val[s]);
    Memo& m = memos[id];
    auto it = m.find(key);
    if (it != m.end()) return it->second;
    bool r = quantify(nd);
    if (m.empty()) dirty.push_back(id);
    m.emplace(std::move(key), r);
    return r;
  }

  bool quantify(const Node& nd) {
    if (nd.kind == Kind::ex || nd.kind == Kind::all) {
      bool ex = nd.kind == Kind::ex;
      for (int u = 0; u < n; ++u) {
        val[nd.a] = static_cast<std::uint64_t>(u);
        if (eval(nd.kids[0]) == ex) return ex;
      }
      return !ex;
    }
    return quantify_set(nd);
  }

  bool quantify_set(const Node& nd) {
    bool ex = nd.kind == Kind::ex_set;
    int sets = static_cast<int>(nd.block.size());
    if (sets * n > 256) throw Error(Errc::capacity, "set quantifier block too large");
    auto element = [&](int set, int u) { return static_cast<std::size_t>(set * n + u); };
    Elements universe;
    for (int e = 0; e < sets * n; ++e) universe.set(e);
    Elements out;  // excluded by domain guards
    for (const auto& g : nd.domain_guards)
      for (int u = 0; u < n; ++u) {
        val[g.u] = static_cast<std::uint64_t>(u);
        if (!eval(g.theta)) out.set(element(g.set, u));
      }
    // Reflexive-transitive closure of the closure guards.
    std::vector<Elements> cl(sets * n);
    for (int e = 0; e < sets * n; ++e) cl[e].set(e);
    if (!nd.closure_guards.empty()) {
      for (const auto& g : nd.closure_guards)
        for (int u = 0; u < n; ++u)
          for (int v = 0; v < n; ++v) {
            val[g.u] = static_cast<std::uint64_t>(u);
            val[g.v] = static_cast<std::uint64_t>(v);
            if (eval(g.theta)) cl[element(g.from, u)].set(element(g.to, v));
          }
      for (bool changed = true; changed;) {
        changed = false;
        for (int e = 0; e < sets * n; ++e) {
          Elements r = cl[e];
          for (int f = 0; f < sets * n; ++f)
            if (cl[e].test(f)) r |= cl[f];
          if (r != cl[e]) cl[e] = r, changed = true;
        }
      }
    }
    Elements in;
    for (const auto& sd : nd.seeds) in |= cl[element(sd.set, static_cast<int>(val[sd.x]))];
    // No set family satisfies the seeds and guards.
    if ((in & out).any()) return !ex;
    auto holds = [&]() {
      for (int k : nd.rest)
        if (!eval(k)) return !ex;
      return ex ? true : eval(nd.conclusion);
    };
    // Closed families, each produced once: the lowest undecided element is
    // either taken with its closure or excluded.
    std::function<bool(const Elements&, const Elements&)> walk = [&](const Elements& a, const Elements& b) -> bool {
      Elements open = universe & ~a & ~b;
      if (open.none()) {
        for (int s = 0; s < sets; ++s) {
          EventSet m = 0;
          for (int u = 0; u < n; ++u)
            if (a.test(element(s, u))) m |= bit(u);
          val[nd.block[s]] = m;
        }
        return holds() == ex;
      }
      std::size_t e = open._Find_first();
      if ((cl[e] & b).none() && walk(a | cl[e], b)) return true;
      Elements b2 = b;
      b2.set(e);
      return walk(a, b2);
    };
    bool found = walk(in, out);
    return ex ? found : !found;
  }
};

Evaluator::Evaluator(const FormulaPtr& f) : impl_(std::make_unique<Impl>()) {
  Impl::Scope scope;
  impl_->root = impl_->compile(miniscope(f), scope);
  impl_->analyze();
}

Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;

bool Evaluator::operator()(const Ipomset& p, const Valuation& nu) {
  impl_->load(p);
  impl_->bind(nu);
  return impl_->eval(impl_->root);
}

bool Evaluator::operator()(const StepWord& w, const Valuation& nu) {
  impl_->load(w);
  impl_->bind(nu);
  return impl_->eval(impl_->root);
}

bool eval_ipomset(const Ipomset& p, const FormulaPtr& f, const Valuation& nu) {
  return Evaluator(f)(p, nu);
}

bool eval_ipomset(const Ipomset& p, const MsopFormula& f, const Valuation& nu) {
  return eval_ipomset(p, f.formula, nu);
}

bool eval_word(const StepWord& w, const MsowFormula& f, const Valuation& nu) {
  for (const Step& d : w) f.alphabet.require(d);
  return Evaluator(f.formula)(w, nu);
}

}  // namespace ipoms
