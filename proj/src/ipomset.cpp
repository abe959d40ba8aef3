#include "ipoms/ipomset.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <tuple>

#include "ipoms/sweep.hpp"

namespace ipoms {

bool is_label(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

Ipomset::Ipomset(std::vector<Label> labels, std::vector<EventSet> prec, std::vector<EventSet> evord,
                 EventSet sources, EventSet targets)
    : labels_(std::move(labels)),
      prec_(std::move(prec)),
      evord_(std::move(evord)),
      sources_(sources),
      targets_(targets) {
  if (labels_.size() > static_cast<std::size_t>(kMaxEvents))
    throw Error(Errc::bound_exceeded, "more than 64 events");
  prec_.resize(labels_.size(), 0);
  evord_.resize(labels_.size(), 0);
}

EventSet Ipomset::predecessors(EventId y) const {
  EventSet out = 0;
  for (int x = 0; x < size(); ++x)
    if (less(x, y)) out |= bit(x);
  return out;
}

bool Ipomset::is_discrete() const {
  return std::all_of(prec_.begin(), prec_.end(), [](EventSet r) { return r == 0; });
}

std::vector<EventId> Ipomset::sorted_by_evord(EventSet antichain) const {
  std::vector<EventId> out;
  for (int x = 0; x < size(); ++x)
    if (has(antichain, x)) out.push_back(x);
  // On an antichain the event order is total, so the rank is the number of
  // members preceding x.
  std::vector<int> rank(size(), 0);
  for (EventId x : out)
    for (EventId y : out)
      if (evord(y, x)) ++rank[x];
  std::sort(out.begin(), out.end(), [&](EventId a, EventId b) {
    return rank[a] != rank[b] ? rank[a] < rank[b] : a < b;
  });
  return out;
}

namespace {

std::string ev(EventId x) { return "x" + std::to_string(x + 1); }

bool evord_acyclic(const Ipomset& p) {
  // Kahn's algorithm on the event-order graph.
  int n = p.size();
  std::vector<int> indeg(n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (p.evord(x, y)) ++indeg[y];
  std::vector<int> queue;
  for (int x = 0; x < n; ++x)
    if (indeg[x] == 0) queue.push_back(x);
  int seen = 0;
  while (!queue.empty()) {
    int x = queue.back();
    queue.pop_back();
    ++seen;
    for (int y = 0; y < n; ++y)
      if (p.evord(x, y) && --indeg[y] == 0) queue.push_back(y);
  }
  return seen == n;
}

bool two_plus_two_free(const Ipomset& p) {
  int n = p.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!p.less(x, y)) continue;
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w)
          if (p.less(z, w) && !p.less(x, w) && !p.less(z, y)) return false;
    }
  return true;
}

}  // namespace

std::vector<Diagnostic> check(const Ipomset& p, bool require_interval) {
  std::vector<Diagnostic> out;
  int n = p.size();
  EventSet all = p.all();
  for (int x = 0; x < n; ++x) {
    if ((p.successors(x) & ~all) || (p.evord_row(x) & ~all))
      out.push_back({Errc::exactly_one_violation, "relation mentions unknown event"});
    if (!is_label(p.label(x)))
      out.push_back({Errc::invalid_argument, "bad label for " + ev(x)});
  }
  if ((p.sources() & ~all) || (p.targets() & ~all))
    out.push_back({Errc::exactly_one_violation, "interface mentions unknown event"});
  if (!out.empty()) return out;

  for (int x = 0; x < n; ++x) {
    if (p.less(x, x)) out.push_back({Errc::exactly_one_violation, ev(x) + " < " + ev(x)});
    if (p.evord(x, x)) out.push_back({Errc::evord_cycle, ev(x) + " => " + ev(x)});
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (p.less(x, y))
        for (int z = 0; z < n; ++z)
          if (p.less(y, z) && !p.less(x, z))
            out.push_back({Errc::exactly_one_violation,
                           "precedence not transitive at " + ev(x) + "<" + ev(y) + "<" + ev(z)});
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      int count = p.less(x, y) + p.less(y, x) + p.evord(x, y) + p.evord(y, x);
      if (count != 1)
        out.push_back({Errc::exactly_one_violation,
                       ev(x) + "," + ev(y) + " related " + std::to_string(count) + " times"});
    }
  if (!evord_acyclic(p)) out.push_back({Errc::evord_cycle, "event order has a cycle"});
  for (int x = 0; x < n; ++x) {
    if (p.is_source(x) && p.predecessors(x) != 0)
      out.push_back({Errc::non_minimal_source, "source " + ev(x) + " has a predecessor"});
    if (p.is_target(x) && p.successors(x) != 0)
      out.push_back({Errc::non_maximal_target, "target " + ev(x) + " has a successor"});
  }
  if (require_interval && !two_plus_two_free(p))
    out.push_back({Errc::not_interval, "precedence contains 2+2"});
  return out;
}

Ipomset validate(const Ipomset& raw, bool require_interval) {
  auto diags = check(raw, require_interval);
  if (!diags.empty()) throw Error(std::move(diags));
  return raw;
}

Ipomset validate(const IpomsetData& data, bool require_interval) {
  int n = static_cast<int>(data.labels.size());
  if (n > kMaxEvents) throw Error(Errc::bound_exceeded, "more than 64 events");
  std::vector<Diagnostic> diags;
  auto in_range = [&](EventId x) {
    if (x >= 0 && x < n) return true;
    diags.push_back({Errc::invalid_argument, "unknown event index " + std::to_string(x)});
    return false;
  };
  std::vector<EventSet> prec(n, 0), evord(n, 0);
  for (auto [x, y] : data.prec)
    if (in_range(x) && in_range(y)) prec[x] |= bit(y);
  for (auto [x, y] : data.evord)
    if (in_range(x) && in_range(y)) evord[x] |= bit(y);
  EventSet s = 0, t = 0;
  for (EventId x : data.sources)
    if (in_range(x)) s |= bit(x);
  for (EventId x : data.targets)
    if (in_range(x)) t |= bit(x);
  if (!diags.empty()) throw Error(std::move(diags));
  return validate(Ipomset(data.labels, prec, evord, s, t), require_interval);
}

IpomsetData to_data(const Ipomset& p) {
  IpomsetData d;
  d.labels = p.labels();
  for (int x = 0; x < p.size(); ++x) {
    for (int y = 0; y < p.size(); ++y) {
      if (p.less(x, y)) d.prec.emplace_back(x, y);
      if (p.evord(x, y)) d.evord.emplace_back(x, y);
    }
    if (p.is_source(x)) d.sources.push_back(x);
    if (p.is_target(x)) d.targets.push_back(x);
  }
  return d;
}

std::vector<EventId> canonical_order(const Ipomset& p) {
  std::vector<EventId> order;
  EventSet remaining = p.all();
  while (remaining) {
    EventSet minimal = 0;
    for (int x = 0; x < p.size(); ++x)
      if (has(remaining, x) && (p.predecessors(x) & remaining) == 0) minimal |= bit(x);
    EventId pick = -1;
    for (int x = 0; x < p.size() && pick < 0; ++x) {
      if (!has(minimal, x)) continue;
      bool least = true;
      for (int y = 0; y < p.size(); ++y)
        if (has(minimal, y) && p.evord(y, x)) least = false;
      if (least) pick = x;
    }
    order.push_back(pick);
    remaining &= ~bit(pick);
  }
  return order;
}

namespace {

EventSet permute(EventSet s, const std::vector<int>& pos) {
  EventSet out = 0;
  for (std::size_t x = 0; x < pos.size(); ++x)
    if (has(s, static_cast<int>(x))) out |= bit(pos[x]);
  return out;
}

Ipomset relabel(const Ipomset& p, const std::vector<EventId>& order) {
  int n = p.size();
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  std::vector<Label> labels(n);
  std::vector<EventSet> prec(n), evord(n);
  for (int i = 0; i < n; ++i) {
    labels[i] = p.label(order[i]);
    prec[i] = permute(p.successors(order[i]), pos);
    evord[i] = permute(p.evord_row(order[i]), pos);
  }
  return Ipomset(labels, prec, evord, permute(p.sources(), pos), permute(p.targets(), pos));
}

auto as_tuple(const Ipomset& p) {
  return std::tie(p.labels(), p.prec_rows(), p.evord_rows());
}

}  // namespace

Ipomset canonical_form(const Ipomset& p) { return relabel(p, canonical_order(p)); }

std::optional<std::vector<EventId>> isomorphism(const Ipomset& p, const Ipomset& q) {
  if (p.size() != q.size()) return std::nullopt;
  auto op = canonical_order(p);
  auto oq = canonical_order(q);
  if (!(relabel(p, op) == relabel(q, oq))) return std::nullopt;
  std::vector<EventId> map(p.size());
  for (int i = 0; i < p.size(); ++i) map[op[i]] = oq[i];
  return map;
}

bool isomorphic(const Ipomset& p, const Ipomset& q) { return isomorphism(p, q).has_value(); }

bool CanonicalLess::operator()(const Ipomset& a, const Ipomset& b) const {
  Ipomset ca = canonical_form(a), cb = canonical_form(b);
  if (ca.size() != cb.size()) return ca.size() < cb.size();
  if (as_tuple(ca) != as_tuple(cb)) return as_tuple(ca) < as_tuple(cb);
  return std::make_pair(ca.sources(), ca.targets()) < std::make_pair(cb.sources(), cb.targets());
}

namespace {

std::vector<Label> labels_of(const Ipomset& p, const std::vector<EventId>& events) {
  std::vector<Label> out;
  for (EventId x : events) out.push_back(p.label(x));
  return out;
}

}  // namespace

std::vector<Label> target_conclist(const Ipomset& p) {
  return labels_of(p, p.sorted_by_evord(p.targets()));
}

std::vector<Label> source_conclist(const Ipomset& p) {
  return labels_of(p, p.sorted_by_evord(p.sources()));
}

GlueResult glue_tracked(const Ipomset& p, const Ipomset& q) {
  auto tp = p.sorted_by_evord(p.targets());
  auto sq = q.sorted_by_evord(q.sources());
  if (labels_of(p, tp) != labels_of(q, sq))
    throw Error(Errc::interface_mismatch, "target interface of the left factor differs from the "
                                          "source interface of the right factor");
  int np = p.size();
  std::vector<EventId> map(q.size(), -1);
  for (std::size_t i = 0; i < sq.size(); ++i) map[sq[i]] = tp[i];
  int n = np;
  for (int y = 0; y < q.size(); ++y)
    if (map[y] < 0) map[y] = n++;
  if (n > kMaxEvents) throw Error(Errc::bound_exceeded, "gluing exceeds 64 events");

  std::vector<Label> labels(n);
  std::vector<EventSet> prec(n, 0), evord(n, 0);
  for (int x = 0; x < np; ++x) {
    labels[x] = p.label(x);
    prec[x] = p.successors(x);
    evord[x] = p.evord_row(x);
  }
  EventSet fresh = all_of(n) & ~all_of(np);
  for (int x = 0; x < np; ++x)
    if (!p.is_target(x)) prec[x] |= fresh;
  for (int y = 0; y < q.size(); ++y) {
    labels[map[y]] = q.label(y);
    for (int z = 0; z < q.size(); ++z) {
      if (q.less(y, z)) prec[map[y]] |= bit(map[z]);
      if (q.evord(y, z)) evord[map[y]] |= bit(map[z]);
    }
  }
  EventSet targets = 0;
  for (int y = 0; y < q.size(); ++y)
    if (q.is_target(y)) targets |= bit(map[y]);
  return {Ipomset(labels, prec, evord, p.sources(), targets), map};
}

Ipomset glue(const Ipomset& p, const Ipomset& q) { return glue_tracked(p, q).ipomset; }

Ipomset identity(const std::vector<Label>& conclist) {
  int n = static_cast<int>(conclist.size());
  std::vector<EventSet> evord(n, 0);
  for (int i = 0; i < n; ++i) evord[i] = all_of(n) & ~all_of(i + 1);
  return Ipomset(conclist, std::vector<EventSet>(n, 0), evord, all_of(n), all_of(n));
}

std::vector<std::vector<EventId>> subsumptions(const Ipomset& p, const Ipomset& q,
                                               std::size_t limit) {
  std::vector<std::vector<EventId>> found;
  int n = p.size();
  if (n != q.size() || popcount(p.sources()) != popcount(q.sources()) ||
      popcount(p.targets()) != popcount(q.targets()))
    return found;
  std::vector<EventId> f(n, -1);
  EventSet used = 0;
  auto compatible = [&](EventId x, EventId y) {
    if (p.label(x) != q.label(y) || p.is_source(x) != q.is_source(y) ||
        p.is_target(x) != q.is_target(y))
      return false;
    for (EventId z = 0; z < x; ++z) {
      EventId w = f[z];
      if (q.less(w, y) && !p.less(z, x)) return false;
      if (q.less(y, w) && !p.less(x, z)) return false;
      if (p.evord(z, x) && !q.evord(w, y)) return false;
      if (p.evord(x, z) && !q.evord(y, w)) return false;
    }
    return true;
  };
  auto search = [&](auto&& self, EventId x) -> void {
    if (found.size() >= limit) return;
    if (x == n) {
      found.push_back(f);
      return;
    }
    for (EventId y = 0; y < n; ++y) {
      if (has(used, y) || !compatible(x, y)) continue;
      f[x] = y;
      used |= bit(y);
      self(self, x + 1);
      used &= ~bit(y);
      f[x] = -1;
    }
  };
  search(search, 0);
  return found;
}

std::optional<std::vector<EventId>> subsumption(const Ipomset& p, const Ipomset& q) {
  auto all = subsumptions(p, q, 1);
  if (all.empty()) return std::nullopt;
  return all.front();
}

bool subsumes(const Ipomset& p, const Ipomset& q) { return subsumption(p, q).has_value(); }

bool is_interval(const Ipomset& p) { return two_plus_two_free(p); }

int width(const Ipomset& p) {
  auto blocks = interval_sweep(p);
  if (!blocks) throw Error(Errc::not_interval, "width requires an interval ipomset");
  int w = popcount(p.sources());
  for (const auto& b : *blocks) w = std::max(w, popcount(b.active_after | b.active_before));
  return w;
}

TransitiveIpomset to_transitive(const Ipomset& p) {
  int n = p.size();
  std::vector<EventSet> closure = p.evord_rows();
  for (int k = 0; k < n; ++k)
    for (int x = 0; x < n; ++x)
      if (has(closure[x], k)) closure[x] |= closure[k];
  return {p.labels(), p.prec_rows(), closure, p.sources(), p.targets()};
}

Ipomset from_transitive(const TransitiveIpomset& p) {
  int n = static_cast<int>(p.labels.size());
  std::vector<EventSet> evord(n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (has(p.evord[x], y) && !has(p.prec[x], y) && !has(p.prec[y], x)) evord[x] |= bit(y);
  return Ipomset(p.labels, p.prec, evord, p.sources, p.targets);
}

std::vector<Ipomset> enumerate_ipomsets(int n, const std::vector<Label>& sigma, bool interfaces,
                                        int bound) {
  if (n < 0 || n > bound)
    throw Error(Errc::bound_exceeded, "enumeration bound is " + std::to_string(bound));
  if (sigma.empty() && n > 0) return {};
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  std::vector<Ipomset> out;
  // Only structures whose peeling order is 0,1,...,n-1 are generated; every
  // isomorphism class has exactly one such representative. Peeling order is
  // a linear extension, so precedence only runs forwards.
  std::vector<EventId> identity_order(n);
  std::iota(identity_order.begin(), identity_order.end(), 0);
  for (std::uint64_t pm = 0; pm < (std::uint64_t{1} << pairs.size()); ++pm) {
    std::vector<EventSet> prec(n, 0);
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if ((pm >> k) & 1U) prec[pairs[k].first] |= bit(pairs[k].second);
    Ipomset shape(std::vector<Label>(n, sigma.front()), prec, {}, 0, 0);
    bool transitive = true;
    for (int x = 0; x < n && transitive; ++x)
      for (int y = 0; y < n; ++y)
        if (shape.less(x, y) && (shape.successors(y) & ~shape.successors(x))) transitive = false;
    if (!transitive || !two_plus_two_free(shape)) continue;

    std::vector<std::pair<int, int>> free;
    for (auto [i, j] : pairs)
      if (!has(prec[i], j)) free.push_back({i, j});
    for (std::uint64_t om = 0; om < (std::uint64_t{1} << free.size()); ++om) {
      std::vector<EventSet> evord(n, 0);
      for (std::size_t k = 0; k < free.size(); ++k) {
        auto [i, j] = free[k];
        if ((om >> k) & 1U)
          evord[j] |= bit(i);
        else
          evord[i] |= bit(j);
      }
      Ipomset skeleton(shape.labels(), prec, evord, 0, 0);
      if (!evord_acyclic(skeleton) || canonical_order(skeleton) != identity_order) continue;

      EventSet minimal = 0, maximal = 0;
      for (int x = 0; x < n; ++x) {
        if (skeleton.predecessors(x) == 0) minimal |= bit(x);
        if (skeleton.successors(x) == 0) maximal |= bit(x);
      }
      std::size_t label_count = 1;
      for (int i = 0; i < n; ++i) label_count *= sigma.size();
      for (std::size_t lc = 0; lc < label_count; ++lc) {
        std::vector<Label> labels(n);
        std::size_t code = lc;
        for (int i = 0; i < n; ++i) {
          labels[i] = sigma[code % sigma.size()];
          code /= sigma.size();
        }
        // Enumerate submasks of minimal/maximal (including empty).
        EventSet s = 0;
        while (true) {
          EventSet t = 0;
          while (true) {
            out.emplace_back(labels, prec, evord, s, t);
            if (!interfaces || t == maximal) break;
            t = (t - maximal) & maximal;
          }
          if (!interfaces || s == minimal) break;
          s = (s - minimal) & minimal;
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Ipomset& a, const Ipomset& b) {
    if (as_tuple(a) != as_tuple(b)) return as_tuple(a) < as_tuple(b);
    return std::make_pair(a.sources(), a.targets()) < std::make_pair(b.sources(), b.targets());
  });
  return out;
}

std::vector<Ipomset> enumerate_ipomsets_upto(int n, const std::vector<Label>& sigma,
                                             bool interfaces, int bound) {
  std::vector<Ipomset> out;
  for (int m = 0; m <= n; ++m) {
    auto part = enumerate_ipomsets(m, sigma, interfaces, bound);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::string describe(const Ipomset& p) {
  std::string out = "{";
  for (int x = 0; x < p.size(); ++x) {
    if (x) out += ' ';
    if (p.is_source(x)) out += '.';
    out += p.label(x);
    out += std::to_string(x + 1);
    if (p.is_target(x)) out += '.';
  }
  out += " |";
  for (int x = 0; x < p.size(); ++x)
    for (int y = 0; y < p.size(); ++y)
      if (p.less(x, y)) out += " " + std::to_string(x + 1) + "<" + std::to_string(y + 1);
  out += " |";
  for (int x = 0; x < p.size(); ++x)
    for (int y = 0; y < p.size(); ++y)
      if (p.evord(x, y)) out += " " + std::to_string(x + 1) + "=>" + std::to_string(y + 1);
  out += "}";
  return out;
}

}  // namespace ipoms
