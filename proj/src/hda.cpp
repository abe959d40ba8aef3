#include "ipoms/hda.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ipoms {

std::optional<int> Hda::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Hda::is_start(int q) const { return std::find(start_.begin(), start_.end(), q) != start_.end(); }

bool Hda::is_accept(int q) const {
  return std::find(accept_.begin(), accept_.end(), q) != accept_.end();
}

int Hda::face(int q, EventSet a, bool upper) const {
  int removed = 0;
  for (int pos = 0; q >= 0 && a >> pos; ++pos) {
    if (!has(a, pos)) continue;
    const Cell& c = cells_[q];
    q = (upper ? c.upper : c.lower)[pos - removed];
    ++removed;
  }
  return q;
}

int Hda::dimension() const {
  int d = 0;
  for (const Cell& c : cells_) d = std::max(d, static_cast<int>(c.conclist.size()));
  return d;
}

std::vector<Label> Hda::labels() const {
  std::set<Label> out;
  for (const Cell& c : cells_) out.insert(c.conclist.begin(), c.conclist.end());
  return {out.begin(), out.end()};
}

namespace {

Conclist without(const Conclist& u, int pos) {
  Conclist out = u;
  out.erase(out.begin() + pos);
  return out;
}

std::string show(const Conclist& u) { return to_string(make_identity(u)); }

}  // namespace

Hda validate_hda(const HdaData& data) {
  Hda h;
  std::vector<Diagnostic> diags;
  for (const auto& c : data.cells) {
    if (!h.index_.emplace(c.name, static_cast<int>(h.cells_.size())).second)
      diags.push_back({Errc::parse_error, "duplicate cell " + c.name});
    for (Label l : c.conclist)
      if (!is_label(l)) diags.push_back({Errc::parse_error, "bad label in cell " + c.name});
    h.cells_.push_back({c.name, c.conclist, {}, {}});
  }
  if (!diags.empty()) throw Error(diags);

  auto resolve = [&](const std::string& name, const std::string& where) {
    if (name.empty()) return -1;
    auto q = h.find(name);
    if (!q) {
      diags.push_back({Errc::face_type_mismatch, where + " names unknown cell " + name});
      return -1;
    }
    return *q;
  };
  for (std::size_t q = 0; q < data.cells.size(); ++q) {
    const auto& c = data.cells[q];
    auto& cell = h.cells_[q];
    int n = static_cast<int>(c.conclist.size());
    if (static_cast<int>(c.faces.size()) != n) {
      diags.push_back({Errc::face_type_mismatch,
                       "cell " + c.name + " has " + std::to_string(c.faces.size()) +
                           " face pairs for " + std::to_string(n) + " events"});
      cell.lower.assign(n, -1);
      cell.upper.assign(n, -1);
      continue;
    }
    for (int i = 0; i < n; ++i) {
      std::string where = "face " + std::to_string(i) + " of " + c.name;
      int lo = resolve(c.faces[i].lower, "lower " + where);
      int up = resolve(c.faces[i].upper, "upper " + where);
      Conclist expected = without(c.conclist, i);
      for (int f : {lo, up})
        if (f >= 0 && h.cells_[f].conclist != expected)
          diags.push_back({Errc::face_type_mismatch, where + " is " + h.cells_[f].name +
                                                         " of type " + show(h.cells_[f].conclist) +
                                                         ", expected " + show(expected)});
      cell.lower.push_back(lo);
      cell.upper.push_back(up);
    }
  }
  if (!diags.empty()) throw Error(diags);

  // δ^ν_i δ^μ_j = δ^μ_j δ^ν_i, with positions renumbered after each removal.
  auto single = [&](int q, int pos, bool upper) {
    if (q < 0) return -1;
    return (upper ? h.cells_[q].upper : h.cells_[q].lower)[pos];
  };
  for (int q = 0; q < h.size(); ++q) {
    int n = static_cast<int>(h.cells_[q].conclist.size());
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (bool nu : {false, true})
          for (bool mu : {false, true}) {
            int lhs = single(single(q, j, mu), i, nu);
            int rhs = single(single(q, i, nu), j - 1, mu);
            if (lhs == rhs) continue;
            auto name = [&](int c) { return c < 0 ? std::string("undefined") : h.cells_[c].name; };
            diags.push_back({Errc::precubical_identity_violation,
                             "cell " + h.cells_[q].name + ": faces " + std::to_string(i) +
                                 (nu ? "+" : "-") + " and " + std::to_string(j) + (mu ? "+" : "-") +
                                 " give " + name(rhs) + " and " + name(lhs)});
          }
  }
  for (auto [list, out, what] : {std::tuple{&data.start, &h.start_, "start"},
                                 std::tuple{&data.accept, &h.accept_, "accept"}}) {
    std::set<int> seen;
    for (const auto& name : *list) {
      auto q = h.find(name);
      if (!q)
        diags.push_back({Errc::dangling_start_accept, std::string(what) + " cell " + name});
      else if (seen.insert(*q).second)
        out->push_back(*q);
    }
    std::sort(out->begin(), out->end());
  }
  if (!diags.empty()) throw Error(diags);
  return h;
}

HdaData to_data(const Hda& h) {
  HdaData d;
  for (int q = 0; q < h.size(); ++q) {
    const auto& c = h.cell(q);
    HdaData::Cell out{c.name, c.conclist, {}};
    for (std::size_t i = 0; i < c.conclist.size(); ++i)
      out.faces.push_back({c.lower[i] < 0 ? "" : h.name(c.lower[i]),
                           c.upper[i] < 0 ? "" : h.name(c.upper[i])});
    d.cells.push_back(std::move(out));
  }
  for (int q : h.start()) d.start.push_back(h.name(q));
  for (int q : h.accept()) d.accept.push_back(h.name(q));
  return d;
}

void check_path(const Hda& h, const Path& path) {
  auto fail = [&](const std::string& msg) { throw Error(Errc::invalid_path, msg); };
  if (path.start < 0 || path.start >= h.size()) fail("unknown start cell");
  int prev = path.start;
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const PathStep& s = path.steps[i];
    std::string where = "step " + std::to_string(i + 1);
    if (s.cell < 0 || s.cell >= h.size()) fail(where + ": unknown cell");
    int owner = s.up ? s.cell : prev;
    if (s.events & ~all_of(static_cast<int>(h.ev(owner).size())))
      fail(where + ": events outside " + h.name(owner));
    bool ok = s.up ? h.face(s.cell, s.events, false) == prev
                   : h.face(prev, s.events, true) == s.cell;
    if (!ok)
      fail(where + ": " + h.name(prev) + (s.up ? " is not a lower face of " : " has no upper face ") +
           h.name(s.cell));
    prev = s.cell;
  }
}

StepWord path_word(const Hda& h, const Path& path) {
  check_path(h, path);
  if (path.steps.empty()) return {make_identity(h.ev(path.start))};
  StepWord w;
  int prev = path.start;
  for (const PathStep& s : path.steps) {
    if (s.up)
      w.push_back(make_starter(h.ev(s.cell), s.events));
    else
      w.push_back(make_terminator(h.ev(prev), s.events));
    prev = s.cell;
  }
  return w;
}

Ipomset ev_path(const Hda& h, const Path& path) { return glue_word(path_word(h, path)); }

namespace {

// Event selection in the text form: labels when each named label is taken
// with all its occurrences, otherwise explicit positions.
std::string selection(const Conclist& u, EventSet a) {
  bool by_label = true;
  std::string labels;
  for (int i = 0; i < static_cast<int>(u.size()); ++i) {
    if (!has(a, i)) continue;
    labels += u[i];
    for (int j = 0; j < static_cast<int>(u.size()); ++j)
      if (u[j] == u[i] && !has(a, j)) by_label = false;
  }
  if (by_label && !labels.empty()) return labels;
  std::string out = "{";
  for (int i = 0; i < static_cast<int>(u.size()); ++i)
    if (has(a, i)) out += (out.size() > 1 ? "," : "") + std::to_string(i);
  return out + "}";
}

EventSet parse_selection(const Conclist& u, const std::string& tok) {
  auto fail = [&] { throw Error(Errc::parse_error, "bad event selection \"" + tok + "\""); };
  EventSet a = 0;
  if (!tok.empty() && tok.front() == '{') {
    if (tok.back() != '}') fail();
    std::istringstream in(tok.substr(1, tok.size() - 2));
    std::string item;
    while (std::getline(in, item, ',')) {
      int pos = -1;
      try {
        pos = std::stoi(item);
      } catch (const std::exception&) {
        fail();
      }
      if (pos < 0 || pos >= static_cast<int>(u.size())) fail();
      a |= bit(pos);
    }
    return a;
  }
  for (char l : tok) {
    bool found = false;
    for (int i = 0; i < static_cast<int>(u.size()); ++i)
      if (u[i] == l) {
        a |= bit(i);
        found = true;
      }
    if (!found) fail();
  }
  return a;
}

}  // namespace

Path parse_path(const Hda& h, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> toks;
  for (std::string t; in >> t;) toks.push_back(t);
  auto cell = [&](const std::string& name) {
    auto q = h.find(name);
    if (!q) throw Error(Errc::invalid_path, "unknown cell " + name);
    return *q;
  };
  if (toks.empty() || toks.size() % 2 == 0)
    throw Error(Errc::parse_error, "path must alternate cells and steps");
  Path p;
  p.start = cell(toks[0]);
  int prev = p.start;
  for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
    const std::string& op = toks[i];
    if (op.size() < 2 || (op[0] != '+' && op[0] != '-'))
      throw Error(Errc::parse_error, "bad step \"" + op + "\"");
    PathStep s;
    s.up = op[0] == '+';
    s.cell = cell(toks[i + 1]);
    s.events = parse_selection(h.ev(s.up ? s.cell : prev), op.substr(1));
    p.steps.push_back(s);
    prev = s.cell;
  }
  check_path(h, p);
  return p;
}

std::string to_string(const Hda& h, const Path& path) {
  std::string out = h.name(path.start);
  int prev = path.start;
  for (const PathStep& s : path.steps) {
    out += s.up ? " +" : " -";
    out += selection(h.ev(s.up ? s.cell : prev), s.events);
    out += " " + h.name(s.cell);
    prev = s.cell;
  }
  return out;
}

namespace {

// Non-identity steps leaving each cell, in a fixed order.
std::vector<std::vector<PathStep>> moves(const Hda& h) {
  std::vector<std::vector<PathStep>> out(h.size());
  for (int p = 0; p < h.size(); ++p) {
    EventSet full = all_of(static_cast<int>(h.ev(p).size()));
    for (EventSet a = 1; a <= full && full; ++a) {
      int lo = h.face(p, a, false);
      if (lo >= 0) out[lo].push_back({true, a, p});
    }
  }
  for (int q = 0; q < h.size(); ++q) {
    EventSet full = all_of(static_cast<int>(h.ev(q).size()));
    for (EventSet a = 1; a <= full && full; ++a) {
      int up = h.face(q, a, true);
      if (up >= 0) out[q].push_back({false, a, up});
    }
  }
  return out;
}

}  // namespace

std::vector<Path> accepting_paths(const Hda& h, int max_steps, std::size_t limit) {
  auto next = moves(h);
  std::vector<Path> out;
  Path cur;
  auto rec = [&](auto&& self, int q) -> void {
    if (out.size() >= limit) return;
    if (h.is_accept(q)) out.push_back(cur);
    if (static_cast<int>(cur.steps.size()) == max_steps) return;
    for (const PathStep& s : next[q]) {
      cur.steps.push_back(s);
      self(self, s.cell);
      cur.steps.pop_back();
    }
  };
  for (int q : h.start()) {
    cur.start = q;
    rec(rec, q);
  }
  return out;
}

std::vector<Ipomset> language_enum(const Hda& h, int max_steps) {
  auto next = moves(h);
  using Key = std::pair<int, Ipomset>;
  auto key_less = [](const Key& a, const Key& b) {
    if (a.first != b.first) return a.first < b.first;
    return CanonicalLess{}(a.second, b.second);
  };
  std::set<Key, decltype(key_less)> seen(key_less);
  std::set<Ipomset, CanonicalLess> lang;
  std::vector<Key> frontier;
  for (int q : h.start()) {
    Key k{q, identity(h.ev(q))};
    if (seen.insert(k).second) frontier.push_back(k);
  }
  for (int depth = 0;; ++depth) {
    for (const auto& [q, p] : frontier)
      if (h.is_accept(q)) lang.insert(p);
    if (depth == max_steps) break;
    std::vector<Key> grown;
    for (const auto& [q, p] : frontier) {
      for (const PathStep& s : next[q]) {
        Step letter = s.up ? make_starter(h.ev(s.cell), s.events)
                           : make_terminator(h.ev(q), s.events);
        Key k{s.cell, canonical_form(glue(p, to_ipomset(letter)))};
        if (seen.insert(k).second) grown.push_back(std::move(k));
      }
    }
    frontier = std::move(grown);
  }
  return {lang.begin(), lang.end()};
}

}  // namespace ipoms
