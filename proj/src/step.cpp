#include "ipoms/step.hpp"

#include <cctype>

namespace ipoms {

namespace {

Conclist labels_at(const Step& s, EventSet positions) {
  Conclist out;
  for (int i = 0; i < s.size(); ++i)
    if (has(positions, i)) out.push_back(s.labels[i]);
  return out;
}

// Position of the i-th set bit of mask.
int nth_bit(EventSet mask, int i) {
  for (int p = 0; p < 64; ++p)
    if (has(mask, p) && i-- == 0) return p;
  return -1;
}

}  // namespace

Conclist Step::source_conclist() const { return labels_at(*this, sources); }
Conclist Step::target_conclist() const { return labels_at(*this, targets); }

Step make_starter(Conclist labels, EventSet started) {
  Step s{std::move(labels), 0, 0};
  s.targets = s.all();
  s.sources = s.all() & ~started;
  return s;
}

Step make_terminator(Conclist labels, EventSet terminated) {
  Step s{std::move(labels), 0, 0};
  s.sources = s.all();
  s.targets = s.all() & ~terminated;
  return s;
}

Step make_identity(Conclist labels) { return make_starter(std::move(labels), 0); }

Step restrict_step(const Step& s, EventSet keep, EventSet sources, EventSet targets) {
  Step out;
  for (int i = 0; i < s.size(); ++i) {
    if (!has(keep, i)) continue;
    int j = out.size();
    out.labels.push_back(s.labels[i]);
    if (has(sources, i)) out.sources |= bit(j);
    if (has(targets, i)) out.targets |= bit(j);
  }
  return out;
}

Ipomset to_ipomset(const Step& s) {
  int n = s.size();
  std::vector<EventSet> evord(n, 0);
  for (int i = 0; i < n; ++i) evord[i] = all_of(n) & ~all_of(i + 1);
  return Ipomset(s.labels, std::vector<EventSet>(n, 0), evord, s.sources, s.targets);
}

Step to_step(const Ipomset& p) {
  if (!p.is_discrete()) throw Error(Errc::invalid_argument, "ipomset is not discrete");
  Step s;
  auto order = p.sorted_by_evord(p.all());
  for (std::size_t i = 0; i < order.size(); ++i) {
    s.labels.push_back(p.label(order[i]));
    if (p.is_source(order[i])) s.sources |= bit(static_cast<int>(i));
    if (p.is_target(order[i])) s.targets |= bit(static_cast<int>(i));
  }
  return s;
}

Step parse_step(std::string_view text) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&](const std::string& what) -> Error {
    return Error(Errc::parse_error,
                 what + " in step \"" + std::string(text) + "\" at offset " + std::to_string(i));
  };
  skip();
  if (i >= text.size() || text[i] != '[') throw fail("expected '['");
  ++i;
  Step s;
  skip();
  if (i < text.size() && text[i] == ']') {
    ++i;
  } else {
    while (true) {
      skip();
      bool source = false, target = false;
      if (i < text.size() && text[i] == '.') {
        source = true;
        ++i;
      }
      if (i >= text.size() || !is_label(text[i])) throw fail("expected label");
      Label l = text[i++];
      if (i < text.size() && text[i] == '.') {
        target = true;
        ++i;
      }
      int pos = s.size();
      if (pos >= kMaxEvents) throw fail("too many events");
      s.labels.push_back(l);
      if (source) s.sources |= bit(pos);
      if (target) s.targets |= bit(pos);
      skip();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == ']') {
        ++i;
        break;
      }
      throw fail("expected ',' or ']'");
    }
  }
  skip();
  if (i != text.size()) throw fail("trailing characters");
  return s;
}

std::string to_string(const Step& s) {
  std::string out = "[";
  for (int i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    if (has(s.sources, i)) out += '.';
    out += s.labels[i];
    if (has(s.targets, i)) out += '.';
  }
  return out + "]";
}

Step glue_steps(const Step& a, const Step& b) {
  if (a.target_conclist() != b.source_conclist())
    throw Error(Errc::interface_mismatch, to_string(a) + " * " + to_string(b));
  if (a.is_starter() && b.is_starter()) {
    Step out{b.labels, 0, b.all()};
    for (int i = 0; i < a.size(); ++i)
      if (has(a.sources, i)) out.sources |= bit(nth_bit(b.sources, i));
    return out;
  }
  if (a.is_terminator() && b.is_terminator()) {
    Step out{a.labels, a.all(), 0};
    for (int j = 0; j < b.size(); ++j)
      if (has(b.targets, j)) out.targets |= bit(nth_bit(a.targets, j));
    return out;
  }
  throw Error(Errc::invalid_argument, "glue_steps needs two starters or two terminators");
}

std::vector<Step> omega(const std::vector<Label>& sigma, int k) {
  std::vector<Step> out;
  if (k < 0) return out;
  for (int m = 0; m <= k; ++m) {
    if (m > 0 && sigma.empty()) break;
    std::size_t count = 1;
    for (int i = 0; i < m; ++i) count *= sigma.size();
    for (std::size_t code = 0; code < count; ++code) {
      Conclist labels(m);
      std::size_t c = code;
      for (int i = m - 1; i >= 0; --i) {
        labels[i] = sigma[c % sigma.size()];
        c /= sigma.size();
      }
      EventSet all = all_of(m);
      out.push_back(make_identity(labels));
      for (EventSet started = 1; started <= all && m > 0; ++started)
        out.push_back(make_starter(labels, started));
      for (EventSet ended = 1; ended <= all && m > 0; ++ended)
        out.push_back(make_terminator(labels, ended));
    }
  }
  return out;
}

Alphabet::Alphabet(std::vector<Label> sigma, int k)
    : sigma_(std::move(sigma)), k_(k), letters_(omega(sigma_, k)) {
  for (std::size_t i = 0; i < letters_.size(); ++i) index_[letters_[i]] = static_cast<int>(i);
}

std::optional<int> Alphabet::index(const Step& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Alphabet::require(const Step& s) const {
  auto i = index(s);
  if (!i) throw Error(Errc::alphabet_mismatch, "letter " + to_string(s) + " not in alphabet");
  return *i;
}

}  // namespace ipoms
