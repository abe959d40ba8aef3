#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ipoms/ipomset.hpp"

namespace ipoms {

using Conclist = std::vector<Label>;

// Discrete ipomset given by its conclist (labels in event order) and the
// positions belonging to the source and target interfaces.
// Text form: "[.a., c.]", leading dot = source, trailing dot = target.
struct Step {
  Conclist labels;
  EventSet sources = 0;
  EventSet targets = 0;

  int size() const { return static_cast<int>(labels.size()); }
  EventSet all() const { return all_of(size()); }
  EventSet started() const { return all() & ~sources; }
  EventSet terminated() const { return all() & ~targets; }

  bool is_starter() const { return targets == all(); }
  bool is_terminator() const { return sources == all(); }
  bool is_identity() const { return is_starter() && is_terminator(); }
  // Member of the alphabet of starters and terminators.
  bool in_omega() const { return is_starter() || is_terminator(); }
  bool is_proper_starter() const { return is_starter() && !is_identity(); }
  bool is_proper_terminator() const { return is_terminator() && !is_identity(); }
  bool is_elementary() const { return in_omega() && popcount(started() | terminated()) == 1; }

  Conclist source_conclist() const;
  Conclist target_conclist() const;

  auto operator<=>(const Step&) const = default;
};

Step make_starter(Conclist labels, EventSet started);
Step make_terminator(Conclist labels, EventSet terminated);
Step make_identity(Conclist labels);

// Sub-conclist on the positions in `keep`; interface masks are given in the
// position space of `s` and are renumbered.
Step restrict_step(const Step& s, EventSet keep, EventSet sources, EventSet targets);

Ipomset to_ipomset(const Step& s);
// Requires a discrete ipomset.
Step to_step(const Ipomset& discrete);

Step parse_step(std::string_view text);
std::string to_string(const Step& s);

// Gluing of two starters or two terminators, computed on conclists.
Step glue_steps(const Step& a, const Step& b);

// Starters and terminators over sigma with at most k events, in a fixed order.
std::vector<Step> omega(const std::vector<Label>& sigma, int k);

// Materialized alphabet of starters and terminators with letter indices.
class Alphabet {
 public:
  Alphabet(std::vector<Label> sigma, int k);

  const std::vector<Label>& sigma() const { return sigma_; }
  int k() const { return k_; }
  int size() const { return static_cast<int>(letters_.size()); }
  const Step& letter(int i) const { return letters_[i]; }
  const std::vector<Step>& letters() const { return letters_; }
  std::optional<int> index(const Step& s) const;
  // Throws ALPHABET_MISMATCH for letters outside the alphabet.
  int require(const Step& s) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.sigma_ == b.sigma_ && a.k_ == b.k_;
  }

 private:
  std::vector<Label> sigma_;
  int k_ = 0;
  std::vector<Step> letters_;
  std::map<Step, int> index_;
};

}  // namespace ipoms
