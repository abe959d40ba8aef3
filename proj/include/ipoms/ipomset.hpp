#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ipoms/error.hpp"

namespace ipoms {

// Event labels are single alphanumeric characters.
using Label = char;
using EventId = int;
// Bitset over event indices (or over positions of a conclist).
using EventSet = std::uint64_t;

inline constexpr int kMaxEvents = 64;

inline constexpr EventSet bit(int i) { return EventSet{1} << i; }
inline constexpr bool has(EventSet s, int i) { return (s >> i) & 1U; }
inline constexpr EventSet all_of(int n) { return n >= 64 ? ~EventSet{0} : bit(n) - 1; }
inline int popcount(EventSet s) { return std::popcount(s); }

bool is_label(char c);

// Unchecked ipomset description, as read from a file or built by hand.
struct IpomsetData {
  std::vector<Label> labels;
  std::vector<std::pair<EventId, EventId>> prec;
  std::vector<std::pair<EventId, EventId>> evord;
  std::vector<EventId> sources;
  std::vector<EventId> targets;
};

// Ipomset with essential event order. Events are 0..size()-1.
// Instances returned by library functions are valid; the raw constructor does
// no checking (see check()).
class Ipomset {
 public:
  Ipomset() = default;
  Ipomset(std::vector<Label> labels, std::vector<EventSet> prec, std::vector<EventSet> evord,
          EventSet sources, EventSet targets);

  int size() const { return static_cast<int>(labels_.size()); }
  bool empty() const { return labels_.empty(); }
  EventSet all() const { return all_of(size()); }

  Label label(EventId x) const { return labels_[x]; }
  const std::vector<Label>& labels() const { return labels_; }

  bool less(EventId x, EventId y) const { return has(prec_[x], y); }
  bool evord(EventId x, EventId y) const { return has(evord_[x], y); }
  bool concurrent(EventId x, EventId y) const { return x != y && !less(x, y) && !less(y, x); }

  // Row x holds {y : x < y}, resp. {y : x ⇛ y}.
  EventSet successors(EventId x) const { return prec_[x]; }
  EventSet predecessors(EventId y) const;
  EventSet evord_row(EventId x) const { return evord_[x]; }
  const std::vector<EventSet>& prec_rows() const { return prec_; }
  const std::vector<EventSet>& evord_rows() const { return evord_; }

  EventSet sources() const { return sources_; }
  EventSet targets() const { return targets_; }
  bool is_source(EventId x) const { return has(sources_, x); }
  bool is_target(EventId x) const { return has(targets_, x); }

  bool is_discrete() const;
  bool is_identity() const { return is_discrete() && sources_ == all() && targets_ == all(); }

  // Event order restricted to an antichain, listed ascending.
  std::vector<EventId> sorted_by_evord(EventSet antichain) const;

  // Structural equality on concrete data (not isomorphism).
  friend bool operator==(const Ipomset&, const Ipomset&) = default;

 private:
  std::vector<Label> labels_;
  std::vector<EventSet> prec_;
  std::vector<EventSet> evord_;
  EventSet sources_ = 0;
  EventSet targets_ = 0;
};

// All violated invariants; empty when valid.
std::vector<Diagnostic> check(const Ipomset& p, bool require_interval = true);

// Builds a checked ipomset; throws Error listing every violation.
Ipomset validate(const IpomsetData& data, bool require_interval = true);
Ipomset validate(const Ipomset& raw, bool require_interval = true);

IpomsetData to_data(const Ipomset& p);

// Peeling order: repeatedly the ⇛-least of the <-minimal remaining events.
std::vector<EventId> canonical_order(const Ipomset& p);

// Events renumbered along canonical_order. Isomorphic ipomsets have equal forms.
Ipomset canonical_form(const Ipomset& p);

// Unique isomorphism P -> Q as map[x] = f(x), if any.
std::optional<std::vector<EventId>> isomorphism(const Ipomset& p, const Ipomset& q);
bool isomorphic(const Ipomset& p, const Ipomset& q);

// Total order on canonical forms; usable as a set key.
struct CanonicalLess {
  bool operator()(const Ipomset& a, const Ipomset& b) const;
};

// Target interface resp. source interface as conclists (labels in event order).
std::vector<Label> target_conclist(const Ipomset& p);
std::vector<Label> source_conclist(const Ipomset& p);

struct GlueResult {
  Ipomset ipomset;
  // Event of the result for each event of the right factor.
  std::vector<EventId> right_map;
};

// P keeps its event ids; right-only events are appended.
GlueResult glue_tracked(const Ipomset& p, const Ipomset& q);
Ipomset glue(const Ipomset& p, const Ipomset& q);

// Identity on a conclist.
Ipomset identity(const std::vector<Label>& conclist);

// Subsumption witnesses f : P -> Q (P ⊑ Q), as map[x] = f(x), in search order.
std::vector<std::vector<EventId>> subsumptions(const Ipomset& p, const Ipomset& q,
                                               std::size_t limit = SIZE_MAX);
std::optional<std::vector<EventId>> subsumption(const Ipomset& p, const Ipomset& q);
bool subsumes(const Ipomset& p, const Ipomset& q);

bool is_interval(const Ipomset& p);
// Size of a maximal precedence antichain. Requires an interval ipomset.
int width(const Ipomset& p);

// Ipomset whose event order is transitively closed (and may relate comparable events).
struct TransitiveIpomset {
  std::vector<Label> labels;
  std::vector<EventSet> prec;
  std::vector<EventSet> evord;
  EventSet sources = 0;
  EventSet targets = 0;
  friend bool operator==(const TransitiveIpomset&, const TransitiveIpomset&) = default;
};

TransitiveIpomset to_transitive(const Ipomset& p);
Ipomset from_transitive(const TransitiveIpomset& p);

// Interval ipomsets with exactly n events over sigma, one per isomorphism class,
// in canonical form and sorted by CanonicalLess.
std::vector<Ipomset> enumerate_ipomsets(int n, const std::vector<Label>& sigma, bool interfaces,
                                        int bound = 5);
std::vector<Ipomset> enumerate_ipomsets_upto(int n, const std::vector<Label>& sigma,
                                             bool interfaces, int bound = 5);

// Short human-readable rendering, e.g. "a<b, .c ; evord a=>c".
std::string describe(const Ipomset& p);

}  // namespace ipoms
