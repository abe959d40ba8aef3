#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ipoms/ipomset.hpp"
#include "ipoms/step.hpp"
#include "ipoms/stepseq.hpp"

namespace ipoms {

// Unchecked HDA description. Faces are given per conclist position as cell
// names; an empty name means the face is undefined.
struct HdaData {
  struct Face {
    std::string lower;
    std::string upper;
  };
  struct Cell {
    std::string name;
    Conclist conclist;
    std::vector<Face> faces;
  };
  std::vector<Cell> cells;
  std::vector<std::string> start;
  std::vector<std::string> accept;
};

// Finite HDA. Only singleton faces are stored; δ^ν_A is their composite.
class Hda {
 public:
  struct Cell {
    std::string name;
    Conclist conclist;
    // Singleton faces by position, -1 when undefined.
    std::vector<int> lower;
    std::vector<int> upper;
  };

  int size() const { return static_cast<int>(cells_.size()); }
  const Cell& cell(int q) const { return cells_[q]; }
  const Conclist& ev(int q) const { return cells_[q].conclist; }
  const std::string& name(int q) const { return cells_[q].name; }
  std::optional<int> find(std::string_view name) const;
  const std::vector<int>& start() const { return start_; }
  const std::vector<int>& accept() const { return accept_; }
  bool is_start(int q) const;
  bool is_accept(int q) const;

  // δ⁰_A(q) or δ¹_A(q) for a position mask A of ev(q); -1 when undefined.
  int face(int q, EventSet a, bool upper) const;
  int dimension() const;
  // Labels occurring in some conclist, sorted.
  std::vector<Label> labels() const;

 private:
  friend Hda validate_hda(const HdaData& data);
  std::vector<Cell> cells_;
  std::vector<int> start_;
  std::vector<int> accept_;
  std::map<std::string, int, std::less<>> index_;
};

// Checks face types, precubical identities for every pair of positions and
// both face kinds, and start/accept references. Throws Error listing every
// violation.
Hda validate_hda(const HdaData& data);
HdaData to_data(const Hda& h);

// An upstep enters `cell` starting the positions `events` of ev(cell); a
// downstep leaves the previous cell terminating the positions `events` of its
// conclist and arrives at `cell`.
struct PathStep {
  bool up = true;
  EventSet events = 0;
  int cell = -1;
  friend bool operator==(const PathStep&, const PathStep&) = default;
};

struct Path {
  int start = -1;
  std::vector<PathStep> steps;
  int target() const { return steps.empty() ? start : steps.back().cell; }
  friend bool operator==(const Path&, const Path&) = default;
};

// Throws INVALID_PATH when a step does not match the face maps.
void check_path(const Hda& h, const Path& path);
// Discrete ipomsets of the steps; the single-cell path gives id_{ev(q)}.
StepWord path_word(const Hda& h, const Path& path);
Ipomset ev_path(const Hda& h, const Path& path);

// Text form "t3 +a q1 -c t2"; "+{0,1}" selects positions explicitly.
Path parse_path(const Hda& h, std::string_view text);
std::string to_string(const Hda& h, const Path& path);

// Accepting paths with at most max_steps non-identity steps, depth-first
// from the start cells in index order.
std::vector<Path> accepting_paths(const Hda& h, int max_steps, std::size_t limit = SIZE_MAX);

// Event ipomsets of accepting paths with at most max_steps non-identity
// steps, one per isomorphism class, sorted by CanonicalLess.
std::vector<Ipomset> language_enum(const Hda& h, int max_steps);

}  // namespace ipoms
