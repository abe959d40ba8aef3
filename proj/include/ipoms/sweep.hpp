#pragma once

#include <optional>
#include <vector>

#include "ipoms/ipomset.hpp"

namespace ipoms {

// One block of the left-to-right sweep over an ipomset: either all events that
// can start next, or all events that must terminate next.
struct SweepBlock {
  bool start = true;
  EventSet changed = 0;
  EventSet active_before = 0;
  EventSet active_after = 0;
};

// Greedy sweep producing the blocks of the sparse step decomposition.
// Blocks alternate between starting and terminating. Returns nullopt when the
// sweep gets stuck, which happens exactly for non-interval ipomsets.
std::optional<std::vector<SweepBlock>> interval_sweep(const Ipomset& p);

}  // namespace ipoms
