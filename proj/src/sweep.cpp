#include "ipoms/sweep.hpp"

namespace ipoms {

std::optional<std::vector<SweepBlock>> interval_sweep(const Ipomset& p) {
  std::vector<SweepBlock> blocks;
  EventSet active = p.sources();
  EventSet done = 0;
  EventSet unstarted = p.all() & ~p.sources();
  while (unstarted || (active & ~p.targets())) {
    EventSet startable = 0;
    for (int y = 0; y < p.size(); ++y)
      if (has(unstarted, y) && (p.predecessors(y) & ~done) == 0) startable |= bit(y);
    if (startable) {
      blocks.push_back({true, startable, active, active | startable});
      active |= startable;
      unstarted &= ~startable;
      continue;
    }
    // An event may end only once it precedes everything not yet started.
    EventSet ending = 0;
    for (int x = 0; x < p.size(); ++x)
      if (has(active & ~p.targets(), x) && (unstarted & ~p.successors(x)) == 0) ending |= bit(x);
    if (!ending) return std::nullopt;
    blocks.push_back({false, ending, active, active & ~ending});
    active &= ~ending;
    done |= ending;
  }
  return blocks;
}

}  // namespace ipoms
