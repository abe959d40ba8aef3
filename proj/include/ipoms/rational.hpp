#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ipoms/ipomset.hpp"
#include "ipoms/step.hpp"

namespace ipoms {

struct RationalExpr;
using RationalPtr = std::shared_ptr<const RationalExpr>;

struct RationalExpr {
  enum class Kind { empty, unit, literal, alt, glue, plus };
  Kind kind = Kind::empty;
  Step literal;
  std::vector<RationalPtr> kids;
};

// Syntax: 0 (empty language) | 1 (identity on the empty conclist) | a step
// such as [a, .b.] or a bare label | e | f | e * f | e+ | (e). Gluing binds
// tighter than choice; + is postfix. Throws PARSE_ERROR.
RationalPtr parse_rational(std::string_view text);
std::string to_string(const RationalPtr& e);

using IpomsetSet = std::set<Ipomset, CanonicalLess>;

inline constexpr int kMaxRationalEvents = 6;

// Downward closure under subsumption of one ipomset, in canonical forms.
IpomsetSet subsumption_closure(const Ipomset& p);

// Members with at most n events, each subexpression closed under
// subsumption. Throws BOUND_EXCEEDED for n > kMaxRationalEvents.
IpomsetSet rational_eval(const RationalPtr& e, int n);

}  // namespace ipoms
