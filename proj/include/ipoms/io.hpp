#pragma once

#include <string>
#include <string_view>

#include "ipoms/hda.hpp"
#include "ipoms/ipomset.hpp"
#include "ipoms/sta.hpp"

namespace ipoms {

// {"events":[{"id":"x1","label":"a"}],"prec":[["x1","x2"]],"evord":[...],
//  "sources":["x1"],"targets":[]}. Ids may be strings or numbers; output
// uses x1..xn in event index order.
Ipomset parse_ipomset_json(std::string_view text, bool require_interval = true);
std::string to_json(const Ipomset& p);

// {"cells":[{"id":"q1","conclist":["a","c"],
//            "faces":[{"lower":"t3","upper":"t4"},{"lower":"t1","upper":"t2"}]}],
//  "start":["t3"],"accept":["v8"]}. A face entry may omit either side.
HdaData parse_hda_json(std::string_view text);
Hda parse_hda(std::string_view text);
std::string to_json(const Hda& h);

// {"states":[{"id":"v1","conclist":[]}],
//  "edges":[{"from":"v1","letter":"[a.]","to":"t1"}],
//  "initial":["v1"],"final":["v2"]}
StAutomaton parse_sta_json(std::string_view text);
std::string to_json(const StAutomaton& a);

// Graph descriptions in the DOT language.
std::string to_dot(const Ipomset& p);
std::string to_dot(const Hda& h);
std::string to_dot(const StAutomaton& a);

std::string read_file(const std::string& path);

}  // namespace ipoms
