#include "ipoms/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace ipoms {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(Errc::parse_error, msg); }

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("json: ") + e.what());
  }
}

std::string id_string(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  fail("ids must be strings or integers");
}

Label label_of(const json& j) {
  if (!j.is_string() || j.get<std::string>().size() != 1) fail("labels are one-character strings");
  return j.get<std::string>()[0];
}

Conclist conclist_of(const json& j) {
  Conclist u;
  if (j.is_string()) {
    for (char c : j.get<std::string>()) u.push_back(c);
    return u;
  }
  if (!j.is_array()) fail("conclist must be a list of labels");
  for (const auto& l : j) u.push_back(label_of(l));
  return u;
}

json conclist_json(const Conclist& u) {
  json out = json::array();
  for (Label l : u) out.push_back(std::string(1, l));
  return out;
}

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing \"") + key + "\"");
  return j.at(key);
}

std::vector<std::string> names_of(const json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) fail(std::string("\"") + key + "\" must be a list");
  for (const auto& x : j.at(key)) out.push_back(id_string(x));
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Ipomset parse_ipomset_json(std::string_view text, bool require_interval) {
  json j = parse(text);
  IpomsetData d;
  std::map<std::string, EventId> ids;
  for (const auto& e : member(j, "events")) {
    std::string id = id_string(member(e, "id"));
    if (!ids.emplace(id, static_cast<EventId>(d.labels.size())).second) fail("duplicate event " + id);
    d.labels.push_back(label_of(member(e, "label")));
  }
  auto event = [&](const json& x) {
    auto it = ids.find(id_string(x));
    if (it == ids.end()) fail("unknown event " + id_string(x));
    return it->second;
  };
  auto pairs = [&](const char* key, auto& out) {
    if (!j.contains(key)) return;
    for (const auto& p : j.at(key)) {
      if (!p.is_array() || p.size() != 2) fail(std::string(key) + " entries are pairs");
      out.emplace_back(event(p[0]), event(p[1]));
    }
  };
  pairs("prec", d.prec);
  pairs("evord", d.evord);
  for (const auto& s : names_of(j, "sources")) d.sources.push_back(event(s));
  for (const auto& t : names_of(j, "targets")) d.targets.push_back(event(t));
  return validate(d, require_interval);
}

std::string to_json(const Ipomset& p) {
  auto id = [](EventId x) { return "x" + std::to_string(x + 1); };
  json j;
  j["events"] = json::array();
  for (EventId x = 0; x < p.size(); ++x)
    j["events"].push_back({{"id", id(x)}, {"label", std::string(1, p.label(x))}});
  j["prec"] = json::array();
  j["evord"] = json::array();
  j["sources"] = json::array();
  j["targets"] = json::array();
  for (EventId x = 0; x < p.size(); ++x) {
    for (EventId y = 0; y < p.size(); ++y) {
      if (p.less(x, y)) j["prec"].push_back({id(x), id(y)});
      if (p.evord(x, y)) j["evord"].push_back({id(x), id(y)});
    }
    if (p.is_source(x)) j["sources"].push_back(id(x));
    if (p.is_target(x)) j["targets"].push_back(id(x));
  }
  return j.dump(2);
}

HdaData parse_hda_json(std::string_view text) {
  json j = parse(text);
  HdaData d;
  for (const auto& c : member(j, "cells")) {
    HdaData::Cell cell{id_string(member(c, "id")), conclist_of(member(c, "conclist")), {}};
    if (c.contains("faces")) {
      for (const auto& f : c.at("faces")) {
        HdaData::Face face;
        if (f.contains("lower") && !f.at("lower").is_null()) face.lower = id_string(f.at("lower"));
        if (f.contains("upper") && !f.at("upper").is_null()) face.upper = id_string(f.at("upper"));
        cell.faces.push_back(face);
      }
    }
    d.cells.push_back(std::move(cell));
  }
  d.start = names_of(j, "start");
  d.accept = names_of(j, "accept");
  return d;
}

Hda parse_hda(std::string_view text) { return validate_hda(parse_hda_json(text)); }

std::string to_json(const Hda& h) {
  HdaData d = to_data(h);
  json j;
  j["cells"] = json::array();
  for (const auto& c : d.cells) {
    json cell{{"id", c.name}, {"conclist", conclist_json(c.conclist)}};
    if (!c.faces.empty()) {
      cell["faces"] = json::array();
      for (const auto& f : c.faces) {
        json face = json::object();
        if (!f.lower.empty()) face["lower"] = f.lower;
        if (!f.upper.empty()) face["upper"] = f.upper;
        cell["faces"].push_back(face);
      }
    }
    j["cells"].push_back(cell);
  }
  j["start"] = d.start;
  j["accept"] = d.accept;
  return j.dump(2);
}

StAutomaton parse_sta_json(std::string_view text) {
  json j = parse(text);
  std::vector<std::string> names;
  std::vector<Conclist> labels;
  std::map<std::string, int> index;
  for (const auto& s : member(j, "states")) {
    std::string id = id_string(member(s, "id"));
    if (!index.emplace(id, static_cast<int>(names.size())).second) fail("duplicate state " + id);
    names.push_back(id);
    labels.push_back(conclist_of(member(s, "conclist")));
  }
  auto state = [&](const std::string& id) {
    auto it = index.find(id);
    if (it == index.end()) fail("unknown state " + id);
    return it->second;
  };
  std::vector<StEdge> edges;
  if (j.contains("edges"))
    for (const auto& e : j.at("edges")) {
      const json& letter = member(e, "letter");
      if (!letter.is_string()) fail("edge letters are strings like \"[.a., b.]\"");
      edges.push_back({state(id_string(member(e, "from"))), parse_step(letter.get<std::string>()),
                       state(id_string(member(e, "to")))});
    }
  std::vector<int> initial, final;
  for (const auto& s : names_of(j, "initial")) initial.push_back(state(s));
  for (const auto& s : names_of(j, "final")) final.push_back(state(s));
  return StAutomaton(names, labels, edges, initial, final);
}

std::string to_json(const StAutomaton& a) {
  json j;
  j["states"] = json::array();
  for (int q = 0; q < a.size(); ++q)
    j["states"].push_back({{"id", a.name(q)}, {"conclist", conclist_json(a.label(q))}});
  j["edges"] = json::array();
  for (const auto& e : a.edges())
    j["edges"].push_back(
        {{"from", a.name(e.from)}, {"letter", to_string(e.letter)}, {"to", a.name(e.to)}});
  j["initial"] = json::array();
  for (int q : a.initial()) j["initial"].push_back(a.name(q));
  j["final"] = json::array();
  for (int q : a.final()) j["final"].push_back(a.name(q));
  return j.dump(2);
}

std::string to_dot(const Ipomset& p) {
  std::ostringstream out;
  out << "digraph ipomset {\n  rankdir=LR;\n";
  for (EventId x = 0; x < p.size(); ++x) {
    std::string label;
    if (p.is_source(x)) label += "•";
    label += p.label(x);
    if (p.is_target(x)) label += "•";
    out << "  x" << x + 1 << " [label=" << quote(label) << "];\n";
  }
  // Hasse diagram of the precedence order; event order dashed.
  for (EventId x = 0; x < p.size(); ++x)
    for (EventId y = 0; y < p.size(); ++y) {
      if (p.less(x, y)) {
        bool covered = false;
        for (EventId z = 0; z < p.size(); ++z)
          if (p.less(x, z) && p.less(z, y)) covered = true;
        if (!covered) out << "  x" << x + 1 << " -> x" << y + 1 << ";\n";
      }
      if (p.evord(x, y))
        out << "  x" << x + 1 << " -> x" << y + 1 << " [style=dashed, color=gray];\n";
    }
  out << "}\n";
  return out.str();
}

std::string to_dot(const Hda& h) {
  std::ostringstream out;
  out << "digraph hda {\n";
  for (int q = 0; q < h.size(); ++q) {
    std::string shape = h.ev(q).empty() ? "circle" : h.ev(q).size() == 1 ? "box" : "box3d";
    std::string label = h.name(q);
    if (!h.ev(q).empty()) label += " " + to_string(make_identity(h.ev(q)));
    out << "  " << quote(h.name(q)) << " [shape=" << shape << ", label=" << quote(label);
    if (h.is_start(q) || h.is_accept(q))
      out << ", peripheries=2, xlabel=" << quote(std::string(h.is_start(q) ? "start" : "") +
                                                  (h.is_start(q) && h.is_accept(q) ? "/" : "") +
                                                  (h.is_accept(q) ? "accept" : ""));
    out << "];\n";
  }
  for (int q = 0; q < h.size(); ++q) {
    const auto& c = h.cell(q);
    for (std::size_t i = 0; i < c.conclist.size(); ++i) {
      std::string ev = std::string(1, c.conclist[i]) + "@" + std::to_string(i);
      if (c.lower[i] >= 0)
        out << "  " << quote(h.name(c.lower[i])) << " -> " << quote(h.name(q))
            << " [label=" << quote("d0 " + ev) << "];\n";
      if (c.upper[i] >= 0)
        out << "  " << quote(h.name(q)) << " -> " << quote(h.name(c.upper[i]))
            << " [label=" << quote("d1 " + ev) << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string to_dot(const StAutomaton& a) {
  std::ostringstream out;
  out << "digraph sta {\n  rankdir=LR;\n";
  for (int q = 0; q < a.size(); ++q) {
    std::string label = a.name(q) + " " + to_string(make_identity(a.label(q)));
    out << "  " << quote(a.name(q)) << " [label=" << quote(label)
        << (a.is_final(q) ? ", shape=doublecircle" : ", shape=circle") << "];\n";
    if (a.is_initial(q))
      out << "  " << quote("init_" + a.name(q)) << " [shape=point];\n  "
          << quote("init_" + a.name(q)) << " -> " << quote(a.name(q)) << ";\n";
  }
  for (const auto& e : a.edges())
    out << "  " << quote(a.name(e.from)) << " -> " << quote(a.name(e.to))
        << " [label=" << quote(to_string(e.letter)) << "];\n";
  out << "}\n";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, "cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace ipoms
