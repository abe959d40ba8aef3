// Command-line front end. Exit codes: 0 true or success, 1 false or
// counterexample, 2 usage or validation error.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ipoms/automaton.hpp"
#include "ipoms/bet.hpp"
#include "ipoms/error.hpp"
#include "ipoms/hda.hpp"
#include "ipoms/io.hpp"
#include "ipoms/ipomset.hpp"
#include "ipoms/mso.hpp"
#include "ipoms/rational.hpp"
#include "ipoms/sta.hpp"
#include "ipoms/stepseq.hpp"

using namespace ipoms;
using json = nlohmann::json;

namespace {

enum class Format { text, structured, diagram };

struct Options {
  Format format = Format::text;
  int events = 6;
  int k = 2;
  std::size_t cap = kDefaultStateCap;
};

Options opts;

Ipomset read_ipomset(const std::string& path) { return parse_ipomset_json(read_file(path)); }
Hda read_hda(const std::string& path) { return parse_hda(read_file(path)); }

std::vector<Label> parse_labels(const std::string& s) { return {s.begin(), s.end()}; }

void emit(const Ipomset& p) {
  switch (opts.format) {
    case Format::text: std::cout << describe(p) << "\n"; break;
    case Format::structured: std::cout << to_json(p) << "\n"; break;
    case Format::diagram: std::cout << to_dot(p); break;
  }
}

void emit(const std::vector<Ipomset>& ps) {
  if (opts.format == Format::structured) {
    json arr = json::array();
    for (const auto& p : ps) arr.push_back(json::parse(to_json(p)));
    std::cout << arr.dump(2) << "\n";
    return;
  }
  for (const auto& p : ps) emit(p);
}

void emit(const StepWord& w) {
  switch (opts.format) {
    case Format::text: std::cout << to_string(w) << "\n"; break;
    case Format::structured: {
      json arr = json::array();
      for (const Step& s : w) arr.push_back(to_string(s));
      std::cout << arr.dump() << "\n";
      break;
    }
    case Format::diagram: std::cout << to_dot(glue_word(w)); break;
  }
}

void emit_formula(const FormulaPtr& f) {
  if (opts.format == Format::structured)
    std::cout << json{{"formula", to_string(f)}}.dump() << "\n";
  else
    std::cout << to_string(f) << "\n";
}

const char* kind_name(SwapKind k) {
  switch (k) {
    case SwapKind::starters: return "starters";
    case SwapKind::terminators: return "terminators";
    case SwapKind::start_end: return "start-end";
  }
  return "";
}

void emit_chain(const StepWord& from, const std::vector<ChainStep>& steps) {
  std::cout << "  " << to_string(from) << "\n";
  for (const auto& s : steps)
    std::cout << "  swap " << kind_name(s.kind) << " at " << s.position + 1 << ": "
              << to_string(s.word) << "\n";
}

std::string endpoint_text(int v) {
  if (v == kMinusInf) return "-inf";
  if (v == kPlusInf) return "+inf";
  return std::to_string(v);
}

void emit_sta(const StAutomaton& a) {
  if (opts.format == Format::structured) {
    std::cout << to_json(a) << "\n";
    return;
  }
  if (opts.format == Format::diagram) {
    std::cout << to_dot(a);
    return;
  }
  auto conclist = [](const Conclist& u) { return to_string(make_identity(u)); };
  std::cout << "states " << a.size() << "\n";
  for (int q = 0; q < a.size(); ++q)
    std::cout << "  " << a.name(q) << " " << conclist(a.label(q)) << (a.is_initial(q) ? " initial" : "")
              << (a.is_final(q) ? " final" : "") << "\n";
  std::cout << "edges " << a.edges().size() << "\n";
  for (const auto& e : a.edges())
    std::cout << "  " << a.name(e.from) << " " << to_string(e.letter) << " " << a.name(e.to) << "\n";
}

Alphabet word_alphabet(const std::vector<StepWord>& ws, const FormulaPtr& f) {
  std::vector<Label> sigma = labels(f);
  int k = 1;
  for (const auto& w : ws)
    for (const Step& s : w) {
      sigma.insert(sigma.end(), s.labels.begin(), s.labels.end());
      k = std::max(k, s.size());
    }
  std::sort(sigma.begin(), sigma.end());
  sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());
  return Alphabet(sigma, k);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interval ipomsets, step sequences, HDAs and MSO logic"};
  app.require_subcommand(1);
  app.fallthrough();
  std::map<std::string, Format> formats{
      {"text", Format::text}, {"structured", Format::structured}, {"diagram", Format::diagram}};
  app.add_option("--format", opts.format, "Output format: text, structured or diagram")
      ->transform(CLI::CheckedTransformer(formats));
  app.add_option("--events", opts.events, "Event bound for enumerations")
      ->envname("IPOMS_EVENTS")
      ->check(CLI::Range(0, 8));
  app.add_option("--k", opts.k, "Width bound")->envname("IPOMS_K")->check(CLI::Range(1, 4));
  app.add_option("--cap", opts.cap, "State bound for subset constructions")
      ->envname("IPOMS_STATE_CAP")
      ->check(CLI::PositiveNumber);

  int verdict = 0;
  std::string a1, a2, formula, hda_path, sta_path, ipomset_path, word, labels_arg, path_text;
  int steps = -1;
  bool interfaces = false;

  // ipomset
  auto* ip = app.add_subcommand("ipomset", "Ipomset operations")->require_subcommand(1);
  auto* ip_validate = ip->add_subcommand("validate", "Validate an ipomset file");
  ip_validate->add_option("file", a1)->required();
  ip_validate->callback([&] {
    Ipomset p = read_ipomset(a1);
    std::cout << "valid: " << p.size() << " events\n";
  });
  auto* ip_canon = ip->add_subcommand("canon", "Canonical form");
  ip_canon->add_option("file", a1)->required();
  ip_canon->callback([&] { emit(canonical_form(read_ipomset(a1))); });
  auto* ip_glue = ip->add_subcommand("glue", "Gluing composition P * Q");
  ip_glue->add_option("left", a1)->required();
  ip_glue->add_option("right", a2)->required();
  ip_glue->callback([&] { emit(glue(read_ipomset(a1), read_ipomset(a2))); });
  auto* ip_sub = ip->add_subcommand("subsumes", "Whether P is subsumed by Q, with witness and chain");
  ip_sub->add_option("p", a1)->required();
  ip_sub->add_option("q", a2)->required();
  ip_sub->callback([&] {
    Ipomset p = read_ipomset(a1), q = read_ipomset(a2);
    auto f = subsumption(p, q);
    if (!f) {
      std::cout << "not subsumed\n";
      verdict = 1;
      return;
    }
    std::cout << "subsumed:";
    for (EventId x = 0; x < p.size(); ++x) std::cout << " x" << x + 1 << "->x" << (*f)[x] + 1;
    std::cout << "\nchain:\n";
    emit_chain(dense_refine(sparse_decompose(q)), subsumption_chain(p, q));
  });
  auto* ip_sparse = ip->add_subcommand("decompose", "Sparse step decomposition");
  ip_sparse->add_option("file", a1)->required();
  ip_sparse->callback([&] { emit(sparse_decompose(read_ipomset(a1))); });
  auto* ip_width = ip->add_subcommand("width", "Width of an interval ipomset");
  ip_width->add_option("file", a1)->required();
  ip_width->callback([&] { std::cout << width(read_ipomset(a1)) << "\n"; });
  auto* ip_interval = ip->add_subcommand("interval", "Whether the precedence order is an interval order");
  ip_interval->add_option("file", a1)->required();
  ip_interval->callback([&] {
    bool yes = is_interval(parse_ipomset_json(read_file(a1), false));
    std::cout << (yes ? "true" : "false") << "\n";
    verdict = yes ? 0 : 1;
  });

  // word
  auto* wd = app.add_subcommand("word", "Words of starters and terminators")->require_subcommand(1);
  auto* wd_coh = wd->add_subcommand("coherent", "Whether adjacent letters glue");
  wd_coh->add_option("word", a1)->required();
  wd_coh->callback([&] {
    bool yes = is_coherent(parse_word(a1));
    std::cout << (yes ? "true" : "false") << "\n";
    verdict = yes ? 0 : 1;
  });
  auto* wd_glue = wd->add_subcommand("glue", "Gluing of a coherent word");
  wd_glue->add_option("word", a1)->required();
  wd_glue->callback([&] { emit(glue_word(parse_word(a1))); });
  auto* wd_norm = wd->add_subcommand("normalize", "Sparse normal form");
  wd_norm->add_option("word", a1)->required();
  wd_norm->callback([&] { emit(normalize(parse_word(a1)).sparse); });
  auto* wd_dense = wd->add_subcommand("dense", "Dense refinement");
  wd_dense->add_option("word", a1)->required();
  wd_dense->callback([&] { emit(dense_refine(parse_word(a1))); });
  auto* wd_end = wd->add_subcommand("endpoints", "Start and end positions of every event");
  wd_end->add_option("word", a1)->required();
  wd_end->callback([&] {
    EndpointMap m = endpoints(parse_word(a1));
    const Ipomset& p = m.glued.ipomset;
    if (opts.format == Format::structured) {
      json arr = json::array();
      for (EventId e = 0; e < p.size(); ++e)
        arr.push_back({{"event", "x" + std::to_string(e + 1)},
                       {"label", std::string(1, p.label(e))},
                       {"st", endpoint_text(m.start[e])},
                       {"en", endpoint_text(m.end[e])}});
      std::cout << arr.dump(2) << "\n";
      return;
    }
    for (EventId e = 0; e < p.size(); ++e)
      std::cout << "x" << e + 1 << " " << p.label(e) << " st=" << endpoint_text(m.start[e])
                << " en=" << endpoint_text(m.end[e]) << "\n";
  });
  auto* wd_preceq = wd->add_subcommand("preceq", "Whether dense u is below dense v, with the rewriting");
  wd_preceq->add_option("u", a1)->required();
  wd_preceq->add_option("v", a2)->required();
  wd_preceq->callback([&] {
    StepWord v = parse_word(a2);
    PreceqResult r = preceq(parse_word(a1), v);
    if (!r.holds) {
      std::cout << "false\n";
      verdict = 1;
      return;
    }
    std::cout << "true\n";
    emit_chain(v, r.steps);
  });

  // hda
  auto* hd = app.add_subcommand("hda", "Higher-dimensional automata")->require_subcommand(1);
  auto* hd_validate = hd->add_subcommand("validate", "Validate an HDA file");
  hd_validate->add_option("file", a1)->required();
  hd_validate->callback([&] {
    Hda h = read_hda(a1);
    std::cout << "valid: " << h.size() << " cells, dimension " << h.dimension() << "\n";
  });
  auto* hd_lang = hd->add_subcommand("lang", "Event ipomsets of accepting paths");
  hd_lang->add_option("file", a1)->required();
  hd_lang->add_option("--steps", steps, "Bound on non-identity steps (default: --events)");
  hd_lang->callback([&] { emit(language_enum(read_hda(a1), steps < 0 ? opts.events : steps)); });
  auto* hd_path = hd->add_subcommand("path", "Event ipomset of one path");
  hd_path->add_option("file", a1)->required();
  hd_path->add_option("path", path_text, "e.g. \"t3 +a q1 -c t2\"")->required();
  hd_path->callback([&] {
    Hda h = read_hda(a1);
    emit(ev_path(h, parse_path(h, path_text)));
  });
  auto* hd_sta = hd->add_subcommand("to-sta", "ST-automaton");
  hd_sta->add_option("file", a1)->required();
  hd_sta->callback([&] { emit_sta(from_hda(read_hda(a1))); });
  auto* hd_mso = hd->add_subcommand("to-mso", "Ipomset sentence defining the language");
  hd_mso->add_option("file", a1)->required();
  hd_mso->callback([&] { emit_formula(hda_to_msop(read_hda(a1), opts.cap).formula); });

  // sta
  auto* st = app.add_subcommand("sta", "ST-automata")->require_subcommand(1);
  auto load_sta = [&] {
    if (!hda_path.empty()) return from_hda(read_hda(hda_path));
    if (!sta_path.empty()) return parse_sta_json(read_file(sta_path));
    throw CLI::ValidationError("one of --hda or --sta is required");
  };
  auto* st_member = st->add_subcommand("member", "Whether an ipomset or word is accepted");
  st_member->add_option("--hda", hda_path, "HDA file");
  st_member->add_option("--sta", sta_path, "ST-automaton file");
  auto* mem_ip = st_member->add_option("--ipomset", ipomset_path, "Ipomset file");
  auto* mem_w = st_member->add_option("--word", word, "Word whose gluing is tested");
  mem_ip->excludes(mem_w);
  st_member->callback([&] {
    StAutomaton a = load_sta();
    Ipomset p = ipomset_path.empty() ? glue_word(parse_word(word)) : read_ipomset(ipomset_path);
    bool yes = member(a, p);
    std::cout << (yes ? "true" : "false") << "\n";
    verdict = yes ? 0 : 1;
  });
  auto* st_empty = st->add_subcommand("empty", "Whether no path is accepting");
  st_empty->add_option("--hda", hda_path, "HDA file");
  st_empty->add_option("--sta", sta_path, "ST-automaton file");
  st_empty->callback([&] {
    bool yes = is_empty(load_sta());
    std::cout << (yes ? "true" : "false") << "\n";
    verdict = yes ? 0 : 1;
  });

  // mso
  auto* ms = app.add_subcommand("mso", "Monadic second-order logic")->require_subcommand(1);
  auto* ms_eval = ms->add_subcommand("eval", "Evaluate a sentence on an ipomset or a word");
  ms_eval->add_option("--formula", formula)->required();
  auto* ev_ip = ms_eval->add_option("--ipomset", ipomset_path, "Ipomset file");
  auto* ev_w = ms_eval->add_option("--word", word, "Word");
  ev_ip->excludes(ev_w);
  ms_eval->callback([&] {
    bool yes;
    if (!ipomset_path.empty()) {
      yes = eval_ipomset(read_ipomset(ipomset_path), parse_msop(formula));
    } else {
      StepWord w = parse_word(word);
      FormulaPtr f = parse_formula(formula);
      yes = eval_word(w, {f, word_alphabet({w}, f)});
    }
    std::cout << (yes ? "true" : "false") << "\n";
    verdict = yes ? 0 : 1;
  });
  auto* ms_hat = ms->add_subcommand("hat", "Word sentence for an ipomset sentence");
  ms_hat->add_option("--formula", formula)->required();
  ms_hat->add_option("--labels", labels_arg, "Labels of the alphabet")->required();
  ms_hat->callback([&] {
    emit_formula(hat_translate(parse_msop(formula), Alphabet(parse_labels(labels_arg), opts.k)).formula);
  });
  auto* ms_bar = ms->add_subcommand("bar", "Ipomset sentence for a word sentence");
  ms_bar->add_option("--formula", formula)->required();
  ms_bar->add_option("--labels", labels_arg, "Labels of the alphabet")->required();
  ms_bar->callback([&] {
    Alphabet alpha(parse_labels(labels_arg), opts.k);
    emit_formula(bar_translate(parse_msow(formula, alpha)).formula);
  });
  auto* ms_sat = ms->add_subcommand("sat", "Satisfiability over ipomsets of width <= k");
  ms_sat->add_option("--formula", formula)->required();
  ms_sat->callback([&] {
    SatResult r = satisfiable(parse_msop(formula), opts.k, opts.cap);
    if (!r.satisfiable) {
      std::cout << "unsatisfiable\n";
      verdict = 1;
      return;
    }
    std::cout << "satisfiable: " << to_string(r.word) << "\n";
    emit(*r.witness);
  });
  auto* ms_mc = ms->add_subcommand("mc", "Whether every ipomset of an HDA language satisfies a sentence");
  ms_mc->add_option("--hda", hda_path)->required();
  ms_mc->add_option("--formula", formula)->required();
  ms_mc->callback([&] {
    CheckResult r = model_check(read_hda(hda_path), parse_msop(formula), opts.cap);
    if (r.holds) {
      std::cout << "holds\n";
      return;
    }
    std::cout << "counterexample: " << to_string(r.word) << "\n";
    emit(*r.counterexample);
    verdict = 1;
  });

  // rational
  auto* ra = app.add_subcommand("rational", "Rational expressions")->require_subcommand(1);
  auto* ra_eval = ra->add_subcommand("eval", "Members with at most --events events");
  ra_eval->add_option("expr", a1)->required();
  ra_eval->callback([&] {
    IpomsetSet s = rational_eval(parse_rational(a1), opts.events);
    emit(std::vector<Ipomset>(s.begin(), s.end()));
  });

  // enum
  auto* en = app.add_subcommand("enum", "Enumeration")->require_subcommand(1);
  auto* en_ip = en->add_subcommand("ipomsets", "Interval ipomsets up to isomorphism");
  en_ip->add_option("--labels", labels_arg, "Labels")->default_val("ab");
  en_ip->add_flag("--interfaces", interfaces, "Include source and target interfaces");
  en_ip->callback([&] {
    emit(enumerate_ipomsets_upto(opts.events, parse_labels(labels_arg), interfaces));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const Error& e) {
    for (const auto& d : e.diagnostics()) std::cerr << errc_name(d.code) << ": " << d.message << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return verdict;
}
