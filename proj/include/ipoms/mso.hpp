#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ipoms/ipomset.hpp"
#include "ipoms/step.hpp"
#include "ipoms/stepseq.hpp"

namespace ipoms {

// Variables starting with a lower-case letter are first-order, all others
// second-order.
enum class Op {
  truth,
  falsity,
  label,  // a(x)
  src,    // src(x)
  tgt,    // tgt(x)
  less,   // x < y
  evord,  // x => y
  eq,     // x = y
  succ,   // x <. y, direct successor under <
  in,     // x in X
  letter, // [.a., b.](x)
  neg,
  conj,
  disj,
  implies,
  iff,
  exists,
  forall,
  exists_set,
  forall_set,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Op op = Op::truth;
  Label label = 0;
  Step letter;
  // Atom arguments; x is the bound variable of a quantifier.
  std::string x, y;
  std::vector<FormulaPtr> kids;
};

bool is_first_order(std::string_view var);

namespace mso {

FormulaPtr truth();
FormulaPtr falsity();
FormulaPtr label(Label a, const std::string& x);
FormulaPtr src(const std::string& x);
FormulaPtr tgt(const std::string& x);
FormulaPtr less(const std::string& x, const std::string& y);
FormulaPtr evord(const std::string& x, const std::string& y);
FormulaPtr eq(const std::string& x, const std::string& y);
FormulaPtr succ(const std::string& x, const std::string& y);
FormulaPtr in(const std::string& x, const std::string& set);
FormulaPtr letter(const Step& d, const std::string& x);
FormulaPtr neg(FormulaPtr f);
// Empty conjunction is true, empty disjunction false; singletons unwrap.
FormulaPtr conj(std::vector<FormulaPtr> fs);
FormulaPtr disj(std::vector<FormulaPtr> fs);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr iff(FormulaPtr a, FormulaPtr b);
// Quantifier over a first- or second-order variable, chosen by its name.
FormulaPtr exists(const std::string& v, FormulaPtr body);
FormulaPtr forall(const std::string& v, FormulaPtr body);
FormulaPtr exists(const std::vector<std::string>& vs, FormulaPtr body);
FormulaPtr forall(const std::vector<std::string>& vs, FormulaPtr body);

}  // namespace mso

// Text syntax: exists x, y. f | forall X. f | !f | f & g | f | g | f -> g |
// f <-> g | a(x) | src(x) | tgt(x) | x < y | x => y | x = y | x <. y |
// x in X | [.a., b.](x) | true | false | (f). Quantifier bodies extend as far
// right as possible. Throws PARSE_ERROR.
FormulaPtr parse_formula(std::string_view text);
std::string to_string(const FormulaPtr& f);

std::vector<std::string> free_variables(const FormulaPtr& f);
// Every variable name occurring in f, bound or free.
std::vector<std::string> variables(const FormulaPtr& f);
std::vector<Label> labels(const FormulaPtr& f);
std::size_t node_count(const FormulaPtr& f);
// Renames bound variables so that every quantifier binds a distinct name
// that is also distinct from the free variables.
FormulaPtr rename_apart(const FormulaPtr& f);
// Uses only the ipomset signature (no letter atoms).
bool is_msop(const FormulaPtr& f);
// Uses only <, =, <., membership and letters of the alphabet.
bool is_msow(const FormulaPtr& f, const Alphabet& alpha);

// Sentence over ipomsets.
struct MsopFormula {
  FormulaPtr formula;
};

// Sentence over words of starters and terminators of width <= alphabet.k().
struct MsowFormula {
  FormulaPtr formula;
  Alphabet alphabet;
};

// Throws PARSE_ERROR when the text uses atoms of the other signature and
// ALPHABET_MISMATCH for letters outside the alphabet.
MsopFormula parse_msop(std::string_view text);
MsowFormula parse_msow(std::string_view text, const Alphabet& alpha);

struct Valuation {
  std::map<std::string, int> first;
  std::map<std::string, EventSet> second;
};

// Direct model checking. Quantifiers range over events (resp. positions) and
// their subsets. Throws UNBOUND_VARIABLE for free variables missing from the
// valuation.
bool eval_ipomset(const Ipomset& p, const FormulaPtr& f, const Valuation& nu = {});
bool eval_ipomset(const Ipomset& p, const MsopFormula& f, const Valuation& nu = {});
// Throws ALPHABET_MISMATCH for letters of w outside the alphabet.
bool eval_word(const StepWord& w, const MsowFormula& f, const Valuation& nu = {});

// Formula compiled once for repeated evaluation on many structures.
class Evaluator {
 public:
  explicit Evaluator(const FormulaPtr& f);
  ~Evaluator();
  Evaluator(Evaluator&&) noexcept;
  Evaluator& operator=(Evaluator&&) noexcept;

  bool operator()(const Ipomset& p, const Valuation& nu = {});
  // Letters are not checked against any alphabet.
  bool operator()(const StepWord& w, const Valuation& nu = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Non-empty and adjacent letters glue.
FormulaPtr coh_formula(const Alphabet& alpha);
// Non-identity ipomsets of width <= k.
FormulaPtr width_guard(int k);
// Satisfied exactly by the word w.
FormulaPtr pinning_formula(const StepWord& w);
// Satisfied exactly by the identity on u.
FormulaPtr identity_formula(const Conclist& u);

// Word formulas on (position, event index) pairs, 1-based indices.
FormulaPtr dom_formula(const Alphabet& alpha, const std::string& x, int i);
// Both pairs denote the same event of the glued ipomset.
FormulaPtr sim_formula(const Alphabet& alpha, const std::string& x, int i, const std::string& y,
                       int j);

// Translation of an ipomset sentence to a word sentence over the alphabet:
// Coh ∧ φ'. A coherent word satisfies it iff its gluing satisfies φ.
MsowFormula hat_translate(const MsopFormula& f, const Alphabet& alpha);
// φ' alone.
FormulaPtr hat_body(const MsopFormula& f, const Alphabet& alpha);

enum class Endpoint { st, en };

// Comparison of start/end steps in the sparse decomposition.
FormulaPtr endpoint_less(Endpoint f, const std::string& x, Endpoint g, const std::string& y);
// The step starting (resp. terminating) x is the letter d.
FormulaPtr step_formula(const Step& d, Endpoint at, const std::string& x);

// Translation of a word sentence to an ipomset sentence satisfied exactly by
// the gluings of sparse words satisfying it.
MsopFormula bar_translate(const MsowFormula& f);

}  // namespace ipoms
