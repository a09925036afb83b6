#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace safebox::logic {

enum class TermKind {
  variable,  // bound first-order variable, or a function-kind variable when applied
  symbol,    // declared constant (no args) or function application
};

struct Term {
  TermKind kind;
  std::string name;
  std::vector<Term> args;
};

/// A quantified variable. `type` names a sort for first-order binders and a
/// declared second-order kind (predicate- or function-valued) otherwise.
struct Binder {
  std::string name;
  std::string type;
  bool second_order = false;
};

enum class FormulaKind { atom, conjunction, implication, forall };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable node of the restricted fragment: universally quantified
/// implications/conjunctions of predicate applications. There is no
/// negation, disjunction or existential quantifier; richer inputs fail in
/// the parser rather than being approximated here.
class Formula {
 public:
  FormulaKind kind;

  // atom
  std::string predicate;
  bool predicate_is_variable = false;
  std::vector<Term> args;

  // conjunction / implication
  FormulaPtr lhs, rhs;

  // forall
  std::vector<Binder> binders;
  FormulaPtr body;

  static FormulaPtr make_atom(std::string predicate, bool predicate_is_variable,
                              std::vector<Term> args);
  static FormulaPtr make_conjunction(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr make_implication(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr make_forall(std::vector<Binder> binders, FormulaPtr body);
};

std::string to_text(const Term& term);
std::string to_text(const Formula& formula);

/// Canonical rendering with binder occurrences replaced by de Bruijn-style
/// placeholders. Two formulas are alpha-equivalent iff their canonical
/// texts match; the text doubles as a dedup key.
std::string canonical_text(const Formula& formula);

bool structural_equal(const Formula& a, const Formula& b);
bool alpha_equal(const Formula& a, const Formula& b);

using TermSubst = std::map<std::string, Term>;
using SymbolSubst = std::map<std::string, std::string>;

/// Substitute ground terms for first-order variables and declared symbols
/// for second-order variables. Shadowed binders are respected; since the
/// replacements are ground, no capture can occur.
Term substitute(const Term& term, const TermSubst& terms,
                const SymbolSubst& symbols);
FormulaPtr substitute(const FormulaPtr& formula, const TermSubst& terms,
                      const SymbolSubst& symbols);

bool is_ground(const Term& term);
/// Nesting depth: constants are 0, an application is 1 + deepest argument.
int term_depth(const Term& term);

/// All ground subterms occurring in the formula (including subterms of
/// non-ground terms), deduplicated by rendering.
void collect_ground_terms(const Formula& formula,
                          std::map<std::string, Term>& sink);

}  // namespace safebox::logic
