#pragma once

// Internal fixpoint engine behind check_script's `prop` command and
// derive_bounded. Not installed; the public surface is proof.hpp/derive.hpp.
//
// The engine saturates a set of formulas of the positive fragment under:
//   - instantiation of universal formulas, first-order binders ranging over
//     a finite ground-term universe and second-order binders over declared
//     symbols of the matching kind;
//   - modus ponens at the formula level (conjunction-flattened premises,
//     alpha-equivalence matching);
//   - conjunction elimination;
//   - premise introduction: a universal or implication premise of some
//     present implication is added once every required instance is
//     conditionally entailed (assume the antecedent, saturate, check).
// The universe is either the full Herbrand base up to a depth bound or the
// ground terms present in the formulas themselves (recollected as
// instantiation exposes new ones, still depth-capped). Both variants make
// the closure finite, so every query terminates deterministically.

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "safebox/logic/formula.hpp"
#include "safebox/logic/signature.hpp"

namespace safebox::logic::detail {

/// One appeal to a named axiom in a finished derivation: formula-level when
/// `args` is empty, otherwise a full-prefix instantiation whose arguments
/// are rendered in binder order. These records are what a derivation trace
/// is translated from.
struct UsageRecord {
  std::string axiom;
  // One inner vector per instantiation stage: a nested universal prefix
  // (FORALL xs: FORALL ys: ...) takes one stage per prefix level. Empty
  // means the axiom was used as a whole formula.
  std::vector<std::vector<std::string>> stages;

  auto operator<=>(const UsageRecord&) const = default;
};

struct Derivation {
  enum class Rule {
    seed,          // axiom or sequent antecedent
    assumption,    // antecedent assumed while discharging an implication
    instantiate,   // full-prefix instantiation of a universal
    modus_ponens,  // rhs of an implication whose premise parts are present
    conj_elim,
    premise_intro,  // universal/implication premise established instance-wise
  };
  static constexpr std::size_t none = static_cast<std::size_t>(-1);

  Rule rule = Rule::seed;
  std::string seed_name;            // axiom name; empty for unnamed seeds
  std::size_t from = none;          // source entry (instantiate/conj/mp impl)
  std::vector<std::size_t> premises;  // mp premise entries
  std::vector<std::string> inst_args; // rendered instantiation arguments
  // For instantiation entries whose chain of `from` links roots in a named
  // seed: the seed name and the argument stages applied so far.
  std::string chain_axiom;
  std::vector<std::vector<std::string>> chain_stages;
  std::vector<UsageRecord> extra_usages;  // resolved support of premise_intro
};

struct Entry {
  FormulaPtr formula;
  Derivation how;
};

struct SaturationConfig {
  int term_depth_cap = 3;
  bool herbrand = false;  // build the full term universe up front
  std::size_t max_entries = 100000;
  std::size_t max_rounds = 64;
};

class Saturation {
 public:
  Saturation(const Signature& sig, SaturationConfig config);

  std::size_t add_seed(const FormulaPtr& formula, std::string name);
  std::size_t add_assumption(const FormulaPtr& formula);
  /// Ground terms of `formula` join the collected universe without the
  /// formula itself entering the state (used for the sequent consequent).
  void add_context(const FormulaPtr& formula);

  /// Saturate to fixpoint. Throws std::runtime_error if the configured
  /// entry/round limits are hit.
  void run();

  /// Conditional entailment of `goal` against the saturated state. Appends
  /// the axiom usages supporting a positive answer to `usages` (may be
  /// null). Does not mutate this saturator.
  bool entails(const FormulaPtr& goal, std::set<UsageRecord>* usages) const;

  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<std::string>& log() const { return *log_; }

 private:
  bool herbrand_universe_built_ = false;

  std::size_t add_entry(const FormulaPtr& formula, Derivation how);
  bool member(const FormulaPtr& formula, std::size_t* id) const;
  void flatten_conjuncts(const FormulaPtr& formula,
                         std::vector<FormulaPtr>& parts) const;

  void rebuild_universe();
  void build_herbrand_universe();
  std::vector<Term> candidates_for(const Binder& binder,
                                   std::vector<std::string>* symbols) const;

  bool apply_conj_elim();
  bool apply_instantiation();
  bool apply_modus_ponens();
  bool apply_premise_intro();

  std::set<UsageRecord> resolve_usages(std::size_t id) const;
  void log_entry(std::size_t id) const;

  const Signature& sig_;
  SaturationConfig config_;
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;  // canonical text -> entry id
  std::vector<FormulaPtr> context_;

  std::map<std::string, std::vector<Term>> universe_;  // sort -> ground terms
  std::size_t universe_version_ = 0;
  std::map<std::size_t, std::size_t> instantiated_at_;
  std::map<std::string, std::size_t> intro_attempted_at_;

  // Shared across the clones spawned by conditional queries so a premise
  // currently being established is not re-attempted recursively.
  std::shared_ptr<std::set<std::string>> in_progress_;
  std::shared_ptr<std::vector<std::string>> log_;
  int nesting_ = 0;

  mutable std::map<std::size_t, std::set<UsageRecord>> usage_memo_;
};

}  // namespace safebox::logic::detail
