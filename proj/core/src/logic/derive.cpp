#include "safebox/logic/derive.hpp"

#include <set>

#include "saturation.hpp"

namespace safebox::logic {

DeriveResult derive_bounded(const Signature& sig,
                            const std::map<std::string, FormulaPtr>& axioms,
                            const FormulaPtr& goal, int depth) {
  if (depth < 1) {
    throw std::invalid_argument("derivation depth must be >= 1");
  }

  DeriveResult result;
  result.depth = depth;

  Signature local_sig = sig;
  FormulaPtr grounded = goal;
  if (goal->kind == FormulaKind::forall) {
    TermSubst subst;
    for (const auto& b : goal->binders) {
      if (b.second_order) {
        throw std::invalid_argument(
            "goal quantifies over the second-order kind '" + b.type +
            "', which cannot be grounded with skolem constants");
      }
      std::string fresh;
      for (int i = 1;; ++i) {
        fresh = b.name + std::to_string(i);
        if (!local_sig.has_symbol(fresh)) break;
      }
      local_sig.add_constant(fresh, b.type);
      subst[b.name] = Term{TermKind::symbol, fresh, {}};
      result.skolem_names.push_back(fresh);
    }
    grounded = substitute(goal->body, subst, {});
  }

  detail::SaturationConfig config;
  config.herbrand = true;
  config.term_depth_cap = depth;
  detail::Saturation saturation(local_sig, config);
  for (const auto& [name, formula] : axioms) {
    saturation.add_seed(formula, name);
  }
  saturation.run();

  std::set<detail::UsageRecord> usages;
  result.derivable = saturation.entails(grounded, &usages);
  result.trace = saturation.log();
  result.trace.push_back(
      result.derivable
          ? "derived: " + to_text(*grounded)
          : "not derivable at depth " + std::to_string(depth) + ": " +
                to_text(*grounded));

  if (!result.derivable) {
    return result;
  }

  // Mechanical translation: ground the goal exactly as above, replay every
  // axiom instantiation the derivation used, and let prop close.
  ProofScript& script = result.script;
  if (!result.skolem_names.empty()) {
    ProofCommand skolem;
    skolem.kind = ProofCommand::Kind::skolem;
    skolem.position = 1;
    skolem.args = result.skolem_names;
    script.commands.push_back(std::move(skolem));
  }
  for (const auto& usage : usages) {
    ProofCommand lemma;
    lemma.kind = ProofCommand::Kind::lemma;
    lemma.lemma_name = usage.axiom;
    script.commands.push_back(std::move(lemma));
    for (const auto& stage : usage.stages) {
      ProofCommand inst;
      inst.kind = ProofCommand::Kind::inst;
      inst.position = -1;
      inst.args = stage;
      script.commands.push_back(std::move(inst));
    }
  }
  ProofCommand prop;
  prop.kind = ProofCommand::Kind::prop;
  script.commands.push_back(std::move(prop));
  return result;
}

}  // namespace safebox::logic
