#pragma once

#include <map>
#include <string>
#include <vector>

#include "safebox/logic/formula.hpp"
#include "safebox/logic/proof.hpp"
#include "safebox/logic/signature.hpp"

namespace safebox::logic {

struct DeriveResult {
  bool derivable = false;
  int depth = 0;
  std::vector<std::string> skolem_names;  // constants grounding the goal
  std::vector<std::string> trace;         // derivation log
  /// Mechanical translation of the derivation, accepted by check_script
  /// whenever derivable is true. Empty otherwise.
  ProofScript script;
};

/// Bounded forward derivation: ground the goal's universal prefix with
/// fresh skolem constants, instantiate the axioms over the Herbrand terms
/// of nesting depth <= `depth` (second-order variables range over declared
/// symbols of the matching kind), and saturate. The instantiation space is
/// finite, so the verdict is always reached; a negative answer means "not
/// derivable at this depth", not a refutation. Goals with second-order
/// binders are outside the supported fragment and are rejected with
/// std::invalid_argument.
DeriveResult derive_bounded(const Signature& sig,
                            const std::map<std::string, FormulaPtr>& axioms,
                            const FormulaPtr& goal, int depth);

}  // namespace safebox::logic
