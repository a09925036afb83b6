#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "safebox/logic/formula.hpp"
#include "safebox/logic/signature.hpp"

namespace safebox::logic {

/// One checker command. Antecedent positions are negative with -1 the most
/// recently introduced formula; the single consequent is position 1.
struct ProofCommand {
  enum class Kind { lemma, skolem, inst, prop };
  Kind kind;
  std::string lemma_name;         // lemma
  int position = 0;               // skolem / inst
  std::vector<std::string> args;  // skolem constant names / inst arguments
  std::size_t line = 0;
};

struct ProofScript {
  std::vector<ProofCommand> commands;
};

/// Parse the line-oriented script format:
///
///   lemma E2
///   skolem 1 d1
///   inst -2 d1
///   inst -1 Enlarge(DNN(d1)) label(d1) ground_truth(d1)
///   prop
///
/// Blank lines and lines starting with '#' are ignored. Arguments are
/// whitespace-separated, so terms must not contain spaces.
ProofScript parse_script(std::string_view text);
std::string to_text(const ProofScript& script);

struct CheckResult {
  bool accepted = false;
  std::string reason;          // first failure, empty when accepted
  std::size_t failed_step = 0; // 1-based command index, 0 when accepted
  std::vector<std::string> trace;
};

/// Execute the script against the initial sequent `|- goal` and report
/// whether it closes. Execution is deterministic and always terminates:
/// lemma pushes a named axiom onto the antecedents, skolem grounds the
/// consequent's universal prefix with fresh constants, inst instantiates a
/// universal antecedent in place (terms for first-order binders, declared
/// symbols for second-order ones), and a final prop closes the sequent by
/// saturating the antecedents (instantiation over the ground terms in the
/// sequent, modus ponens, instance-wise premise introduction) and checking
/// that they entail the consequent. The trace replays every step.
CheckResult check_script(const Signature& sig,
                         const std::map<std::string, FormulaPtr>& axioms,
                         const FormulaPtr& goal, const ProofScript& script);

}  // namespace safebox::logic
