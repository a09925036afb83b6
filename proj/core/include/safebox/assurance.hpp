#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "safebox/logic/signature.hpp"

namespace safebox {

struct TotalConflictError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Basic belief assignment over a finite frame of discernment (up to 64
/// elements, addressed as bitmasks). Masses are non-negative, sit on
/// non-empty subsets, and sum to 1 within 1e-9.
class MassFunction {
 public:
  using Subset = std::uint64_t;
  static constexpr double kTolerance = 1e-9;

  MassFunction(std::vector<std::string> frame,
               const std::map<std::vector<std::string>, double>& masses);

  /// All mass on the whole frame: total ignorance.
  static MassFunction vacuous(std::vector<std::string> frame);
  /// Convenience for the {holds, not-holds} frame used by assurance cases.
  static MassFunction binary(double holds, double not_holds, double theta);

  const std::vector<std::string>& frame() const { return frame_; }
  const std::map<Subset, double>& masses() const { return masses_; }
  Subset theta() const;

  Subset subset_mask(const std::vector<std::string>& elements) const;
  std::string subset_name(Subset subset) const;

  double mass(Subset subset) const;
  double mass(const std::vector<std::string>& elements) const;
  /// Total mass committed to subsets of the given one.
  double belief(Subset subset) const;
  double belief(const std::vector<std::string>& elements) const;

  bool same_frame(const MassFunction& other) const;

 private:
  MassFunction(std::vector<std::string> frame, std::map<Subset, double> masses);
  friend MassFunction combine_dempster(const MassFunction&,
                                       const MassFunction&);
  friend MassFunction combine_yager(const MassFunction&, const MassFunction&);

  std::vector<std::string> frame_;
  std::map<Subset, double> masses_;
};

/// Normalized conjunctive combination. Throws TotalConflictError when the
/// conflict mass reaches 1, i.e. the sources are entirely contradictory.
MassFunction combine_dempster(const MassFunction& m1, const MassFunction& m2);

/// Conjunctive combination that parks the conflict mass on the whole frame
/// instead of normalizing; total conflict is representable.
MassFunction combine_yager(const MassFunction& m1, const MassFunction& m2);

enum class NodeKind { goal, strategy, solution, assumption, context };
enum class CombinationRule { dempster, yager };

/// One node of a goal-structured argument. Goals may carry a formula (the
/// claim to certify), solutions carry masses and optionally formulas, and
/// assumption/context nodes may carry formulas that join the axiom set of
/// the deduction check without entering mass combination.
struct CaseNode {
  std::string id;
  NodeKind kind = NodeKind::goal;
  std::string text;
  std::optional<std::string> formula;
  std::optional<MassFunction> mass;
  std::vector<std::string> children;
  CombinationRule rule = CombinationRule::dempster;
};

struct CaseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AssuranceCase {
  logic::Signature signature;
  std::vector<CaseNode> nodes;
};

/// Structural validation: unique ids, existing children, acyclic edges,
/// masses only on solutions (every solution has one), formulas only where
/// allowed. Throws CaseError naming the offending node.
void validate_case(const AssuranceCase& assurance_case);

struct GoalAssessment {
  std::string goal_id;
  MassFunction combined = MassFunction::vacuous({"holds", "not-holds"});
  double belief_holds = 0.0;
  /// True only when the goal formula was derived from the evidence
  /// formulas AND the translated script passed the independent checker.
  bool sound = false;
  std::string reason;  // why upper-bound-only; empty when sound
  std::vector<std::string> evidence_ids;  // solutions combined, id order
  std::vector<std::string> derivation;    // derivation log when sound
  std::string script_text;                // checker-accepted script when sound
};

struct AssessmentReport {
  std::vector<GoalAssessment> goals;
};

/// Assess every goal node: combine its supporting solution masses with the
/// node's rule (pairwise, ascending id order), then try to certify the
/// combination by deriving the goal formula from the evidence formulas at
/// the given depth. Combined belief without such a derivation is reported
/// as an upper bound only.
AssessmentReport assess_case(const AssuranceCase& assurance_case,
                             int depth = 3);

/// JSON case file: {"signature": {...}, "nodes": [{"id": ..., "kind": ...,
/// "text": ..., "formula": ..., "mass": {"holds": 1.0}, "children": [...],
/// "rule": "dempster"}, ...]}. Mass keys are "holds", "not-holds", "theta".
AssuranceCase load_case_file(const std::filesystem::path& path);

std::string report_to_json(const AssessmentReport& report);
/// Render the case as an indented tree with per-goal belief and soundness.
void print_report(const AssuranceCase& assurance_case,
                  const AssessmentReport& report, std::ostream& out);

}  // namespace safebox
