#pragma once

#include <map>

#include "safebox/logic/formula.hpp"
#include "safebox/logic/signature.hpp"

namespace safebox::logic {

/// Vocabulary of the pedestrian-detection safety argument: images and
/// boxes, the detector and label/ground-truth accessors, the enlargement
/// post-processor, the Cover predicate, and the second-order kinds the
/// generalization claim quantifies over.
Signature builtin_signature();

/// The named claims of the safety argument over builtin_signature():
///   E1  training data generalizes to the ODD (behavior equivalence)
///   E2  enlarged predictions cover the label on training data
///   E3  labels cover the true pedestrian extent on training data
///   E4  Cover is transitive
///   E5  enlarged predictions cover the pedestrian on training data
///       (derivable from E2-E4)
///   G1  enlarged predictions cover the pedestrian across the ODD
std::map<std::string, FormulaPtr> builtin_claims(const Signature& sig);

}  // namespace safebox::logic
