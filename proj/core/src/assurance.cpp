#include "safebox/assurance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "safebox/logic/derive.hpp"
#include "safebox/logic/parser.hpp"
#include "safebox/logic/proof.hpp"
#include "logic/signature_json.hpp"

namespace safebox {

MassFunction::MassFunction(std::vector<std::string> frame,
                           std::map<Subset, double> masses)
    : frame_(std::move(frame)), masses_(std::move(masses)) {}

MassFunction::MassFunction(
    std::vector<std::string> frame,
    const std::map<std::vector<std::string>, double>& masses)
    : frame_(std::move(frame)) {
  if (frame_.empty() || frame_.size() > 64) {
    throw std::invalid_argument("frame must have 1..64 elements");
  }
  std::set<std::string> unique(frame_.begin(), frame_.end());
  if (unique.size() != frame_.size()) {
    throw std::invalid_argument("frame elements must be distinct");
  }
  double total = 0.0;
  for (const auto& [elements, value] : masses) {
    if (value < 0.0 || !std::isfinite(value)) {
      throw std::invalid_argument("masses must be finite and >= 0");
    }
    const Subset s = subset_mask(elements);
    if (s == 0) {
      throw std::invalid_argument("mass on the empty set is not allowed");
    }
    if (value > 0.0) masses_[s] += value;
    total += value;
  }
  if (std::abs(total - 1.0) > kTolerance) {
    throw std::invalid_argument("masses must sum to 1, got " +
                                std::to_string(total));
  }
}

MassFunction MassFunction::vacuous(std::vector<std::string> frame) {
  MassFunction m(std::move(frame), std::map<Subset, double>{});
  m.masses_[m.theta()] = 1.0;
  if (m.frame_.empty() || m.frame_.size() > 64) {
    throw std::invalid_argument("frame must have 1..64 elements");
  }
  return m;
}

MassFunction MassFunction::binary(double holds, double not_holds,
                                  double theta) {
  std::map<std::vector<std::string>, double> masses;
  masses[{"holds"}] = holds;
  masses[{"not-holds"}] = not_holds;
  masses[{"holds", "not-holds"}] = theta;
  return MassFunction({"holds", "not-holds"}, masses);
}

MassFunction::Subset MassFunction::theta() const {
  return frame_.size() == 64 ? ~Subset{0}
                             : ((Subset{1} << frame_.size()) - 1);
}

MassFunction::Subset MassFunction::subset_mask(
    const std::vector<std::string>& elements) const {
  Subset s = 0;
  for (const auto& e : elements) {
    auto it = std::find(frame_.begin(), frame_.end(), e);
    if (it == frame_.end()) {
      throw std::invalid_argument("'" + e + "' is not in the frame");
    }
    s |= Subset{1} << static_cast<Subset>(it - frame_.begin());
  }
  return s;
}

std::string MassFunction::subset_name(Subset subset) const {
  if (subset == theta()) return "theta";
  std::string out;
  for (std::size_t i = 0; i < frame_.size(); ++i) {
    if (subset & (Subset{1} << i)) {
      if (!out.empty()) out += ",";
      out += frame_[i];
    }
  }
  return out.empty() ? "{}" : out;
}

double MassFunction::mass(Subset subset) const {
  auto it = masses_.find(subset);
  return it != masses_.end() ? it->second : 0.0;
}

double MassFunction::mass(const std::vector<std::string>& elements) const {
  return mass(subset_mask(elements));
}

double MassFunction::belief(Subset subset) const {
  double total = 0.0;
  for (const auto& [s, v] : masses_) {
    if ((s & ~subset) == 0) total += v;
  }
  return total;
}

double MassFunction::belief(const std::vector<std::string>& elements) const {
  return belief(subset_mask(elements));
}

bool MassFunction::same_frame(const MassFunction& other) const {
  return frame_ == other.frame_;
}

namespace {

struct Conjunction {
  std::map<MassFunction::Subset, double> intersections;
  double conflict = 0.0;
};

Conjunction conjunctive_combination(const MassFunction& m1,
                                    const MassFunction& m2) {
  if (!m1.same_frame(m2)) {
    throw std::invalid_argument("mass functions must share one frame");
  }
  Conjunction out;
  for (const auto& [b, mb] : m1.masses()) {
    for (const auto& [c, mc] : m2.masses()) {
      const MassFunction::Subset a = b & c;
      const double product = mb * mc;
      if (a == 0) {
        out.conflict += product;
      } else {
        out.intersections[a] += product;
      }
    }
  }
  return out;
}

}  // namespace

MassFunction combine_dempster(const MassFunction& m1, const MassFunction& m2) {
  Conjunction c = conjunctive_combination(m1, m2);
  if (c.conflict >= 1.0 - MassFunction::kTolerance) {
    throw TotalConflictError(
        "total conflict: the sources rule each other out entirely");
  }
  std::map<MassFunction::Subset, double> masses;
  for (const auto& [s, v] : c.intersections) {
    masses[s] = v / (1.0 - c.conflict);
  }
  return MassFunction(m1.frame(), std::move(masses));
}

MassFunction combine_yager(const MassFunction& m1, const MassFunction& m2) {
  Conjunction c = conjunctive_combination(m1, m2);
  std::map<MassFunction::Subset, double> masses = c.intersections;
  if (c.conflict > 0.0) {
    masses[m1.theta()] += c.conflict;
  }
  return MassFunction(m1.frame(), std::move(masses));
}

namespace {

const CaseNode* find_node(const AssuranceCase& ac, const std::string& id) {
  for (const auto& n : ac.nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

}  // namespace

void validate_case(const AssuranceCase& ac) {
  std::set<std::string> ids;
  for (const auto& n : ac.nodes) {
    if (!ids.insert(n.id).second) {
      throw CaseError("duplicate node id '" + n.id + "'");
    }
  }
  for (const auto& n : ac.nodes) {
    for (const auto& child : n.children) {
      if (!ids.count(child)) {
        throw CaseError("node '" + n.id + "' references unknown child '" +
                        child + "'");
      }
    }
    const bool may_carry_mass = n.kind == NodeKind::solution;
    if (n.mass && !may_carry_mass) {
      throw CaseError("node '" + n.id + "' carries a mass but only solutions may");
    }
    if (!n.mass && n.kind == NodeKind::solution) {
      throw CaseError("solution '" + n.id + "' carries no mass");
    }
    if (n.kind == NodeKind::solution && !n.children.empty()) {
      throw CaseError("solution '" + n.id + "' cannot have children");
    }
  }

  // Cycle check over the children edges.
  std::map<std::string, int> color;  // 0 new, 1 active, 2 done
  std::vector<std::pair<const CaseNode*, std::size_t>> stack;
  for (const auto& root : ac.nodes) {
    if (color[root.id]) continue;
    color[root.id] = 1;
    stack.push_back({&root, 0});
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next >= node->children.size()) {
        color[node->id] = 2;
        stack.pop_back();
        continue;
      }
      const std::string& child_id = node->children[next++];
      const CaseNode* child = find_node(ac, child_id);
      if (color[child->id] == 1) {
        throw CaseError("cycle detected through node '" + child_id + "'");
      }
      if (color[child->id] == 0) {
        color[child->id] = 1;
        stack.push_back({child, 0});
      }
    }
  }
}

namespace {

/// Supporting solutions of a goal: direct solution children plus solutions
/// reached through strategy nodes, in ascending id order. Assumption and
/// context nodes met along the way contribute their formulas to the axiom
/// set of the deduction check.
struct Support {
  std::vector<const CaseNode*> solutions;
  std::vector<const CaseNode*> side_conditions;  // assumptions/contexts
};

Support collect_support(const AssuranceCase& ac, const CaseNode& goal) {
  Support support;
  std::set<std::string> visited;
  std::vector<const CaseNode*> queue{&goal};
  while (!queue.empty()) {
    const CaseNode* node = queue.back();
    queue.pop_back();
    for (const auto& child_id : node->children) {
      if (!visited.insert(child_id).second) continue;
      const CaseNode* child = find_node(ac, child_id);
      switch (child->kind) {
        case NodeKind::solution:
          support.solutions.push_back(child);
          break;
        case NodeKind::strategy:
          queue.push_back(child);
          break;
        case NodeKind::assumption:
        case NodeKind::context:
          support.side_conditions.push_back(child);
          break;
        case NodeKind::goal:
          // Sub-goals are assessed on their own and do not feed the
          // parent's combination.
          break;
      }
    }
  }
  auto by_id = [](const CaseNode* a, const CaseNode* b) { return a->id < b->id; };
  std::sort(support.solutions.begin(), support.solutions.end(), by_id);
  std::sort(support.side_conditions.begin(), support.side_conditions.end(),
            by_id);
  return support;
}

logic::FormulaPtr parse_node_formula(const CaseNode& node,
                                     const logic::Signature& sig) {
  try {
    return logic::parse_formula(*node.formula, sig);
  } catch (const logic::ParseError& e) {
    throw CaseError("node '" + node.id + "': " + e.what());
  }
}

}  // namespace

AssessmentReport assess_case(const AssuranceCase& ac, int depth) {
  validate_case(ac);
  AssessmentReport report;

  for (const auto& node : ac.nodes) {
    if (node.kind != NodeKind::goal) continue;
    GoalAssessment entry;
    entry.goal_id = node.id;

    const Support support = collect_support(ac, node);
    for (const auto* s : support.solutions) entry.evidence_ids.push_back(s->id);

    if (support.solutions.empty()) {
      entry.combined = MassFunction::vacuous({"holds", "not-holds"});
      entry.reason = "no supporting solutions";
    } else {
      MassFunction combined = *support.solutions.front()->mass;
      for (std::size_t i = 1; i < support.solutions.size(); ++i) {
        const MassFunction& next = *support.solutions[i]->mass;
        if (!combined.same_frame(next)) {
          throw CaseError("solution '" + support.solutions[i]->id +
                          "' uses a different frame than its siblings");
        }
        combined = node.rule == CombinationRule::dempster
                       ? combine_dempster(combined, next)
                       : combine_yager(combined, next);
      }
      entry.combined = combined;
    }
    entry.belief_holds = entry.combined.belief(
        entry.combined.subset_mask({"holds"}));

    // Soundness gate: belief certifies the goal only when the goal formula
    // is derivable from the evidence formulas and the derivation replays
    // through the independent script checker.
    if (entry.reason.empty()) {
      if (!node.formula) {
        entry.reason = "goal carries no formula";
      } else {
        std::map<std::string, logic::FormulaPtr> axioms;
        for (const auto* s : support.solutions) {
          if (!s->formula) {
            entry.reason = "solution '" + s->id + "' carries no formula";
            break;
          }
          axioms[s->id] = parse_node_formula(*s, ac.signature);
        }
        if (entry.reason.empty()) {
          for (const auto* side : support.side_conditions) {
            if (side->formula) {
              axioms[side->id] = parse_node_formula(*side, ac.signature);
            }
          }
          const logic::FormulaPtr goal_formula =
              parse_node_formula(node, ac.signature);
          const logic::DeriveResult derived =
              logic::derive_bounded(ac.signature, axioms, goal_formula, depth);
          if (!derived.derivable) {
            entry.reason = "goal does not follow from the evidence at depth " +
                           std::to_string(depth);
          } else {
            const logic::CheckResult check = logic::check_script(
                ac.signature, axioms, goal_formula, derived.script);
            if (check.accepted) {
              entry.sound = true;
              entry.derivation = derived.trace;
              entry.script_text = to_text(derived.script);
            } else {
              entry.reason =
                  "derivation found but the checker rejected its translation: " +
                  check.reason;
            }
          }
        }
      }
    }
    report.goals.push_back(std::move(entry));
  }
  return report;
}

namespace {

MassFunction mass_from_json(const nlohmann::json& j, const std::string& id) {
  if (!j.is_object()) {
    throw CaseError("node '" + id + "': mass must be an object");
  }
  double holds = 0.0, not_holds = 0.0, theta = 0.0;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) {
      throw CaseError("node '" + id + "': mass values must be numbers");
    }
    if (key == "holds") {
      holds = value.get<double>();
    } else if (key == "not-holds" || key == "not_holds") {
      not_holds = value.get<double>();
    } else if (key == "theta") {
      theta = value.get<double>();
    } else {
      throw CaseError("node '" + id + "': unknown mass key '" + key +
                      "' (use holds, not-holds, theta)");
    }
  }
  try {
    return MassFunction::binary(holds, not_holds, theta);
  } catch (const std::invalid_argument& e) {
    throw CaseError("node '" + id + "': " + e.what());
  }
}

}  // namespace

AssuranceCase load_case_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open case file: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw CaseError("case file " + path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("signature") || !j.contains("nodes") ||
      !j["nodes"].is_array()) {
    throw CaseError("case file " + path.string() +
                    " needs \"signature\" and \"nodes\"");
  }

  AssuranceCase ac;
  ac.signature = logic::detail::signature_from_json(j["signature"],
                                                    path.string());
  for (const auto& jn : j["nodes"]) {
    if (!jn.is_object() || !jn.contains("id") || !jn["id"].is_string()) {
      throw CaseError("every node needs a string id");
    }
    CaseNode node;
    node.id = jn["id"].get<std::string>();
    const std::string kind = jn.value("kind", "");
    if (kind == "goal") {
      node.kind = NodeKind::goal;
    } else if (kind == "strategy") {
      node.kind = NodeKind::strategy;
    } else if (kind == "solution") {
      node.kind = NodeKind::solution;
    } else if (kind == "assumption") {
      node.kind = NodeKind::assumption;
    } else if (kind == "context") {
      node.kind = NodeKind::context;
    } else {
      throw CaseError("node '" + node.id + "': unknown kind '" + kind + "'");
    }
    node.text = jn.value("text", "");
    if (jn.contains("formula")) {
      node.formula = jn["formula"].get<std::string>();
    }
    if (jn.contains("mass")) {
      node.mass = mass_from_json(jn["mass"], node.id);
    }
    const nlohmann::json children = jn.value("children", nlohmann::json::array());
    for (const auto& c : children) {
      node.children.push_back(c.get<std::string>());
    }
    const std::string rule = jn.value("rule", "dempster");
    if (rule == "dempster") {
      node.rule = CombinationRule::dempster;
    } else if (rule == "yager") {
      node.rule = CombinationRule::yager;
    } else {
      throw CaseError("node '" + node.id + "': unknown rule '" + rule + "'");
    }
    ac.nodes.push_back(std::move(node));
  }
  validate_case(ac);
  return ac;
}

std::string report_to_json(const AssessmentReport& report) {
  nlohmann::json goals = nlohmann::json::array();
  for (const auto& g : report.goals) {
    nlohmann::json masses;
    for (const auto& [subset, value] : g.combined.masses()) {
      masses[g.combined.subset_name(subset)] = value;
    }
    nlohmann::json entry{{"id", g.goal_id},
                         {"belief_holds", g.belief_holds},
                         {"mass", masses},
                         {"soundness", g.sound ? "sound" : "upper-bound-only"},
                         {"evidence", g.evidence_ids}};
    if (!g.sound) entry["reason"] = g.reason;
    if (g.sound) {
      entry["script"] = g.script_text;
      entry["derivation"] = g.derivation;
    }
    goals.push_back(std::move(entry));
  }
  return nlohmann::json{{"goals", goals}}.dump(2) + "\n";
}

namespace {

void print_tree(const AssuranceCase& ac, const AssessmentReport& report,
                const CaseNode& node, int indent, std::ostream& out) {
  static const char* tags[] = {"goal", "strategy", "solution", "assumption",
                               "context"};
  out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << "["
      << tags[static_cast<int>(node.kind)] << "] " << node.id;
  if (!node.text.empty()) out << ": " << node.text;
  if (node.kind == NodeKind::goal) {
    for (const auto& g : report.goals) {
      if (g.goal_id != node.id) continue;
      out << "\n"
          << std::string(static_cast<std::size_t>(indent) * 2 + 2, ' ')
          << "belief(holds) = " << g.belief_holds << "  ["
          << (g.sound ? "sound" : "upper-bound-only") << "]";
      if (!g.sound) out << "  (" << g.reason << ")";
    }
  }
  if (node.kind == NodeKind::solution && node.mass) {
    out << "  mass(holds) = " << node.mass->mass({"holds"});
  }
  out << "\n";
  for (const auto& child_id : node.children) {
    print_tree(ac, report, *find_node(ac, child_id), indent + 1, out);
  }
}

}  // namespace

void print_report(const AssuranceCase& ac, const AssessmentReport& report,
                  std::ostream& out) {
  std::set<std::string> referenced;
  for (const auto& n : ac.nodes) {
    for (const auto& c : n.children) referenced.insert(c);
  }
  for (const auto& n : ac.nodes) {
    if (!referenced.count(n.id)) print_tree(ac, report, n, 0, out);
  }
}

}  // namespace safebox
