// safebox: learn conservative enlargement ratios from detection data,
// apply and evaluate them, and check the logical side of the safety
// argument (proof scripts, bounded derivation, assurance cases).

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "safebox/assurance.hpp"
#include "safebox/dataset.hpp"
#include "safebox/evaluation.hpp"
#include "safebox/logic/derive.hpp"
#include "safebox/logic/io.hpp"
#include "safebox/logic/parser.hpp"
#include "safebox/logic/proof.hpp"
#include "safebox/postproc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitClaimFailed = 1;  // tool worked, the claim did not hold
constexpr int kExitUsage = 2;        // bad arguments, bad files

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Restrict to the named axioms when --use was given.
std::map<std::string, safebox::logic::FormulaPtr> select_axioms(
    const safebox::logic::AxiomFile& file, const std::string& use) {
  if (use.empty()) return file.axioms;
  std::map<std::string, safebox::logic::FormulaPtr> out;
  std::stringstream ss(use);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto it = file.axioms.find(name);
    if (it == file.axioms.end()) {
      throw std::runtime_error("--use names unknown axiom '" + name + "'");
    }
    out.emplace(*it);
  }
  return out;
}

safebox::logic::FormulaPtr resolve_goal(const safebox::logic::AxiomFile& file,
                                        const std::string& goal) {
  if (auto it = file.goals.find(goal); it != file.goals.end()) {
    return it->second;
  }
  if (auto it = file.axioms.find(goal); it != file.axioms.end()) {
    return it->second;
  }
  // Not a name: treat the argument as formula text.
  return safebox::logic::parse_formula(goal, file.signature);
}

int run_learn(const std::string& dataset_path, const std::string& out_path,
              double margin, std::optional<double> quantile) {
  auto records = safebox::load_dataset(dataset_path);
  safebox::LearnOptions options;
  options.dataset_id = dataset_path;
  options.margin = margin;
  options.quantile = quantile;
  auto post = safebox::learn_ratios(records, options);
  std::cout << "pairs observed: " << post.pair_count << "\n"
            << "learned ratios: rw = " << post.ratios.rw()
            << ", rh = " << post.ratios.rh() << "\n";
  if (post.empty_training()) {
    std::cout << "warning: no matched training pairs, ratios default to (1, 1)\n";
  }
  if (!out_path.empty()) {
    safebox::save_postprocessor(post, out_path);
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

int run_apply(const std::string& dataset_path, const std::string& ratios_path,
              const std::string& out_path, std::optional<double> nms_iou,
              double score_threshold) {
  auto records = safebox::load_dataset(dataset_path);
  auto post = safebox::load_postprocessor(ratios_path);
  for (auto& rec : records) {
    if (nms_iou) {
      rec.predictions = safebox::nms(
          rec.predictions, safebox::NmsConfig{*nms_iou, score_threshold});
    }
    rec.predictions = safebox::apply(post, rec.predictions);
  }
  safebox::save_dataset(records, out_path);
  std::cout << "wrote " << out_path << " (rw = " << post.ratios.rw()
            << ", rh = " << post.ratios.rh() << ")\n";
  return kExitOk;
}

int run_eval(const std::string& dataset_path, const std::string& ratios_path,
             double eps, const std::string& out_path,
             const std::string& csv_path) {
  auto records = safebox::load_dataset(dataset_path);
  std::optional<safebox::LearnedPostprocessor> post;
  if (!ratios_path.empty()) {
    post = safebox::load_postprocessor(ratios_path);
  }
  auto report = safebox::evaluate(records, post, safebox::EvalOptions{eps});
  safebox::print_report(report, std::cout);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << safebox::report_to_json(report);
    std::cout << "wrote " << out_path << "\n";
  }
  if (!csv_path.empty()) {
    safebox::write_pair_csv(report, csv_path);
    std::cout << "wrote " << csv_path << "\n";
  }
  return kExitOk;
}

int run_quadrants() {
  std::cout << "quadrant  iou        safe   pred                     label\n";
  for (const auto& q : safebox::divergence_quadrants()) {
    std::ostringstream pred, label;
    pred << "(" << q.pred.xmin() << "," << q.pred.ymin() << ","
         << q.pred.xmax() << "," << q.pred.ymax() << ")";
    label << "(" << q.label.xmin() << "," << q.label.ymin() << ","
          << q.label.xmax() << "," << q.label.ymax() << ")";
    std::cout << std::left << std::setw(10) << q.quadrant << std::setw(11)
              << std::setprecision(6) << q.iou << std::setw(7)
              << (q.safe ? "yes" : "no") << std::setw(25) << pred.str()
              << label.str() << "\n";
  }
  return kExitOk;
}

int run_prove(const std::string& axioms_path, const std::string& goal,
              const std::string& script_path, const std::string& use,
              bool quiet) {
  auto file = safebox::logic::load_axiom_file(axioms_path);
  auto axioms = select_axioms(file, use);
  auto goal_formula = resolve_goal(file, goal);
  auto script = safebox::logic::parse_script(read_file(script_path));
  auto result =
      safebox::logic::check_script(file.signature, axioms, goal_formula, script);
  if (!quiet) {
    for (const auto& line : result.trace) std::cout << line << "\n";
  }
  if (result.accepted) {
    std::cout << "accepted\n";
    return kExitOk;
  }
  std::cout << "rejected at step " << result.failed_step << ": "
            << result.reason << "\n";
  return kExitClaimFailed;
}

int run_derive(const std::string& axioms_path, const std::string& goal,
               int depth, const std::string& use, bool quiet) {
  auto file = safebox::logic::load_axiom_file(axioms_path);
  auto axioms = select_axioms(file, use);
  auto goal_formula = resolve_goal(file, goal);
  auto result =
      safebox::logic::derive_bounded(file.signature, axioms, goal_formula, depth);
  if (!quiet) {
    for (const auto& line : result.trace) std::cout << line << "\n";
  }
  if (result.derivable) {
    std::cout << "derivable at depth " << depth << "\n";
    std::cout << "translated proof script:\n" << to_text(result.script);
    return kExitOk;
  }
  std::cout << "not derivable at depth " << depth << "\n";
  return kExitClaimFailed;
}

int run_case_assess(const std::string& case_path, int depth,
                    const std::string& rule_override,
                    const std::string& out_path) {
  auto assurance_case = safebox::load_case_file(case_path);
  if (!rule_override.empty()) {
    const auto rule = rule_override == "yager"
                          ? safebox::CombinationRule::yager
                          : safebox::CombinationRule::dempster;
    for (auto& node : assurance_case.nodes) node.rule = rule;
  }
  auto report = safebox::assess_case(assurance_case, depth);
  safebox::print_report(assurance_case, report, std::cout);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << safebox::report_to_json(report);
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "safebox: conservative detection post-processing and the logical\n"
      "assurance argument around it"};
  app.require_subcommand(1);

  // learn
  std::string dataset_path, out_path;
  double margin = 1.0;
  double quantile = -1.0;
  auto* learn = app.add_subcommand(
      "learn", "learn enlargement ratios from a dataset's training split");
  learn->add_option("dataset", dataset_path, "dataset JSON file")->required();
  learn->add_option("-o,--output", out_path, "where to write the ratios JSON");
  learn->add_option("--margin", margin,
                    "multiplicative safety margin on the ratios (>= 1)");
  learn->add_option("--quantile", quantile,
                    "aggregate this per-pair ratio quantile instead of the max");

  // apply
  std::string apply_ratios;
  double nms_iou = -1.0;
  double score_threshold = 0.0;
  auto* apply_cmd = app.add_subcommand(
      "apply", "post-process a dataset's predictions with learned ratios");
  apply_cmd->add_option("dataset", dataset_path, "dataset JSON file")->required();
  apply_cmd->add_option("--ratios", apply_ratios, "ratios JSON from learn")
      ->required();
  apply_cmd->add_option("-o,--output", out_path, "output dataset JSON")
      ->required();
  apply_cmd->add_option("--iou-threshold", nms_iou,
                        "run NMS with this IoU threshold before enlarging");
  apply_cmd->add_option("--score-threshold", score_threshold,
                        "NMS score threshold (with --iou-threshold)");

  // eval
  std::string eval_ratios, csv_path;
  double eps = 0.0;
  auto* eval_cmd = app.add_subcommand(
      "eval", "report safety and IoU metrics, raw and post-processed");
  eval_cmd->add_option("dataset", dataset_path, "dataset JSON file")->required();
  eval_cmd->add_option("--ratios", eval_ratios, "ratios JSON from learn");
  eval_cmd->add_option("--eps", eps, "containment margin for the safety check");
  eval_cmd->add_option("-o,--output", out_path, "write the JSON report here");
  eval_cmd->add_option("--csv", csv_path, "write per-pair rows as CSV");

  // quadrants
  app.add_subcommand("quadrants",
                     "print the four fixtures where IoU and safety disagree");

  // prove
  std::string axioms_path, goal_name, script_path, use;
  bool quiet = false;
  auto* prove = app.add_subcommand(
      "prove", "check a proof script against an axiom file");
  prove->add_option("axioms", axioms_path, "axiom-set JSON file")->required();
  prove->add_option("goal", goal_name, "goal name from the file, or a formula")
      ->required();
  prove->add_option("script", script_path, "proof script file")->required();
  prove->add_option("--use", use, "comma-separated axiom names to allow");
  prove->add_flag("--quiet", quiet, "suppress the proof trace");

  // derive
  int depth = 3;
  auto* derive = app.add_subcommand(
      "derive", "search for a bounded forward derivation of a goal");
  derive->add_option("axioms", axioms_path, "axiom-set JSON file")->required();
  derive->add_option("goal", goal_name, "goal name from the file, or a formula")
      ->required();
  derive->add_option("--depth", depth, "term nesting bound (default 3)");
  derive->add_option("--use", use, "comma-separated axiom names to use");
  derive->add_flag("--quiet", quiet, "suppress the derivation trace");

  // case assess
  std::string case_path, rule_override;
  auto* case_cmd = app.add_subcommand("case", "assurance case commands");
  case_cmd->require_subcommand(1);
  auto* assess = case_cmd->add_subcommand(
      "assess", "combine evidence masses and check argument soundness");
  assess->add_option("case", case_path, "assurance case JSON file")->required();
  assess->add_option("--depth", depth, "derivation depth for the soundness gate");
  assess->add_option("--rule", rule_override,
                     "override every goal's combination rule (dempster|yager)")
      ->check(CLI::IsMember({"dempster", "yager"}));
  assess->add_option("-o,--output", out_path, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (learn->parsed()) {
      return run_learn(dataset_path, out_path, margin,
                       learn->count("--quantile")
                           ? std::optional<double>(quantile)
                           : std::nullopt);
    }
    if (apply_cmd->parsed()) {
      return run_apply(dataset_path, apply_ratios, out_path,
                       apply_cmd->count("--iou-threshold")
                           ? std::optional<double>(nms_iou)
                           : std::nullopt,
                       score_threshold);
    }
    if (eval_cmd->parsed()) {
      return run_eval(dataset_path, eval_ratios, eps, out_path, csv_path);
    }
    if (app.get_subcommand("quadrants")->parsed()) {
      return run_quadrants();
    }
    if (prove->parsed()) {
      return run_prove(axioms_path, goal_name, script_path, use, quiet);
    }
    if (derive->parsed()) {
      return run_derive(axioms_path, goal_name, depth, use, quiet);
    }
    if (assess->parsed()) {
      return run_case_assess(case_path, depth, rule_override, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
