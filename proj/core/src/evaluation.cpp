#include "safebox/evaluation.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include <json.hpp>

namespace safebox {

EvalReport evaluate(const std::vector<ImageRecord>& records,
                    const std::optional<LearnedPostprocessor>& post,
                    const EvalOptions& options) {
  EvalReport report;
  const EnlargementRatios ratios =
      post ? post->ratios : EnlargementRatios(1.0, 1.0);

  std::size_t covered_raw = 0;
  std::size_t covered_post = 0;
  double iou_raw_sum = 0.0;
  double iou_post_sum = 0.0;

  for (const auto& rec : records) {
    report.n_labels += rec.labels.size();
    const MatchResult m = match(rec);
    report.n_missed += m.unmatched_labels.size();
    for (const auto& pair : m.pairs) {
      const BBox& pred = rec.predictions[pair.prediction].bbox;
      const BBox& target = rec.ground_truth
                               ? (*rec.ground_truth)[pair.label]
                               : rec.labels[pair.label];
      const BBox enlarged = enlarge(pred, ratios);

      PairRow row;
      row.image_id = rec.id;
      row.label_index = pair.label;
      row.iou_raw = iou(pred, target);
      row.iou_post = iou(enlarged, target);
      row.safe_raw = cover(pred, target, options.eps);
      row.safe_post = cover(enlarged, target, options.eps);
      const EnlargementRatios needed = min_enlargement_ratio(pred, target);
      row.rw_needed = needed.rw();
      row.rh_needed = needed.rh();

      covered_raw += row.safe_raw ? 1 : 0;
      covered_post += row.safe_post ? 1 : 0;
      iou_raw_sum += row.iou_raw;
      iou_post_sum += row.iou_post;

      const bool divergent = (row.iou_raw >= 0.5 && !row.safe_raw) ||
                             (row.iou_raw < 0.5 && row.safe_raw);
      if (divergent) {
        report.divergence_cases.push_back(
            {rec.id, pair.label, row.iou_raw, row.safe_raw});
      }
      report.rows.push_back(std::move(row));
    }
  }

  report.n_matched = report.rows.size();
  if (report.n_matched == 0) {
    report.empty = true;
    report.safe_rate_raw = 1.0;
    report.safe_rate_post = 1.0;
    report.mean_iou_raw = 0.0;
    report.mean_iou_post = 0.0;
  } else {
    const auto n = static_cast<double>(report.n_matched);
    report.safe_rate_raw = static_cast<double>(covered_raw) / n;
    report.safe_rate_post = static_cast<double>(covered_post) / n;
    report.mean_iou_raw = iou_raw_sum / n;
    report.mean_iou_post = iou_post_sum / n;
  }
  return report;
}

std::array<QuadrantFixture, 4> divergence_quadrants() {
  // (a) disjoint boxes, (b) strong overlap that still leaks the label,
  // (c) a loose prediction fully containing the label, (d) exact match.
  const BBox a_pred(0, 0, 1, 1), a_label(2, 2, 3, 3);
  const BBox b_pred(0, 0, 4, 4), b_label(0.5, 0.5, 4.5, 4.5);
  const BBox c_pred(0, 0, 4, 4), c_label(1.5, 1.5, 2.5, 2.5);
  const BBox d_pred(0, 0, 4, 4), d_label(0, 0, 4, 4);
  return {QuadrantFixture{'a', a_pred, a_label, iou(a_pred, a_label),
                          cover(a_pred, a_label)},
          QuadrantFixture{'b', b_pred, b_label, iou(b_pred, b_label),
                          cover(b_pred, b_label)},
          QuadrantFixture{'c', c_pred, c_label, iou(c_pred, c_label),
                          cover(c_pred, c_label)},
          QuadrantFixture{'d', d_pred, d_label, iou(d_pred, d_label),
                          cover(d_pred, d_label)}};
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["n_labels"] = report.n_labels;
  j["n_matched"] = report.n_matched;
  j["n_missed"] = report.n_missed;
  j["safe_rate_raw"] = report.safe_rate_raw;
  j["safe_rate_post"] = report.safe_rate_post;
  j["mean_iou_raw"] = report.mean_iou_raw;
  j["mean_iou_post"] = report.mean_iou_post;
  j["empty"] = report.empty;
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : report.divergence_cases) {
    cases.push_back({{"image_id", c.image_id},
                     {"label_index", c.label_index},
                     {"iou", c.iou},
                     {"safe", c.safe}});
  }
  j["divergence_cases"] = cases;
  return j.dump(2) + "\n";
}

void print_report(const EvalReport& report, std::ostream& out) {
  out << "labels:          " << report.n_labels << "\n"
      << "matched:         " << report.n_matched << "\n"
      << "missed:          " << report.n_missed << "\n";
  out << std::fixed << std::setprecision(6);
  out << "safe rate raw:   " << report.safe_rate_raw
      << (report.empty ? "  (empty: vacuous)" : "") << "\n"
      << "safe rate post:  " << report.safe_rate_post
      << (report.empty ? "  (empty: vacuous)" : "") << "\n"
      << "mean IoU raw:    " << report.mean_iou_raw << "\n"
      << "mean IoU post:   " << report.mean_iou_post << "\n"
      << "divergent pairs: " << report.divergence_cases.size() << "\n";
  out.unsetf(std::ios_base::floatfield);
}

void write_pair_csv(const EvalReport& report,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write csv file: " + path.string());
  }
  out << "image_id,iou_raw,iou_post,safe_raw,safe_post,rw_needed,rh_needed\n";
  out << std::setprecision(12);
  for (const auto& row : report.rows) {
    out << row.image_id << ',' << row.iou_raw << ',' << row.iou_post << ','
        << (row.safe_raw ? 1 : 0) << ',' << (row.safe_post ? 1 : 0) << ','
        << row.rw_needed << ',' << row.rh_needed << "\n";
  }
}

}  // namespace safebox
