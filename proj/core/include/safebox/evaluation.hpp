#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "safebox/dataset.hpp"
#include "safebox/postproc.hpp"

namespace safebox {

/// One matched prediction/label pair with its metrics before and after
/// enlargement. "Safe" means the (possibly enlarged) prediction covers the
/// assessment target, which is the ground-truth box when the dataset
/// carries one and the label box otherwise.
struct PairRow {
  std::string image_id;
  std::size_t label_index;
  double iou_raw;
  double iou_post;
  bool safe_raw;
  bool safe_post;
  double rw_needed;
  double rh_needed;
};

/// A matched pair where the usual IoU reading and the safety verdict
/// disagree: IoU at or above 0.5 yet unsafe, or below 0.5 yet safe.
struct DivergenceCase {
  std::string image_id;
  std::size_t label_index;
  double iou;
  bool safe;
};

struct EvalReport {
  std::size_t n_labels = 0;
  std::size_t n_matched = 0;
  std::size_t n_missed = 0;
  double safe_rate_raw = 1.0;
  double safe_rate_post = 1.0;
  double mean_iou_raw = 0.0;
  double mean_iou_post = 0.0;
  // Rates over zero matched pairs are vacuously 1 and flagged here rather
  // than reported as NaN.
  bool empty = false;
  std::vector<DivergenceCase> divergence_cases;
  std::vector<PairRow> rows;
};

struct EvalOptions {
  double eps = 0.0;  // cover margin used for the safety verdict
};

/// Score every matched pair of every record, raw and after enlargement by
/// `post` (pass nullopt for raw-only evaluation; post metrics then equal
/// the raw ones). Unmatched labels are counted as misses and kept out of
/// the safe rates.
EvalReport evaluate(const std::vector<ImageRecord>& records,
                    const std::optional<LearnedPostprocessor>& post,
                    const EvalOptions& options = {});

/// The four canonical prediction/label configurations showing that IoU
/// and safety can disagree: disjoint (IoU 0, unsafe), high overlap without
/// containment (IoU > 0.5, unsafe), loose containment (IoU < 0.5, safe),
/// exact match (IoU 1, safe).
struct QuadrantFixture {
  char quadrant;  // 'a'..'d'
  BBox pred;
  BBox label;
  double iou;
  bool safe;
};
std::array<QuadrantFixture, 4> divergence_quadrants();

std::string report_to_json(const EvalReport& report);
void print_report(const EvalReport& report, std::ostream& out);
void write_pair_csv(const EvalReport& report,
                    const std::filesystem::path& path);

}  // namespace safebox
