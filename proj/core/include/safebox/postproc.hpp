#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "safebox/dataset.hpp"
#include "safebox/geometry.hpp"

namespace safebox {

struct NmsConfig {
  double iou_threshold = 0.5;   // in (0, 1]
  double score_threshold = 0.0; // in [0, 1]
};

struct LearnOptions {
  std::string dataset_id = "unnamed";
  // Multiplicative headroom on top of the learned ratios. The coverage
  // guarantee needs only 1.0; values > 1 buy slack against distribution
  // drift at the price of larger boxes.
  double margin = 1.0;
  // When set, aggregate the given per-pair ratio quantile instead of the
  // maximum. Off by default: only the max preserves the in-sample
  // coverage guarantee.
  std::optional<double> quantile;
};

/// Result of ratio learning over a training split: the aggregated ratios
/// plus enough provenance to audit them.
struct LearnedPostprocessor {
  EnlargementRatios ratios{1.0, 1.0};
  std::string dataset_id;
  std::size_t pair_count = 0;
  double margin = 1.0;
  std::vector<EnlargementRatios> per_pair_ratios;

  /// True when no matched pair contributed, i.e. the (1, 1) ratios are a
  /// default rather than a learned value.
  bool empty_training() const { return pair_count == 0; }
};

/// Greedy non-max suppression: drop detections scoring below the score
/// threshold, then repeatedly keep the highest-scoring box and discard
/// any remaining box whose IoU with it reaches the threshold. Ties break
/// toward the earlier input index.
std::vector<Detection> nms(const std::vector<Detection>& detections,
                           const NmsConfig& config);

/// Learn enlargement ratios from the training split of `records` (other
/// splits are ignored). Each matched prediction/label pair contributes its
/// minimal ratio; aggregation is the componentwise maximum unless a
/// quantile is requested. No pairs at all is legal and yields (1, 1) with
/// the empty_training flag set.
LearnedPostprocessor learn_ratios(const std::vector<ImageRecord>& records,
                                  const LearnOptions& options = {});

/// Enlarge every detection by the learned ratios. Scores and order are
/// preserved.
std::vector<Detection> apply(const LearnedPostprocessor& post,
                             const std::vector<Detection>& detections);

/// JSON round-trip: {"rw":..,"rh":..,"pairs":..,"dataset":..,"margin":..}.
/// The per-pair audit list is in-memory only and not serialized.
void save_postprocessor(const LearnedPostprocessor& post,
                        const std::filesystem::path& path);
LearnedPostprocessor load_postprocessor(const std::filesystem::path& path);

}  // namespace safebox
