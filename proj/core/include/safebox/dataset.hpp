#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "safebox/geometry.hpp"

namespace safebox {

/// A single detector output: a box with its confidence score.
struct Detection {
  BBox bbox;
  double score;  // in [0, 1], checked by the loader / constructors
};

enum class Split { training, odd };

/// One image with its human labels, detector predictions and, for synthetic
/// data where the true extent is known, optional ground-truth boxes aligned
/// index-by-index with the labels.
struct ImageRecord {
  std::string id;
  int width = 0;
  int height = 0;
  Split split = Split::training;
  std::vector<BBox> labels;
  std::optional<std::vector<BBox>> ground_truth;
  std::vector<Detection> predictions;
};

struct MatchPair {
  std::size_t prediction;
  std::size_t label;
  double iou;
};

/// Greedy one-to-one association of predictions with labels. Pairs are
/// listed in formation order, so their IoU values are non-increasing.
struct MatchResult {
  std::vector<MatchPair> pairs;
  std::vector<std::size_t> unmatched_labels;
  std::vector<std::size_t> unmatched_predictions;
};

/// Raised when a dataset file does not conform to the schema. The message
/// names the offending image id and field where one is known.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Load and fully validate a dataset file (see docs for the JSON schema).
/// Throws SchemaError on malformed content and std::runtime_error on I/O
/// failure. Records come back in file order.
std::vector<ImageRecord> load_dataset(const std::filesystem::path& path);

/// Write records in the canonical dataset format: sorted keys, two-space
/// indent, trailing newline. load followed by save is idempotent at the
/// byte level.
void save_dataset(const std::vector<ImageRecord>& records,
                  const std::filesystem::path& path);

/// Match predictions to labels greedily by descending IoU. Only pairs with
/// IoU > 0 are formed; ties break toward the lowest prediction index, then
/// the lowest label index. Deterministic.
MatchResult match(const ImageRecord& record);

}  // namespace safebox
