#include "safebox/postproc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace safebox {

namespace {

void validate(const NmsConfig& c) {
  if (!(c.iou_threshold > 0.0 && c.iou_threshold <= 1.0)) {
    throw std::invalid_argument("nms iou_threshold must lie in (0, 1]");
  }
  if (!(c.score_threshold >= 0.0 && c.score_threshold <= 1.0)) {
    throw std::invalid_argument("nms score_threshold must lie in [0, 1]");
  }
}

double ratio_quantile(std::vector<double> values, double q) {
  // Nearest-rank quantile over the sorted per-pair ratios.
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(values.size())));
  return values[std::min(values.size() - 1, rank == 0 ? 0 : rank - 1)];
}

}  // namespace

std::vector<Detection> nms(const std::vector<Detection>& detections,
                           const NmsConfig& config) {
  validate(config);

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (detections[i].score >= config.score_threshold) {
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return detections[a].score > detections[b].score;
                   });

  std::vector<Detection> kept;
  std::vector<bool> suppressed(detections.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t cur = order[i];
    if (suppressed[cur]) continue;
    kept.push_back(detections[cur]);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const std::size_t other = order[j];
      if (suppressed[other]) continue;
      if (iou(detections[cur].bbox, detections[other].bbox) >=
          config.iou_threshold) {
        suppressed[other] = true;
      }
    }
  }
  return kept;
}

LearnedPostprocessor learn_ratios(const std::vector<ImageRecord>& records,
                                  const LearnOptions& options) {
  if (options.margin < 1.0 || !std::isfinite(options.margin)) {
    throw std::invalid_argument("learn margin must be finite and >= 1");
  }
  if (options.quantile &&
      !(*options.quantile > 0.0 && *options.quantile <= 1.0)) {
    throw std::invalid_argument("learn quantile must lie in (0, 1]");
  }

  LearnedPostprocessor post;
  post.dataset_id = options.dataset_id;
  post.margin = options.margin;

  for (const auto& rec : records) {
    if (rec.split != Split::training) continue;
    const MatchResult m = match(rec);
    for (const auto& pair : m.pairs) {
      post.per_pair_ratios.push_back(min_enlargement_ratio(
          rec.predictions[pair.prediction].bbox, rec.labels[pair.label]));
    }
  }
  post.pair_count = post.per_pair_ratios.size();

  double rw = 1.0;
  double rh = 1.0;
  if (!post.per_pair_ratios.empty()) {
    if (options.quantile) {
      std::vector<double> rws, rhs;
      for (const auto& r : post.per_pair_ratios) {
        rws.push_back(r.rw());
        rhs.push_back(r.rh());
      }
      rw = ratio_quantile(std::move(rws), *options.quantile);
      rh = ratio_quantile(std::move(rhs), *options.quantile);
    } else {
      for (const auto& r : post.per_pair_ratios) {
        rw = std::max(rw, r.rw());
        rh = std::max(rh, r.rh());
      }
    }
  }
  post.ratios = EnlargementRatios(rw * options.margin, rh * options.margin);
  return post;
}

std::vector<Detection> apply(const LearnedPostprocessor& post,
                             const std::vector<Detection>& detections) {
  std::vector<Detection> out;
  out.reserve(detections.size());
  for (const auto& d : detections) {
    out.push_back(Detection{enlarge(d.bbox, post.ratios), d.score});
  }
  return out;
}

void save_postprocessor(const LearnedPostprocessor& post,
                        const std::filesystem::path& path) {
  nlohmann::json j{{"rw", post.ratios.rw()},
                   {"rh", post.ratios.rh()},
                   {"pairs", post.pair_count},
                   {"dataset", post.dataset_id},
                   {"margin", post.margin}};
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write ratios file: " + path.string());
  }
  out << j.dump(2) << "\n";
}

LearnedPostprocessor load_postprocessor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open ratios file: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("ratios file " + path.string() + ": " + e.what());
  }
  for (const char* key : {"rw", "rh", "pairs", "dataset", "margin"}) {
    if (!j.contains(key)) {
      throw std::runtime_error("ratios file " + path.string() +
                               " is missing field '" + key + "'");
    }
  }
  LearnedPostprocessor post;
  post.ratios = EnlargementRatios(j["rw"].get<double>(), j["rh"].get<double>());
  post.pair_count = j["pairs"].get<std::size_t>();
  post.dataset_id = j["dataset"].get<std::string>();
  post.margin = j["margin"].get<double>();
  return post;
}

}  // namespace safebox
