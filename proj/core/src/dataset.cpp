#include "safebox/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace safebox {

namespace {

using nlohmann::json;

BBox parse_bbox(const json& j, const std::string& image_id,
                const std::string& field) {
  if (!j.is_array() || j.size() != 4) {
    throw SchemaError("image '" + image_id + "': " + field +
                      " must be an array [xmin, ymin, xmax, ymax]");
  }
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw SchemaError("image '" + image_id + "': " + field +
                        " coordinates must be numbers");
    }
  }
  try {
    return BBox(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                j[3].get<double>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError("image '" + image_id + "': " + field + ": " + e.what());
  }
}

std::vector<BBox> parse_box_list(const json& arr, const std::string& image_id,
                                 const std::string& field) {
  std::vector<BBox> out;
  if (!arr.is_array()) {
    throw SchemaError("image '" + image_id + "': " + field +
                      " must be an array");
  }
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& entry = arr[i];
    if (!entry.is_object() || !entry.contains("bbox")) {
      throw SchemaError("image '" + image_id + "': " + field + "[" +
                        std::to_string(i) + "] must be an object with a bbox");
    }
    out.push_back(parse_bbox(entry["bbox"], image_id,
                             field + "[" + std::to_string(i) + "].bbox"));
  }
  return out;
}

json bbox_to_json(const BBox& b) {
  return json::array({b.xmin(), b.ymin(), b.xmax(), b.ymax()});
}

}  // namespace

std::vector<ImageRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file: " + path.string());
  }
  json root;
  try {
    in >> root;
  } catch (const json::parse_error& e) {
    throw SchemaError("dataset file " + path.string() + ": " + e.what());
  }
  if (!root.is_object() || !root.contains("images") ||
      !root["images"].is_array()) {
    throw SchemaError("dataset file " + path.string() +
                      ": top level must be {\"images\": [...]}");
  }

  std::vector<ImageRecord> records;
  std::vector<std::string> seen_ids;
  for (const auto& jimg : root["images"]) {
    ImageRecord rec;
    if (!jimg.is_object() || !jimg.contains("id") || !jimg["id"].is_string()) {
      throw SchemaError("every image needs a string id");
    }
    rec.id = jimg["id"].get<std::string>();
    if (std::find(seen_ids.begin(), seen_ids.end(), rec.id) != seen_ids.end()) {
      throw SchemaError("duplicate image id '" + rec.id + "'");
    }
    seen_ids.push_back(rec.id);

    for (const char* key : {"width", "height"}) {
      if (!jimg.contains(key) || !jimg[key].is_number_integer() ||
          jimg[key].get<int>() <= 0) {
        throw SchemaError("image '" + rec.id + "': " + key +
                          " must be a positive integer");
      }
    }
    rec.width = jimg["width"].get<int>();
    rec.height = jimg["height"].get<int>();

    if (!jimg.contains("split") || !jimg["split"].is_string()) {
      throw SchemaError("image '" + rec.id +
                        "': split must be \"training\" or \"odd\"");
    }
    const std::string split = jimg["split"].get<std::string>();
    if (split == "training") {
      rec.split = Split::training;
    } else if (split == "odd") {
      rec.split = Split::odd;
    } else {
      throw SchemaError("image '" + rec.id + "': unknown split '" + split +
                        "'");
    }

    rec.labels = parse_box_list(jimg.value("labels", json::array()), rec.id,
                                "labels");
    if (jimg.contains("ground_truth")) {
      rec.ground_truth =
          parse_box_list(jimg["ground_truth"], rec.id, "ground_truth");
      if (rec.ground_truth->size() != rec.labels.size()) {
        throw SchemaError("image '" + rec.id +
                          "': ground_truth must align one-to-one with labels");
      }
    }

    const json jpreds = jimg.value("predictions", json::array());
    if (!jpreds.is_array()) {
      throw SchemaError("image '" + rec.id + "': predictions must be an array");
    }
    for (std::size_t i = 0; i < jpreds.size(); ++i) {
      const auto& jp = jpreds[i];
      const std::string field = "predictions[" + std::to_string(i) + "]";
      if (!jp.is_object() || !jp.contains("bbox") || !jp.contains("score") ||
          !jp["score"].is_number()) {
        throw SchemaError("image '" + rec.id + "': " + field +
                          " must carry bbox and numeric score");
      }
      const double score = jp["score"].get<double>();
      if (score < 0.0 || score > 1.0) {
        throw SchemaError("image '" + rec.id + "': " + field +
                          ".score must lie in [0, 1]");
      }
      rec.predictions.push_back(
          Detection{parse_bbox(jp["bbox"], rec.id, field + ".bbox"), score});
    }

    records.push_back(std::move(rec));
  }
  return records;
}

void save_dataset(const std::vector<ImageRecord>& records,
                  const std::filesystem::path& path) {
  json images = json::array();
  for (const auto& rec : records) {
    json jimg;
    jimg["id"] = rec.id;
    jimg["width"] = rec.width;
    jimg["height"] = rec.height;
    jimg["split"] = rec.split == Split::training ? "training" : "odd";
    json labels = json::array();
    for (const auto& b : rec.labels) {
      labels.push_back(json{{"bbox", bbox_to_json(b)}});
    }
    jimg["labels"] = labels;
    if (rec.ground_truth) {
      json gt = json::array();
      for (const auto& b : *rec.ground_truth) {
        gt.push_back(json{{"bbox", bbox_to_json(b)}});
      }
      jimg["ground_truth"] = gt;
    }
    json preds = json::array();
    for (const auto& d : rec.predictions) {
      preds.push_back(json{{"bbox", bbox_to_json(d.bbox)}, {"score", d.score}});
    }
    jimg["predictions"] = preds;
    images.push_back(std::move(jimg));
  }

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write dataset file: " + path.string());
  }
  out << json{{"images", images}}.dump(2) << "\n";
}

MatchResult match(const ImageRecord& record) {
  struct Candidate {
    double iou;
    std::size_t pred;
    std::size_t label;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < record.predictions.size(); ++p) {
    for (std::size_t l = 0; l < record.labels.size(); ++l) {
      const double v = iou(record.predictions[p].bbox, record.labels[l]);
      if (v > 0.0) {
        candidates.push_back({v, p, l});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.iou != b.iou) return a.iou > b.iou;
              if (a.pred != b.pred) return a.pred < b.pred;
              return a.label < b.label;
            });

  MatchResult result;
  std::vector<bool> pred_used(record.predictions.size(), false);
  std::vector<bool> label_used(record.labels.size(), false);
  for (const auto& c : candidates) {
    if (pred_used[c.pred] || label_used[c.label]) continue;
    pred_used[c.pred] = true;
    label_used[c.label] = true;
    result.pairs.push_back({c.pred, c.label, c.iou});
  }
  for (std::size_t l = 0; l < record.labels.size(); ++l) {
    if (!label_used[l]) result.unmatched_labels.push_back(l);
  }
  for (std::size_t p = 0; p < record.predictions.size(); ++p) {
    if (!pred_used[p]) result.unmatched_predictions.push_back(p);
  }
  return result;
}

}  // namespace safebox
