#include "safebox/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace safebox {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

BBox::BBox(double xmin, double ymin, double xmax, double ymax)
    : xmin_(xmin), ymin_(ymin), xmax_(xmax), ymax_(ymax) {
  require_finite(xmin, "BBox.xmin");
  require_finite(ymin, "BBox.ymin");
  require_finite(xmax, "BBox.xmax");
  require_finite(ymax, "BBox.ymax");
  if (!(xmin < xmax) || !(ymin < ymax)) {
    throw std::invalid_argument(
        "BBox requires xmin < xmax and ymin < ymax, got [" +
        std::to_string(xmin) + ", " + std::to_string(ymin) + ", " +
        std::to_string(xmax) + ", " + std::to_string(ymax) + "]");
  }
}

EnlargementRatios::EnlargementRatios(double rw, double rh) : rw_(rw), rh_(rh) {
  require_finite(rw, "EnlargementRatios.rw");
  require_finite(rh, "EnlargementRatios.rh");
  if (rw < 1.0 || rh < 1.0) {
    throw std::invalid_argument("enlargement ratios must be >= 1, got (" +
                                std::to_string(rw) + ", " +
                                std::to_string(rh) + ")");
  }
}

double iou(const BBox& a, const BBox& b) {
  const double ix = std::min(a.xmax(), b.xmax()) - std::max(a.xmin(), b.xmin());
  const double iy = std::min(a.ymax(), b.ymax()) - std::max(a.ymin(), b.ymin());
  if (ix <= 0.0 || iy <= 0.0) {
    return 0.0;
  }
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return inter / uni;
}

bool cover(const BBox& outer, const BBox& inner, double eps) {
  if (eps < 0.0 || !std::isfinite(eps)) {
    throw std::invalid_argument("cover margin eps must be finite and >= 0");
  }
  return outer.xmin() <= inner.xmin() - eps &&
         outer.ymin() <= inner.ymin() - eps &&
         outer.xmax() >= inner.xmax() + eps &&
         outer.ymax() >= inner.ymax() + eps;
}

BBox enlarge(const BBox& box, const EnlargementRatios& ratios) {
  const double cx = box.center_x();
  const double cy = box.center_y();
  const double hw = 0.5 * ratios.rw() * box.width();
  const double hh = 0.5 * ratios.rh() * box.height();
  return BBox(cx - hw, cy - hh, cx + hw, cy + hh);
}

namespace {

// The closed-form ratio touches the label edge exactly in real arithmetic;
// under doubles the subsequent enlarge() rounding can land one ulp short.
// Bump upward (same expression shape as enlarge uses) until containment
// holds, which costs at most a few ulps and stays far inside every stated
// tolerance.
double round_up_to_cover(double ratio, double center, double extent,
                         double lo, double hi) {
  while (!(center - 0.5 * ratio * extent <= lo &&
           center + 0.5 * ratio * extent >= hi)) {
    ratio = std::nextafter(ratio, std::numeric_limits<double>::infinity());
  }
  return ratio;
}

}  // namespace

EnlargementRatios min_enlargement_ratio(const BBox& pred, const BBox& label) {
  const double cx = pred.center_x();
  const double cy = pred.center_y();
  double rw = std::max(
      1.0, 2.0 * std::max(cx - label.xmin(), label.xmax() - cx) / pred.width());
  double rh = std::max(
      1.0,
      2.0 * std::max(cy - label.ymin(), label.ymax() - cy) / pred.height());
  rw = round_up_to_cover(rw, cx, pred.width(), label.xmin(), label.xmax());
  rh = round_up_to_cover(rh, cy, pred.height(), label.ymin(), label.ymax());
  return EnlargementRatios(rw, rh);
}

}  // namespace safebox
