#pragma once

#include <stdexcept>

namespace safebox {

/// Axis-aligned bounding box in image pixel coordinates (fractional allowed).
/// Construction enforces strictly positive width and height and finite
/// coordinates; every BBox in the system is valid by construction.
class BBox {
 public:
  BBox(double xmin, double ymin, double xmax, double ymax);

  double xmin() const { return xmin_; }
  double ymin() const { return ymin_; }
  double xmax() const { return xmax_; }
  double ymax() const { return ymax_; }

  double width() const { return xmax_ - xmin_; }
  double height() const { return ymax_ - ymin_; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (xmin_ + xmax_); }
  double center_y() const { return 0.5 * (ymin_ + ymax_); }

  bool operator==(const BBox& other) const = default;

 private:
  double xmin_, ymin_, xmax_, ymax_;
};

/// Per-axis multipliers applied by the conservative post-processor.
/// Ratios below 1 would shrink a box and void the coverage guarantee,
/// so they are rejected at construction.
class EnlargementRatios {
 public:
  EnlargementRatios(double rw, double rh);

  double rw() const { return rw_; }
  double rh() const { return rh_; }

  bool operator==(const EnlargementRatios& other) const = default;

 private:
  double rw_, rh_;
};

/// Intersection-over-union of two boxes, in [0, 1]. Boxes whose interiors
/// do not overlap score 0 even when their edges touch.
double iou(const BBox& a, const BBox& b);

/// Containment with margin: outer contains inner with every edge at least
/// `eps` away (closed comparison, so a box covers itself at eps = 0).
bool cover(const BBox& outer, const BBox& inner, double eps = 0.0);

/// Scale a box about its center. The result may extend past image bounds;
/// callers must not clamp it or the coverage guarantee breaks.
BBox enlarge(const BBox& box, const EnlargementRatios& ratios);

/// Smallest ratios (each >= 1) such that cover(enlarge(pred, r), label)
/// holds. Closed form per axis: the enlarged half-extent must reach the
/// farther label edge as measured from the prediction center.
EnlargementRatios min_enlargement_ratio(const BBox& pred, const BBox& label);

}  // namespace safebox
