#include "roadfield/grid.hpp"

#include <cmath>

namespace roadfield {

Shape shape_from_string(const std::string& s) {
  if (s == "halfdisk") return Shape::Halfdisk;
  if (s == "rectangle") return Shape::Rectangle;
  throw GridError("unknown grid shape '" + s + "' (expected halfdisk or rectangle)");
}

std::string to_string(Shape s) {
  return s == Shape::Halfdisk ? "halfdisk" : "rectangle";
}

TruncatedGrid::TruncatedGrid(double R, double h, Shape shape)
    : R_(R), h_(h), shape_(shape) {
  if (!(R > 0.0) || !(h > 0.0)) throw GridError("R and h must be positive");
  const double ratio = R / h;
  n_ = (int)std::lround(ratio);
  if (std::fabs(ratio - n_) > 1e-9 * ratio)
    throw GridError("R/h must be an integer (got " + std::to_string(ratio) + ")");
  if (n_ < 2) throw GridError("R/h must be at least 2 (no interior otherwise)");

  field_lut_.assign((std::size_t)(2 * n_ + 1) * (n_ + 1), -1);
  // row-major bottom-up ordering, j = 1, 2, ...; the corner (+-R, 0) and the
  // whole truncation boundary are Dirichlet
  for (int j = 1; j <= n_; ++j) {
    const double y = j * h_;
    for (int k = 0; k <= 2 * n_; ++k) {
      const double x = -R_ + k * h_;
      if (interior(x, y)) {
        field_lut_[(std::size_t)j * (2 * n_ + 1) + k] = (int)field_nodes_.size();
        field_nodes_.push_back({k, j});
      }
    }
  }
}

bool TruncatedGrid::interior(double x, double y) const {
  if (y <= 0.0) return false;
  if (shape_ == Shape::Halfdisk) return x * x + y * y < R_ * R_ - 1e-12;
  return std::fabs(x) < R_ - 1e-12 && y < R_ - 1e-12;
}

NodeClass TruncatedGrid::classify(double x, double y) const {
  const double kr = (x + R_) / h_;
  const double jr = y / h_;
  const int k = (int)std::lround(kr);
  const int j = (int)std::lround(jr);
  if (std::fabs(kr - k) > 1e-9 || std::fabs(jr - j) > 1e-9 || j < 0)
    throw GridError("query point is not on the lattice");
  // bounding box: |x| <= R, 0 <= y <= R
  if (k < 0 || k > 2 * n_ || j > n_) return NodeClass::Outside;
  if (j == 0) {
    if (k == 0 || k == 2 * n_) return NodeClass::Dirichlet;  // corners (+-R, 0)
    return NodeClass::Trace;
  }
  return interior(x, y) ? NodeClass::Unknown : NodeClass::Dirichlet;
}

}  // namespace roadfield
