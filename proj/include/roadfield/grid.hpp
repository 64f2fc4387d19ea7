#ifndef ROADFIELD_GRID_HPP
#define ROADFIELD_GRID_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace roadfield {

enum class Shape { Halfdisk, Rectangle };

Shape shape_from_string(const std::string& s);
std::string to_string(Shape s);

enum class NodeClass { Unknown, Dirichlet, Trace, Outside };

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Uniform discretization of the truncated road interval I_R = (-R, R) and
// the field half-disks (or rectangles) over two sides. Road unknowns are the
// interior nodes x = -R + k h, k = 1 .. 2n-1 with n = R/h; the endpoints
// x = +-R are Dirichlet. Field unknowns are lattice nodes (x, y), y >= h,
// passing the interior test; y = 0 values are eliminated through the
// exchange condition and are not unknowns here.
//
// Global index order: road left-to-right, then field side 1 row-major
// bottom-up, then field side 2. Immutable after construction.
class TruncatedGrid {
 public:
  TruncatedGrid(double R, double h, Shape shape);

  double R() const { return R_; }
  double h() const { return h_; }
  Shape shape() const { return shape_; }
  int n() const { return n_; }                     // R/h

  int road_count() const { return 2 * n_ - 1; }
  int field_count() const { return (int)field_nodes_.size(); }  // per side
  int size() const { return road_count() + 2 * field_count(); }

  double road_x(int k) const { return -R_ + k * h_; }  // k = 1 .. 2n-1

  struct FieldNode { int k, j; };                  // x = -R + k h, y = j h
  const std::vector<FieldNode>& field_nodes() const { return field_nodes_; }
  double field_x(const FieldNode& nd) const { return -R_ + nd.k * h_; }
  double field_y(const FieldNode& nd) const { return nd.j * h_; }

  // -1 when (k, j) is not an unknown.
  int field_local(int k, int j) const {
    if (k < 0 || k > 2 * n_ || j < 1 || j > n_) return -1;
    return field_lut_[(std::size_t)j * (2 * n_ + 1) + k];
  }

  int road_index(int k) const { return k - 1; }
  int field_index(int side, int local) const {
    return road_count() + side * field_count() + local;
  }

  bool interior(double x, double y) const;
  NodeClass classify(double x, double y) const;    // throws on off-lattice query

 private:
  double R_, h_;
  Shape shape_;
  int n_;
  std::vector<FieldNode> field_nodes_;
  std::vector<int> field_lut_;
};

}  // namespace roadfield

#endif
