#ifndef ROADFIELD_SPARSE_HPP
#define ROADFIELD_SPARSE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace roadfield {

// Compressed-row sparse matrix. Column indices are strictly increasing
// within each row and exact zeros are dropped at build time.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  int n() const { return n_; }
  std::size_t nnz() const { return vals_.size(); }

  std::span<const int> row_offsets() const { return row_; }
  std::span<const int> col_indices() const { return col_; }
  std::span<const double> values() const { return vals_; }

  double diagonal(int i) const;
  std::vector<double> multiply(std::span<const double> x) const;

  // min_i (A_ii - sum_{j != i} |A_ij|), the Gershgorin lower bound on
  // eigenvalue real parts.
  double gershgorin_floor() const;

  // true when every off-diagonal entry is <= 0
  bool is_z_matrix() const;

  // Accumulating triplet builder; duplicate entries are summed.
  class Builder {
   public:
    explicit Builder(int n) : n_(n) {}
    void add(int row, int col, double value) {
      rows_.push_back(row);
      cols_.push_back(col);
      vals_.push_back(value);
    }
    SparseMatrix build() const;

   private:
    int n_;
    std::vector<int> rows_, cols_;
    std::vector<double> vals_;
  };

 private:
  int n_ = 0;
  std::vector<int> row_{0};
  std::vector<int> col_;
  std::vector<double> vals_;
};

}  // namespace roadfield

#endif
