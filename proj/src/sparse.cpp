#include "roadfield/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace roadfield {

SparseMatrix SparseMatrix::Builder::build() const {
  SparseMatrix m;
  m.n_ = n_;
  const std::size_t nt = vals_.size();
  std::vector<std::size_t> order(nt);
  std::iota(order.begin(), order.end(), (std::size_t)0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rows_[a] != rows_[b]) return rows_[a] < rows_[b];
    return cols_[a] < cols_[b];
  });
  m.row_.assign(n_ + 1, 0);
  m.col_.reserve(nt);
  m.vals_.reserve(nt);
  std::size_t i = 0;
  for (int r = 0; r < n_; ++r) {
    while (i < nt && rows_[order[i]] == r) {
      const int c = cols_[order[i]];
      if (r < 0 || r >= n_ || c < 0 || c >= n_)
        throw std::out_of_range("sparse triplet outside matrix");
      double v = vals_[order[i]];
      ++i;
      while (i < nt && rows_[order[i]] == r && cols_[order[i]] == c) {
        v += vals_[order[i]];
        ++i;
      }
      if (v != 0.0) {
        m.col_.push_back(c);
        m.vals_.push_back(v);
      }
    }
    m.row_[r + 1] = (int)m.col_.size();
  }
  if (i != nt) throw std::out_of_range("sparse triplet outside matrix");
  return m;
}

double SparseMatrix::diagonal(int i) const {
  for (int p = row_[i]; p < row_[i + 1]; ++p)
    if (col_[p] == i) return vals_[p];
  return 0.0;
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (int r = 0; r < n_; ++r) {
    double acc = 0.0;
    for (int p = row_[r]; p < row_[r + 1]; ++p) acc += vals_[p] * x[col_[p]];
    y[r] = acc;
  }
  return y;
}

double SparseMatrix::gershgorin_floor() const {
  double floor = std::numeric_limits<double>::infinity();
  for (int r = 0; r < n_; ++r) {
    double diag = 0.0, off = 0.0;
    for (int p = row_[r]; p < row_[r + 1]; ++p) {
      if (col_[p] == r)
        diag = vals_[p];
      else
        off += std::fabs(vals_[p]);
    }
    floor = std::min(floor, diag - off);
  }
  return floor;
}

bool SparseMatrix::is_z_matrix() const {
  for (int r = 0; r < n_; ++r)
    for (int p = row_[r]; p < row_[r + 1]; ++p)
      if (col_[p] != r && vals_[p] > 0.0) return false;
  return true;
}

}  // namespace roadfield
