#pragma once

#include <span>
#include <vector>

namespace kvlab {

// n x n matrix with entries only at column (row + k) mod n, |k| <= bandwidth.
class CyclicBandedMatrix {
 public:
  CyclicBandedMatrix(int n, int bandwidth);

  int size() const { return n_; }
  int bandwidth() const { return b_; }

  double& at(int row, int offset) { return data_[row * width() + offset + b_]; }
  double at(int row, int offset) const { return data_[row * width() + offset + b_]; }

  std::vector<double> multiply(std::span<const double> x) const;

  // Bordered elimination: band LU without pivoting on the leading
  // (n-b) x (n-b) block, dense pivoted solve on the b x b Schur complement.
  // The leading block must admit LU without pivoting, e.g. diagonally
  // dominant by columns or a column-scaled SPD matrix.
  std::vector<double> solve(std::span<const double> rhs) const;

  // max_i sum_j |a_ij|
  double max_abs_row_sum() const;

 private:
  int width() const { return 2 * b_ + 1; }
  int n_;
  int b_;
  std::vector<double> data_;
};

}  // namespace kvlab
