#pragma once

#include <span>
#include <vector>

namespace cmphase {

/// Symmetric positive definite band matrix with an in-place Cholesky
/// factorization. Storage is lower band: entry (i, j), i - bw <= j <= i.
class BandedSpd {
public:
  BandedSpd(int n, int bandwidth);

  int size() const { return n_; }
  int bandwidth() const { return bw_; }

  /// Adds v to entry (i, j); only |i - j| <= bandwidth is representable.
  void add(int i, int j, double v);
  double at(int i, int j) const;

  /// Replaces row and column i by the identity row.
  void decouple(int i);

  /// Throws std::runtime_error if the matrix is not positive definite.
  void factorize();
  bool factorized() const { return factorized_; }
  void solve_in_place(std::span<double> rhs) const;

private:
  double& ref(int i, int j) { return data_[static_cast<std::size_t>(i) * (bw_ + 1) + (j - i + bw_)]; }
  double ref(int i, int j) const { return data_[static_cast<std::size_t>(i) * (bw_ + 1) + (j - i + bw_)]; }

  int n_;
  int bw_;
  bool factorized_ = false;
  std::vector<double> data_;
};

} // namespace cmphase
