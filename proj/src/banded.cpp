#include <cmphase/banded.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cmphase {

BandedSpd::BandedSpd(int n, int bandwidth)
    : n_(n), bw_(bandwidth), data_(static_cast<std::size_t>(n) * (bandwidth + 1), 0.0) {
  if (n < 1 || bandwidth < 0) throw std::invalid_argument("BandedSpd: bad dimensions");
}

void BandedSpd::add(int i, int j, double v) {
  if (j > i) std::swap(i, j);
  if (i - j > bw_) throw std::out_of_range("BandedSpd: entry outside the band");
  ref(i, j) += v;
  factorized_ = false;
}

double BandedSpd::at(int i, int j) const {
  if (j > i) std::swap(i, j);
  if (i - j > bw_) return 0.0;
  return ref(i, j);
}

void BandedSpd::decouple(int i) {
  for (int j = std::max(0, i - bw_); j < i; ++j) ref(i, j) = 0.0;
  for (int r = i + 1; r <= std::min(n_ - 1, i + bw_); ++r) ref(r, i) = 0.0;
  ref(i, i) = 1.0;
  factorized_ = false;
}

void BandedSpd::factorize() {
  for (int i = 0; i < n_; ++i) {
    const int j0 = std::max(0, i - bw_);
    for (int j = j0; j <= i; ++j) {
      double s = ref(i, j);
      for (int k = std::max(j0, j - bw_); k < j; ++k) s -= ref(i, k) * ref(j, k);
      if (j == i) {
        if (!(s > 0.0)) throw std::runtime_error("BandedSpd: matrix is not positive definite");
        ref(i, i) = std::sqrt(s);
      } else {
        ref(i, j) = s / ref(j, j);
      }
    }
  }
  factorized_ = true;
}

void BandedSpd::solve_in_place(std::span<double> rhs) const {
  if (!factorized_) throw std::logic_error("BandedSpd: solve before factorize");
  for (int i = 0; i < n_; ++i) {
    double s = rhs[static_cast<std::size_t>(i)];
    for (int k = std::max(0, i - bw_); k < i; ++k) s -= ref(i, k) * rhs[static_cast<std::size_t>(k)];
    rhs[static_cast<std::size_t>(i)] = s / ref(i, i);
  }
  for (int i = n_ - 1; i >= 0; --i) {
    double s = rhs[static_cast<std::size_t>(i)];
    for (int k = i + 1; k <= std::min(n_ - 1, i + bw_); ++k) s -= ref(k, i) * rhs[static_cast<std::size_t>(k)];
    rhs[static_cast<std::size_t>(i)] = s / ref(i, i);
  }
}

} // namespace cmphase
