#pragma once

#include <cstddef>
#include <vector>

#include "emd/errors.hpp"

namespace emd {

// Dense square matrix, row-major. Plain storage shared by cost matrices,
// transport plans and Hessians.
class SquareMatrix {
 public:
  SquareMatrix() = default;

  explicit SquareMatrix(int n, double fill = 0.0) : n_(n), a_(static_cast<size_t>(n) * n, fill) {
    if (n < 1) raise(errc::bad_size, "matrix dimension must be >= 1");
  }

  SquareMatrix(int n, std::vector<double> data) : n_(n), a_(std::move(data)) {
    if (n < 1 || a_.size() != static_cast<size_t>(n) * n)
      raise(errc::bad_size, "matrix data does not match dimension");
  }

  int n() const { return n_; }
  double at(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  double& at(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

}  // namespace emd
