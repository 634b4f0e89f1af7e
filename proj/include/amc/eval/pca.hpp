#pragma once

#include <array>

#include "amc/nn/tensor.hpp"

namespace amc::eval {

struct Pca2d {
  nn::TensorD mean;        // d
  nn::TensorD components;  // 2 x d, rows ordered by descending eigenvalue
  std::array<double, 2> eigenvalues{};
  nn::TensorD projection;  // n x 2
};

// Two-component PCA of an n x d point cloud (n >= 3). The covariance is
// eigen-decomposed by power iteration with deflation; each component's
// largest-magnitude loading is made positive (ties: lowest index). Throws
// ValueError for n < 3 or when all points coincide.
Pca2d pca_fit_2d(const nn::TensorD& data);

// Projection of pca_fit_2d.
nn::TensorD pca_2d(const nn::TensorD& data);

}  // namespace amc::eval
