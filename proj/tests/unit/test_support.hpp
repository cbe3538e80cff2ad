#pragma once

// Shared fixtures and independent oracles for the unit tests.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "potd/dataset.hpp"
#include "potd/rng.hpp"
#include "potd/types.hpp"

namespace potd::test {

inline Matrix gaussian_matrix(Rng& rng, Index rows, Index cols) {
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) M(i, j) = rng.normal();
  }
  return M;
}

inline Matrix random_orthogonal(Rng& rng, Index p) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rng, p, p));
  return qr.householderQ() * Matrix::Identity(p, p);
}

// min over all permutations of (1/n) sum_i cost(i, perm(i)).
inline double enumerate_assignment(const Matrix& cost) {
  std::vector<Index> perm(static_cast<std::size_t>(cost.rows()));
  std::iota(perm.begin(), perm.end(), Index{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (Index i = 0; i < cost.rows(); ++i) total += cost(i, perm[static_cast<std::size_t>(i)]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(cost.rows());
}

// Transport between measures with rational weights k_i / N reduces to an
// N x N assignment after repeating atom i k_i times.
inline double enumerate_rational_transport(const Matrix& cost, const std::vector<int>& source_counts,
                                           const std::vector<int>& target_counts) {
  std::vector<Index> rows;
  std::vector<Index> cols;
  for (std::size_t i = 0; i < source_counts.size(); ++i) rows.insert(rows.end(), source_counts[i], static_cast<Index>(i));
  for (std::size_t j = 0; j < target_counts.size(); ++j) cols.insert(cols.end(), target_counts[j], static_cast<Index>(j));
  Matrix expanded(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      expanded(static_cast<Index>(a), static_cast<Index>(b)) = cost(rows[a], cols[b]);
    }
  }
  return enumerate_assignment(expanded);
}

inline double max_abs(const Matrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

inline double orthonormality_error(const Matrix& B) {
  return max_abs(B.transpose() * B - Matrix::Identity(B.cols(), B.cols()));
}

inline bool sign_convention_holds(const Matrix& B) {
  for (Index j = 0; j < B.cols(); ++j) {
    Index arg = 0;
    B.col(j).cwiseAbs().maxCoeff(&arg);
    if (!(B(arg, j) > 0.0)) return false;
  }
  return true;
}

// Two Gaussian classes in R^p with means 0 and `shift` * e1.
inline LabeledDataset two_blobs(Rng& rng, Index n_per_class, Index p, double shift) {
  LabeledDataset data;
  data.X = gaussian_matrix(rng, 2 * n_per_class, p);
  data.class_names = {"a", "b"};
  for (Index i = 0; i < 2 * n_per_class; ++i) {
    const int label = i < n_per_class ? 0 : 1;
    if (label == 1) data.X(i, 0) += shift;
    data.labels.push_back(label);
  }
  return data;
}

}  // namespace potd::test
