#pragma once

#include <span>
#include <string>
#include <vector>

#include "potd/dataset.hpp"
#include "potd/ot.hpp"
#include "potd/types.hpp"

namespace potd {

/// Orthonormal p x r basis of an estimated reduction subspace, expressed in
/// the original predictor coordinates.
struct Basis {
  Matrix vectors;
  // POTD: singular values of the stacked displacement matrix. The moment
  // baselines store the eigenvalues of their kernel matrix here instead.
  Vector singular_values;
  bool whitening_applied = false;
  std::vector<std::string> warnings;

  Index ambient_dim() const noexcept { return vectors.rows(); }
  Index rank() const noexcept { return vectors.cols(); }
};

/// Centered, whitened predictors: Z' Z / n = I.
struct Whitening {
  Matrix Z;
  Vector mean;
  // Inverse symmetric square root of the sample covariance. Maps a direction
  // found in whitened coordinates back to predictor coordinates.
  Matrix back_transform;

  /// back_transform * directions, re-orthonormalized with column order and
  /// the sign convention applied.
  Matrix to_original(const Matrix& directions) const;
};

Whitening whiten(const Matrix& X);

/// Flips each column so its largest-magnitude entry is positive.
void apply_sign_convention(Matrix& vectors);

/// Orthonormalizes columns in order (span of every leading block is kept),
/// then applies the sign convention.
Matrix orthonormalize(const Matrix& vectors);

struct DisplacementMatrix {
  Matrix rows;  // n_source x p
  int source_class = 0;
  int target_class = 0;
};

/// diag(a) X_source - G X_target.
DisplacementMatrix displacement_matrix(const DiscreteMeasure& source,
                                       const DiscreteMeasure& target,
                                       const CouplingMatrix& coupling);

struct PotdFit {
  Basis basis;
  // Every Delta_ij in stacking order (i ascending, then j ascending, j != i),
  // in the coordinates the fit was computed in.
  std::vector<DisplacementMatrix> displacements;
  std::vector<CouplingMatrix> couplings;  // parallel to displacements
};

/// Principal optimal transport directions. Fits one coupling per unordered
/// class pair, stacks the displacement matrices of every ordered pair and
/// returns the leading r right singular vectors of the stack.
Basis potd_fit(const LabeledDataset& data, Index r, const SolverConfig& solver = {},
               bool whiten_predictors = true);

/// Same as potd_fit but keeps the intermediate displacements and couplings.
PotdFit potd_fit_detailed(const LabeledDataset& data, Index r, const SolverConfig& solver = {},
                          bool whiten_predictors = true);

/// Continuous response: each cut c splits the sample into {y < c} and
/// {y >= c}; displacements of all binary problems are pooled.
Basis potd_fit_continuous(const Matrix& X, const Vector& y, Index r, std::span<const double> cuts,
                          const SolverConfig& solver = {}, bool whiten_predictors = true);

/// Empirical quantiles at the given probabilities (linear interpolation
/// between order statistics).
std::vector<double> quantile_cuts(const Vector& y, std::span<const double> probabilities);

/// The {1/3, 2/3} quantiles of y.
std::vector<double> default_cuts(const Vector& y);

inline constexpr double kDefaultDimensionThreshold = 0.90;

/// Smallest r whose leading singular values reach `threshold` of the total.
Index estimate_dimension(const Vector& singular_values,
                         double threshold = kDefaultDimensionThreshold);

struct SecondOrderDisplacement {
  Matrix sigma;        // p x p, symmetric PSD
  Vector eigenvalues;  // nonincreasing
  Matrix eigenvectors; // columns match eigenvalues, sign convention applied

  Matrix leading(Index r) const { return eigenvectors.leftCols(r); }
};

/// Weighted outer-product average of the displacements x - phi(x), with
/// phi(x_l) the barycentric image of x_l divided by its mass.
SecondOrderDisplacement second_order_displacement(const DiscreteMeasure& source,
                                                  const DiscreteMeasure& target,
                                                  const CouplingMatrix& coupling);

/// X * basis.vectors.
Matrix project(const Matrix& X, const Basis& basis);

}  // namespace potd
