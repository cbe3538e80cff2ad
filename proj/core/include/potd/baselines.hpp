#pragma once

#include "potd/dataset.hpp"
#include "potd/potd.hpp"

namespace potd {

/// Sliced inverse regression with the classes as slices. At most k-1
/// directions carry information, so r is clamped to k-1; the clamp is
/// recorded in Basis::warnings rather than raised.
Basis sir_fit(const LabeledDataset& data, Index r);

/// Sliced average variance estimation: leading eigenvectors of
/// sum_s w_s (I - cov_s)^2 in whitened coordinates.
Basis save_fit(const LabeledDataset& data, Index r);

/// Leading eigenvectors of the sample covariance. Unsupervised.
Basis pca_fit(const Matrix& X, Index r);

}  // namespace potd
