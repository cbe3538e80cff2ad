#pragma once

#include "potd/potd.hpp"
#include "potd/types.hpp"

namespace potd {

/// Orthonormal basis of the true reduction subspace of a synthetic model.
struct TrueSubspace {
  Matrix basis;

  Index dim() const noexcept { return basis.cols(); }
  /// span(e_0, ..., e_{r-1}) in R^p.
  static TrueSubspace canonical(Index p, Index r);
};

/// ||(I - B B^T) B0||_F for orthonormal B (estimate) and B0 (truth).
/// Lies in [0, sqrt(r0)].
double subspace_distance(const Matrix& estimated, const Matrix& truth);
double subspace_distance(const Basis& estimated, const TrueSubspace& truth);

/// ||P_V (I - P_Vhat)||_F; zero iff the spans coincide.
double sin_distance(const Matrix& V, const Matrix& V_hat);

}  // namespace potd
