#include "potd/metrics.hpp"

#include <sstream>

#include "potd/errors.hpp"

namespace potd {

namespace {

constexpr double kOrthonormalTolerance = 1e-8;

void require_orthonormal(const Matrix& m, const char* what) {
  const Matrix gram = m.transpose() * m;
  if ((gram - Matrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff() > kOrthonormalTolerance) {
    throw InvalidInputError(std::string(what) + " does not have orthonormal columns");
  }
}

void require_same_ambient(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    std::ostringstream os;
    os << "bases live in different dimensions (" << a.rows() << " vs " << b.rows() << ")";
    throw InvalidInputError(os.str());
  }
  if (a.cols() == 0 || b.cols() == 0) throw InvalidInputError("empty basis");
}

}  // namespace

TrueSubspace TrueSubspace::canonical(Index p, Index r) {
  if (r < 1 || r > p) throw InvalidInputError("canonical subspace needs 1 <= r <= p");
  return TrueSubspace{Matrix::Identity(p, r)};
}

double subspace_distance(const Matrix& estimated, const Matrix& truth) {
  require_same_ambient(estimated, truth);
  require_orthonormal(estimated, "estimated basis");
  require_orthonormal(truth, "true basis");
  const Matrix residual = truth - estimated * (estimated.transpose() * truth);
  return residual.norm();
}

double subspace_distance(const Basis& estimated, const TrueSubspace& truth) {
  return subspace_distance(estimated.vectors, truth.basis);
}

double sin_distance(const Matrix& V, const Matrix& V_hat) {
  require_same_ambient(V, V_hat);
  require_orthonormal(V, "reference basis");
  require_orthonormal(V_hat, "estimated basis");
  const Index p = V.rows();
  const Matrix proj = V * V.transpose();
  const Matrix complement = Matrix::Identity(p, p) - V_hat * V_hat.transpose();
  return (proj * complement).norm();
}

}  // namespace potd
