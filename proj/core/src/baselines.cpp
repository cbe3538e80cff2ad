#include "potd/baselines.hpp"

#include <sstream>

#include "potd/errors.hpp"

namespace potd {

namespace {

void require_rank(Index r, Index p) {
  if (r < 1 || r > p) {
    std::ostringstream os;
    os << "requested dimension r=" << r << " must be in [1, " << p << "]";
    throw InvalidInputError(os.str());
  }
}

// Leading eigenpairs of a symmetric kernel, nonincreasing.
void leading_eigen(const Matrix& kernel, Vector& values, Matrix& vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (kernel + kernel.transpose()));
  if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  values = solver.eigenvalues().reverse();
  vectors = solver.eigenvectors().rowwise().reverse();
}

}  // namespace

Basis sir_fit(const LabeledDataset& data, Index r) {
  data.validate();
  const Index p = data.dim();
  require_rank(r, p);
  const Whitening whitening = whiten(data.X);
  const auto members = data.class_members();
  const double n = static_cast<double>(data.size());

  Matrix kernel = Matrix::Zero(p, p);
  for (const auto& rows : members) {
    Vector mean = Vector::Zero(p);
    for (const Index i : rows) mean += whitening.Z.row(i).transpose();
    mean /= static_cast<double>(rows.size());
    kernel.noalias() += (static_cast<double>(rows.size()) / n) * mean * mean.transpose();
  }

  Basis basis;
  Matrix vectors;
  leading_eigen(kernel, basis.singular_values, vectors);
  const Index informative = static_cast<Index>(members.size()) - 1;
  Index effective = r;
  if (r > informative) {
    effective = informative;
    std::ostringstream os;
    os << "SIR dimension clamped from " << r << " to k-1=" << informative;
    basis.warnings.push_back(os.str());
  }
  basis.vectors = whitening.to_original(vectors.leftCols(effective));
  basis.whitening_applied = true;
  return basis;
}

Basis save_fit(const LabeledDataset& data, Index r) {
  data.validate();
  const Index p = data.dim();
  require_rank(r, p);
  const Whitening whitening = whiten(data.X);
  const auto members = data.class_members();
  const double n = static_cast<double>(data.size());

  const Matrix identity = Matrix::Identity(p, p);
  Matrix kernel = Matrix::Zero(p, p);
  for (std::size_t c = 0; c < members.size(); ++c) {
    const auto& rows = members[c];
    if (rows.size() < 2) {
      throw DegenerateInputError("SAVE needs at least two samples in class '" +
                                 data.class_names[c] + "'");
    }
    Matrix slice(static_cast<Index>(rows.size()), p);
    for (std::size_t l = 0; l < rows.size(); ++l) slice.row(static_cast<Index>(l)) = whitening.Z.row(rows[l]);
    const Matrix centered = slice.rowwise() - slice.colwise().mean();
    const Matrix cov = centered.transpose() * centered / static_cast<double>(rows.size());
    const Matrix gap = identity - cov;
    kernel.noalias() += (static_cast<double>(rows.size()) / n) * gap * gap;
  }

  Basis basis;
  Matrix vectors;
  leading_eigen(kernel, basis.singular_values, vectors);
  basis.vectors = whitening.to_original(vectors.leftCols(r));
  basis.whitening_applied = true;
  return basis;
}

Basis pca_fit(const Matrix& X, Index r) {
  if (X.rows() < 2) throw InvalidInputError("PCA needs at least two samples");
  if (!X.allFinite()) throw InvalidInputError("predictors contain non-finite values");
  require_rank(r, X.cols());
  const Matrix centered = X.rowwise() - X.colwise().mean();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(X.rows() - 1);

  Basis basis;
  Matrix vectors;
  leading_eigen(cov, basis.singular_values, vectors);
  basis.vectors = vectors.leftCols(r);
  apply_sign_convention(basis.vectors);
  return basis;
}

}  // namespace potd
