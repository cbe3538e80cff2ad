#include "potd/potd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "potd/errors.hpp"
#include "potd/parallel.hpp"

namespace potd {

namespace {

// Relative eigenvalue floor below which the covariance counts as singular.
constexpr double kRankTolerance = 1e-10;

struct SortedEigen {
  Vector values;   // nonincreasing
  Matrix vectors;  // matching columns
};

SortedEigen sorted_eigen(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
  if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  SortedEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

// Right singular vectors and singular values of the row stack of `blocks`.
// With at least p rows the p x p Gram matrix is eigendecomposed; otherwise
// the (short) stack is decomposed directly.
void principal_directions(const std::vector<const Matrix*>& blocks, Index p, Vector& singular,
                          Matrix& directions) {
  Index total_rows = 0;
  for (const Matrix* block : blocks) total_rows += block->rows();

  if (total_rows >= p) {
    Matrix gram = Matrix::Zero(p, p);
    for (const Matrix* block : blocks) gram.noalias() += block->transpose() * *block;
    SortedEigen eig = sorted_eigen(gram);
    singular = eig.values.cwiseMax(0.0).cwiseSqrt();
    directions = std::move(eig.vectors);
    return;
  }

  Matrix stacked(total_rows, p);
  Index offset = 0;
  for (const Matrix* block : blocks) {
    stacked.middleRows(offset, block->rows()) = *block;
    offset += block->rows();
  }
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  singular = svd.singularValues();
  directions = svd.matrixV();
}

void require_rank(Index r, Index p) {
  if (r < 1 || r > p) {
    std::ostringstream os;
    os << "requested dimension r=" << r << " must be in [1, " << p << "]";
    throw InvalidInputError(os.str());
  }
}

Basis finish_basis(const Matrix& directions, const Vector& singular, Index r,
                   const Whitening* whitening) {
  Basis basis;
  basis.singular_values = singular;
  if (whitening != nullptr) {
    basis.vectors = whitening->to_original(directions.leftCols(r));
    basis.whitening_applied = true;
  } else {
    basis.vectors = orthonormalize(directions.leftCols(r));
  }
  return basis;
}

}  // namespace

void apply_sign_convention(Matrix& vectors) {
  for (Index c = 0; c < vectors.cols(); ++c) {
    Index arg = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

Matrix orthonormalize(const Matrix& vectors) {
  const Index p = vectors.rows();
  const Index r = vectors.cols();
  Eigen::HouseholderQR<Matrix> qr(vectors);
  Matrix q = qr.householderQ() * Matrix::Identity(p, r);
  apply_sign_convention(q);
  return q;
}

Matrix Whitening::to_original(const Matrix& directions) const {
  return orthonormalize(back_transform * directions);
}

Whitening whiten(const Matrix& X) {
  const Index n = X.rows();
  const Index p = X.cols();
  if (n <= p) {
    std::ostringstream os;
    os << "whitening needs more samples than predictors (n=" << n << ", p=" << p << ")";
    throw InvalidInputError(os.str());
  }
  if (!X.allFinite()) throw InvalidInputError("predictors contain non-finite values");

  Whitening out;
  out.mean = X.colwise().mean().transpose();
  const Matrix centered = X.rowwise() - out.mean.transpose();
  const Matrix cov = (centered.transpose() * centered) / static_cast<double>(n);
  const SortedEigen eig = sorted_eigen(cov);

  const double top = std::max(eig.values(0), 0.0);
  std::vector<Index> null_directions;
  for (Index k = 0; k < p; ++k) {
    if (!(eig.values(k) > kRankTolerance * top)) null_directions.push_back(k);
  }
  if (!null_directions.empty() || !(top > 0.0)) {
    std::ostringstream os;
    os.precision(4);
    os << "sample covariance is rank deficient; null directions:";
    for (const Index k : null_directions) {
      os << " [";
      for (Index j = 0; j < p; ++j) os << (j ? " " : "") << eig.vectors(j, k);
      os << "]";
    }
    throw DegenerateInputError(os.str());
  }

  const Vector inv_sqrt = eig.values.cwiseSqrt().cwiseInverse();
  out.back_transform = eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.transpose();
  out.Z = centered * out.back_transform;
  return out;
}

DisplacementMatrix displacement_matrix(const DiscreteMeasure& source,
                                       const DiscreteMeasure& target,
                                       const CouplingMatrix& coupling) {
  if (coupling.rows() != source.size() || coupling.cols() != target.size()) {
    std::ostringstream os;
    os << "coupling is " << coupling.rows() << "x" << coupling.cols() << " but measures have "
       << source.size() << " and " << target.size() << " points";
    throw InvalidInputError(os.str());
  }
  if (source.dim() != target.dim()) throw InvalidInputError("measures live in different dimensions");
  DisplacementMatrix out;
  out.rows = source.weights().asDiagonal() * source.points();
  out.rows.noalias() -= barycentric_projection(coupling, target.points());
  return out;
}

PotdFit potd_fit_detailed(const LabeledDataset& data, Index r, const SolverConfig& solver,
                          bool whiten_predictors) {
  data.validate();
  solver.validate();
  const Index p = data.dim();
  require_rank(r, p);

  Whitening whitening;
  if (whiten_predictors) whitening = whiten(data.X);
  const Matrix& work = whiten_predictors ? whitening.Z : data.X;

  const int k = data.num_classes();
  const auto members = data.class_members();
  std::vector<DiscreteMeasure> measures;
  measures.reserve(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    const auto& rows = members[static_cast<std::size_t>(c)];
    Matrix points(static_cast<Index>(rows.size()), p);
    for (std::size_t l = 0; l < rows.size(); ++l) points.row(static_cast<Index>(l)) = work.row(rows[l]);
    measures.emplace_back(std::move(points), data.class_weights(c));
  }

  // One coupling per unordered pair; the reverse direction uses the
  // transposed plan, which is optimal for the reversed problem because the
  // squared Euclidean cost is symmetric.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  }
  std::vector<CouplingMatrix> pair_couplings(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t idx) {
    const auto [i, j] = pairs[idx];
    const auto& mu = measures[static_cast<std::size_t>(i)];
    const auto& nu = measures[static_cast<std::size_t>(j)];
    pair_couplings[idx] = solve_ot(mu, nu, squared_euclidean_cost(mu.points(), nu.points()), solver);
  });
  auto pair_index = [k](int i, int j) {
    // position of (min, max) in the row-major upper-triangle enumeration
    const int lo = std::min(i, j);
    const int hi = std::max(i, j);
    return static_cast<std::size_t>(lo * (2 * k - lo - 1) / 2 + (hi - lo - 1));
  };

  PotdFit fit;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      const CouplingMatrix& stored = pair_couplings[pair_index(i, j)];
      CouplingMatrix coupling = i < j ? stored : stored.transposed();
      DisplacementMatrix delta = displacement_matrix(measures[static_cast<std::size_t>(i)],
                                                     measures[static_cast<std::size_t>(j)], coupling);
      delta.source_class = i;
      delta.target_class = j;
      fit.displacements.push_back(std::move(delta));
      fit.couplings.push_back(std::move(coupling));
    }
  }

  std::vector<const Matrix*> blocks;
  for (const auto& delta : fit.displacements) blocks.push_back(&delta.rows);
  Vector singular;
  Matrix directions;
  principal_directions(blocks, p, singular, directions);
  fit.basis = finish_basis(directions, singular, r, whiten_predictors ? &whitening : nullptr);
  return fit;
}

Basis potd_fit(const LabeledDataset& data, Index r, const SolverConfig& solver,
               bool whiten_predictors) {
  return potd_fit_detailed(data, r, solver, whiten_predictors).basis;
}

Basis potd_fit_continuous(const Matrix& X, const Vector& y, Index r, std::span<const double> cuts,
                          const SolverConfig& solver, bool whiten_predictors) {
  solver.validate();
  if (y.size() != X.rows()) throw InvalidInputError("response length does not match predictors");
  if (!y.allFinite()) throw InvalidInputError("response contains non-finite values");
  if (cuts.empty()) throw InvalidInputError("at least one cut is required");
  const Index p = X.cols();
  require_rank(r, p);

  Whitening whitening;
  if (whiten_predictors) whitening = whiten(X);
  const Matrix& work = whiten_predictors ? whitening.Z : X;

  std::vector<std::vector<Index>> below(cuts.size());
  std::vector<std::vector<Index>> above(cuts.size());
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    for (Index i = 0; i < y.size(); ++i) (y(i) < cuts[c] ? below[c] : above[c]).push_back(i);
    if (below[c].empty() || above[c].empty()) {
      std::ostringstream os;
      os << "cut " << cuts[c] << " leaves one side empty";
      throw InvalidInputError(os.str());
    }
  }

  auto gather = [&](const std::vector<Index>& rows) {
    Matrix points(static_cast<Index>(rows.size()), p);
    for (std::size_t l = 0; l < rows.size(); ++l) points.row(static_cast<Index>(l)) = work.row(rows[l]);
    return DiscreteMeasure::uniform(std::move(points));
  };

  std::vector<Matrix> pooled(2 * cuts.size());
  parallel_for(cuts.size(), [&](std::size_t c) {
    const DiscreteMeasure lower = gather(below[c]);
    const DiscreteMeasure upper = gather(above[c]);
    const CouplingMatrix coupling =
        solve_ot(lower, upper, squared_euclidean_cost(lower.points(), upper.points()), solver);
    pooled[2 * c] = displacement_matrix(lower, upper, coupling).rows;
    pooled[2 * c + 1] = displacement_matrix(upper, lower, coupling.transposed()).rows;
  });

  std::vector<const Matrix*> blocks;
  for (const auto& block : pooled) blocks.push_back(&block);
  Vector singular;
  Matrix directions;
  principal_directions(blocks, p, singular, directions);
  return finish_basis(directions, singular, r, whiten_predictors ? &whitening : nullptr);
}

std::vector<double> quantile_cuts(const Vector& y, std::span<const double> probabilities) {
  if (y.size() == 0) throw InvalidInputError("empty response");
  std::vector<double> sorted(y.data(), y.data() + y.size());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(probabilities.size());
  for (const double q : probabilities) {
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidInputError("quantile probability outside [0, 1]");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    out.push_back(sorted[lo] + frac * (sorted[hi] - sorted[lo]));
  }
  return out;
}

std::vector<double> default_cuts(const Vector& y) {
  const double probabilities[] = {1.0 / 3.0, 2.0 / 3.0};
  return quantile_cuts(y, probabilities);
}

Index estimate_dimension(const Vector& singular_values, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw InvalidInputError("dimension threshold must lie in (0, 1]");
  }
  if (singular_values.size() == 0 || (singular_values.array() < 0.0).any() ||
      !singular_values.allFinite()) {
    throw InvalidInputError("singular values must be finite and nonnegative");
  }
  const double total = singular_values.sum();
  if (!(total > 0.0)) throw DegenerateInputError("all singular values are zero");
  double running = 0.0;
  for (Index r = 0; r < singular_values.size(); ++r) {
    running += singular_values(r);
    if (running / total >= threshold - 1e-12) return r + 1;
  }
  return singular_values.size();
}

SecondOrderDisplacement second_order_displacement(const DiscreteMeasure& source,
                                                  const DiscreteMeasure& target,
                                                  const CouplingMatrix& coupling) {
  if (coupling.rows() != source.size() || coupling.cols() != target.size()) {
    throw InvalidInputError("coupling dimensions do not match the measures");
  }
  const Vector& a = source.weights();
  if ((a.array() <= 0.0).any()) {
    throw DegenerateInputError("source atom with zero mass has no transport image");
  }
  const Matrix images = a.cwiseInverse().asDiagonal() * barycentric_projection(coupling, target.points());
  const Matrix displacement = source.points() - images;
  Matrix sigma = displacement.transpose() * a.asDiagonal() * displacement;
  sigma = 0.5 * (sigma + sigma.transpose());

  SortedEigen eig = sorted_eigen(sigma);
  SecondOrderDisplacement out;
  out.sigma = std::move(sigma);
  out.eigenvalues = std::move(eig.values);
  out.eigenvectors = std::move(eig.vectors);
  apply_sign_convention(out.eigenvectors);
  return out;
}

Matrix project(const Matrix& X, const Basis& basis) {
  if (X.cols() != basis.ambient_dim()) {
    std::ostringstream os;
    os << "data has " << X.cols() << " columns but the basis lives in dimension "
       << basis.ambient_dim();
    throw InvalidInputError(os.str());
  }
  return X * basis.vectors;
}

}  // namespace potd
