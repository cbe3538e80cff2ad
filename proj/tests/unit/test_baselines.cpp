#include <cmath>
#include <vector>

#include "doctest.h"
#include "potd/baselines.hpp"
#include "potd/errors.hpp"
#include "potd/metrics.hpp"
#include "test_support.hpp"

using namespace potd;
using potd::test::gaussian_matrix;
using potd::test::max_abs;
using potd::test::orthonormality_error;
using potd::test::sign_convention_holds;
using potd::test::two_blobs;

namespace {

double alignment(const Matrix& B, const Vector& direction) {
  return std::abs(B.col(0).dot(direction.normalized()));
}

LabeledDataset variance_classes(Rng& rng, Index n_per_class, Index p, double sd_first) {
  LabeledDataset data;
  data.X = gaussian_matrix(rng, 2 * n_per_class, p);
  data.class_names = {"narrow", "wide"};
  for (Index i = 0; i < 2 * n_per_class; ++i) {
    const int label = i < n_per_class ? 0 : 1;
    if (label == 1) data.X(i, 0) *= sd_first;
    data.labels.push_back(label);
  }
  return data;
}

}  // namespace

TEST_CASE("SIR on two classes returns one informative direction") {
  Rng rng(1);
  const auto data = two_blobs(rng, 200, 5, 3.0);
  const Basis basis = sir_fit(data, 1);
  CHECK(basis.rank() == 1);
  CHECK(basis.warnings.empty());
  CHECK(alignment(basis.vectors, Vector::Unit(5, 0)) > 0.99);
  CHECK(basis.singular_values(0) > 0.5);
  CHECK(max_abs(basis.singular_values.tail(4)) <= 1e-10);
}

TEST_CASE("SIR with identical class means has a vanishing kernel") {
  Rng rng(2);
  LabeledDataset data;
  // Class 1 is class 0 mirrored through the origin of its own mean: the two
  // class means coincide exactly.
  const Matrix half = gaussian_matrix(rng, 50, 3);
  data.X.resize(100, 3);
  data.X.topRows(50) = half;
  data.X.bottomRows(50) = (-half).rowwise() + 2.0 * half.colwise().mean();
  data.class_names = {"0", "1"};
  for (Index i = 0; i < 100; ++i) data.labels.push_back(i < 50 ? 0 : 1);
  const Basis basis = sir_fit(data, 1);
  CHECK(basis.singular_values(0) <= 1e-12);
}

TEST_CASE("SIR with point masses at -d and +d points along d") {
  const Vector d = (Vector(3) << 1.0, 2.0, 2.0).finished();
  Rng rng(3);
  LabeledDataset data;
  data.X = 0.05 * gaussian_matrix(rng, 600, 3);
  data.class_names = {"minus", "plus"};
  for (Index i = 0; i < 600; ++i) {
    const int label = i < 300 ? 0 : 1;
    data.X.row(i) += (label == 0 ? -1.0 : 1.0) * d.transpose();
    data.labels.push_back(label);
  }
  const Basis basis = sir_fit(data, 1);
  CHECK(alignment(basis.vectors, d) > 0.99);
}

TEST_CASE("SIR clamps r to k-1 with a warning") {
  Rng rng(4);
  const auto data = two_blobs(rng, 40, 4, 2.0);
  const Basis basis = sir_fit(data, 3);
  CHECK(basis.rank() == 1);
  REQUIRE(basis.warnings.size() == 1);
  CHECK(basis.warnings[0].find("k-1=1") != std::string::npos);
}

TEST_CASE("SAVE finds a variance difference") {
  Rng rng(5);
  const auto data = variance_classes(rng, 500, 4, 3.0);
  const Basis basis = save_fit(data, 1);
  CHECK(alignment(basis.vectors, Vector::Unit(4, 0)) > 0.95);
  // SIR cannot see it: class means agree up to sampling noise.
  CHECK(sir_fit(data, 1).singular_values(0) < 0.02);
}

TEST_CASE("SAVE on identically distributed classes has a small kernel") {
  Rng rng(6);
  const auto data = variance_classes(rng, 2000, 3, 1.0);
  const Basis basis = save_fit(data, 1);
  CHECK(basis.singular_values(0) < 0.01);
}

TEST_CASE("SAVE rejects a singleton class") {
  Rng rng(7);
  LabeledDataset data;
  data.X = gaussian_matrix(rng, 10, 2);
  data.class_names = {"many", "one"};
  for (Index i = 0; i < 10; ++i) data.labels.push_back(i == 9 ? 1 : 0);
  CHECK_THROWS_AS(save_fit(data, 1), DegenerateInputError);
}

TEST_CASE("PCA examples") {
  Rng rng(8);
  // Points on a line through the origin.
  const Vector u = (Vector(3) << 3.0, 0.0, 4.0).finished() / 5.0;
  Matrix line(20, 3);
  for (Index i = 0; i < 20; ++i) line.row(i) = (static_cast<double>(i) - 7.0) * u.transpose();
  const Basis on_line = pca_fit(line, 1);
  CHECK(alignment(on_line.vectors, u) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(on_line.singular_values(1) == doctest::Approx(0.0).epsilon(1e-12));

  Matrix scaled = gaussian_matrix(rng, 2000, 3);
  scaled.col(0) *= 2.0;
  const Basis leading = pca_fit(scaled, 1);
  CHECK(alignment(leading.vectors, Vector::Unit(3, 0)) > 0.95);
  CHECK(leading.singular_values(0) == doctest::Approx(4.0).epsilon(0.1));

  // Isotropic data: eigenvalues near one and any basis is orthonormal.
  const Basis iso = pca_fit(gaussian_matrix(rng, 5000, 3), 3);
  CHECK(max_abs(iso.singular_values - Vector::Ones(3)) < 0.1);
  CHECK(orthonormality_error(iso.vectors) <= 1e-12);
  CHECK_FALSE(iso.whitening_applied);

  CHECK_THROWS_AS(pca_fit(scaled, 4), InvalidInputError);
  CHECK_THROWS_AS(pca_fit(scaled, 0), InvalidInputError);
  CHECK_THROWS_AS(pca_fit(scaled.topRows(1), 1), InvalidInputError);
}

TEST_CASE("SIR and SAVE are invariant to coordinate scaling") {
  Rng rng(9);
  const auto data = variance_classes(rng, 200, 4, 2.5);
  LabeledDataset shifted = two_blobs(rng, 150, 4, 1.5);
  const Vector D = (Vector(4) << 0.1, 3.0, 7.0, 0.5).finished();
  for (const LabeledDataset* base : std::vector<const LabeledDataset*>{&data, &shifted}) {
    LabeledDataset scaled = *base;
    scaled.X = base->X * D.asDiagonal();
    // A direction b for XD corresponds to D b for X.
    const Basis sir_a = sir_fit(*base, 1);
    const Basis sir_b = sir_fit(scaled, 1);
    CHECK(subspace_distance(orthonormalize(D.asDiagonal() * sir_b.vectors), sir_a.vectors) <= 1e-8);
    const Basis save_a = save_fit(*base, 2);
    const Basis save_b = save_fit(scaled, 2);
    CHECK(subspace_distance(orthonormalize(D.asDiagonal() * save_b.vectors), save_a.vectors) <= 1e-8);
  }
}

TEST_CASE("baseline bases are orthonormal with the sign convention") {
  Rng rng(10);
  const auto data = variance_classes(rng, 100, 6, 2.0);
  for (const Basis& basis : {sir_fit(data, 1), save_fit(data, 3), pca_fit(data.X, 4)}) {
    CHECK(orthonormality_error(basis.vectors) <= 1e-10);
    CHECK(sign_convention_holds(basis.vectors));
    for (Index k = 1; k < basis.singular_values.size(); ++k) {
      CHECK(basis.singular_values(k) <= basis.singular_values(k - 1));
    }
  }
}

TEST_CASE("SAVE kernel matches an independent computation") {
  Rng rng(11);
  const auto data = variance_classes(rng, 30, 3, 2.0);
  // Recompute sum_s (n_s/n) (I - cov_s)^2 with explicit loops.
  const Index n = data.size();
  const Index p = data.dim();
  Vector mean = Vector::Zero(p);
  for (Index i = 0; i < n; ++i) mean += data.X.row(i).transpose();
  mean /= static_cast<double>(n);
  Matrix cov = Matrix::Zero(p, p);
  for (Index i = 0; i < n; ++i) {
    const Vector c = data.X.row(i).transpose() - mean;
    cov += c * c.transpose() / static_cast<double>(n);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const Matrix inv_root = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                          eig.eigenvectors().transpose();
  Matrix kernel = Matrix::Zero(p, p);
  for (int s = 0; s < 2; ++s) {
    std::vector<Vector> z;
    for (Index i = 0; i < n; ++i) {
      if (data.labels[static_cast<std::size_t>(i)] == s) z.push_back(inv_root * (data.X.row(i).transpose() - mean));
    }
    Vector zbar = Vector::Zero(p);
    for (const auto& v : z) zbar += v / static_cast<double>(z.size());
    Matrix cs = Matrix::Zero(p, p);
    for (const auto& v : z) cs += (v - zbar) * (v - zbar).transpose() / static_cast<double>(z.size());
    const Matrix gap = Matrix::Identity(p, p) - cs;
    kernel += static_cast<double>(z.size()) / static_cast<double>(n) * gap * gap;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> oracle(kernel);
  const Basis basis = save_fit(data, 3);
  CHECK(max_abs(basis.singular_values - oracle.eigenvalues().reverse()) <= 1e-10);
}
