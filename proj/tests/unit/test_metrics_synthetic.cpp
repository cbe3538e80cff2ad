#include <cmath>
#include <numbers>

#include "doctest.h"
#include "potd/errors.hpp"
#include "potd/metrics.hpp"
#include "potd/synthetic.hpp"
#include "test_support.hpp"

using namespace potd;
using potd::test::gaussian_matrix;
using potd::test::random_orthogonal;

namespace {

Matrix unit_columns(Index p, std::initializer_list<Index> axes) {
  Matrix B = Matrix::Zero(p, static_cast<Index>(axes.size()));
  Index j = 0;
  for (const Index axis : axes) B(axis, j++) = 1.0;
  return B;
}

}  // namespace

TEST_CASE("subspace distance examples") {
  const Matrix e12 = unit_columns(3, {0, 1});
  CHECK(subspace_distance(e12, e12) == 0.0);
  CHECK(subspace_distance(unit_columns(3, {2, 1}), e12) == doctest::Approx(1.0));
  CHECK(subspace_distance(unit_columns(4, {2, 3}), unit_columns(4, {0, 1})) == doctest::Approx(std::sqrt(2.0)));
  Matrix diagonal(2, 1);
  diagonal << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(subspace_distance(diagonal, unit_columns(2, {0})) == doctest::Approx(1.0 / std::sqrt(2.0)));
  // Column order and signs do not matter.
  Matrix flipped = unit_columns(3, {1, 0});
  flipped.col(0) *= -1.0;
  CHECK(subspace_distance(flipped, e12) <= 1e-15);
}

TEST_CASE("subspace distance is rotation invariant and bounded") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Index p = 6;
    const Matrix Q = random_orthogonal(rng, p);
    const Matrix A = random_orthogonal(rng, p).leftCols(2);
    const Matrix B = random_orthogonal(rng, p).leftCols(3);
    const double d = subspace_distance(A, B);
    CHECK(d >= 0.0);
    CHECK(d <= std::sqrt(3.0) + 1e-12);
    CHECK(std::abs(subspace_distance(Q * A, Q * B) - d) <= 1e-12);
  }
}

TEST_CASE("subspace distance validates its inputs") {
  CHECK_THROWS_AS(subspace_distance(Matrix::Ones(3, 1), unit_columns(3, {0})), InvalidInputError);
  CHECK_THROWS_AS(subspace_distance(unit_columns(3, {0}), unit_columns(4, {0})), InvalidInputError);
  CHECK_THROWS_AS(subspace_distance(Matrix(3, 0), unit_columns(3, {0})), InvalidInputError);
}

TEST_CASE("sin distance examples") {
  Rng rng(2);
  const Matrix A = random_orthogonal(rng, 5).leftCols(2);
  const Matrix B = random_orthogonal(rng, 5).leftCols(2);
  CHECK(sin_distance(A, A) <= 1e-12);
  CHECK(sin_distance(unit_columns(3, {0}), unit_columns(3, {1})) == doctest::Approx(1.0));
  CHECK(std::abs(sin_distance(A, B) - sin_distance(B, A)) <= 1e-12);
  // Equal dimensions: both metrics measure the same principal angles.
  CHECK(std::abs(sin_distance(A, B) - subspace_distance(B, A)) <= 1e-12);
}

TEST_CASE("model I without noise follows the sign of sin(x1)") {
  SyntheticSpec spec;
  spec.model = SyntheticModel::kI;
  spec.n = 500;
  spec.p = 3;
  spec.noise_scale = 0.0;
  spec.seed = 3;
  const auto out = generate(spec);
  for (Index i = 0; i < spec.n; ++i) {
    const int expected = std::sin(out.data.X(i, 0)) >= 0.0 ? 1 : 0;
    CHECK(out.data.labels[static_cast<std::size_t>(i)] == expected);
  }
  CHECK(out.data.class_names == std::vector<std::string>{"-1", "1"});
  CHECK(out.data.X.cwiseAbs().maxCoeff() <= 2.0);
}

TEST_CASE("models I-IV match their formulas") {
  // Recompute labels from X with noise off, using the formulas directly.
  const auto model_value = [](SyntheticModel model, const RowVector& x) {
    switch (model) {
      case SyntheticModel::kI:
        return std::sin(x(0)) / (x(1) * x(1));
      case SyntheticModel::kII:
        return (x(0) + 0.5) * (x(1) - 0.5) * (x(1) - 0.5);
      case SyntheticModel::kIII:
        return std::log(x(0) * x(0)) * (x(1) * x(1) + x(2) * x(2) / 2.0 + x(3) * x(3) / 4.0);
      default:
        return std::sin(x(0)) / (x(1) * x(2) * x(3));
    }
  };
  for (const auto model : {SyntheticModel::kI, SyntheticModel::kII, SyntheticModel::kIII, SyntheticModel::kIV}) {
    SyntheticSpec spec;
    spec.model = model;
    spec.n = 300;
    spec.p = 5;
    spec.noise_scale = 0.0;
    const auto out = generate(spec);
    for (Index i = 0; i < spec.n; ++i) {
      const int expected = model_value(model, out.data.X.row(i)) >= 0.0 ? 1 : 0;
      CHECK(out.data.labels[static_cast<std::size_t>(i)] == expected);
    }
  }
}

TEST_CASE("synthetic classes are roughly balanced") {
  for (const auto model : {SyntheticModel::kI, SyntheticModel::kII, SyntheticModel::kIII, SyntheticModel::kIV}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      SyntheticSpec spec;
      spec.model = model;
      spec.p = 10;
      spec.seed = seed;
      const auto out = generate(spec);
      const double positive = static_cast<double>(out.data.class_counts()[1]) / static_cast<double>(spec.n);
      CHECK(positive >= 0.3);
      CHECK(positive <= 0.7);
    }
  }
}

TEST_CASE("true subspaces") {
  SyntheticSpec spec;
  spec.p = 10;
  spec.model = SyntheticModel::kII;
  CHECK(generate(spec).truth.dim() == 2);
  spec.model = SyntheticModel::kIII;
  const auto truth = generate(spec).truth;
  CHECK(truth.dim() == 4);
  CHECK(truth.basis == Matrix::Identity(10, 4));
  CHECK_THROWS_AS(TrueSubspace::canonical(3, 4), InvalidInputError);
}

TEST_CASE("invalid specifications are rejected") {
  SyntheticSpec spec;
  spec.model = SyntheticModel::kIII;
  spec.p = 3;
  CHECK_THROWS_AS(generate(spec), InvalidInputError);
  spec.model = SyntheticModel::kI;
  spec.p = 1;
  CHECK_THROWS_AS(generate(spec), InvalidInputError);
  spec.p = 5;
  spec.noise_scale = -1.0;
  CHECK_THROWS_AS(generate(spec), InvalidInputError);
  CHECK_THROWS_AS(gen_cshape(5, 1), InvalidInputError);
  CHECK_THROWS_AS(gen_svm3d(10, 1, 2), InvalidInputError);
}

TEST_CASE("cshape arcs before standardization") {
  // Rebuild the raw arcs with the same draw order and compare against the
  // standardized output after undoing the per-class transform.
  const Index n = 400;
  const auto out = gen_cshape(n, 7);
  CHECK(out.data.dim() == 10);
  CHECK(out.data.class_counts() == std::vector<Index>{n, n});
  Rng rng(7);
  Matrix raw(2 * n, 10);
  for (int c = 0; c < 2; ++c) {
    for (Index l = 0; l < n; ++l) {
      const Index i = c * n + l;
      const double theta = rng.normal(c == 0 ? std::numbers::pi : 0.0, 0.25 * std::numbers::pi);
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      raw(i, 0) = 20.0 * std::cos(theta) + z1 + (c == 0 ? 1.0 : 0.0);
      raw(i, 1) = 20.0 * std::sin(theta) + z2;
      for (Index j = 2; j < 10; ++j) raw(i, j) = rng.normal();
    }
  }
  // Arc means: class 0 near (-20 e^{-pi^2/32} + 1, 0), class 1 near (20 e^{-pi^2/32}, 0).
  const double arc = 20.0 * std::exp(-std::numbers::pi * std::numbers::pi / 32.0);
  const RowVector m0 = raw.topRows(n).colwise().mean();
  const RowVector m1 = raw.bottomRows(n).colwise().mean();
  CHECK(m0(0) == doctest::Approx(-arc + 1.0).epsilon(0.1));
  CHECK(m1(0) == doctest::Approx(arc).epsilon(0.1));
  CHECK(std::abs(m0(1)) < 1.5);
  for (int c = 0; c < 2; ++c) {
    const Matrix block = raw.middleRows(c * n, n);
    const Matrix centered = block.rowwise() - block.colwise().mean();
    const RowVector sd = (centered.colwise().squaredNorm() / static_cast<double>(n - 1)).cwiseSqrt();
    const Matrix expected = centered * sd.cwiseInverse().asDiagonal();
    CHECK((out.data.X.middleRows(c * n, n) - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("cshape standardization modes") {
  const Index n = 100;
  const auto per_class = gen_cshape(n, 3);
  for (int c = 0; c < 2; ++c) {
    const Matrix block = per_class.data.X.middleRows(c * n, n);
    CHECK(block.colwise().mean().cwiseAbs().maxCoeff() <= 1e-12);
    const Matrix centered = block.rowwise() - block.colwise().mean();
    const RowVector var = centered.colwise().squaredNorm() / static_cast<double>(n - 1);
    CHECK((var.array() - 1.0).abs().maxCoeff() <= 1e-12);
  }
  const auto pooled = gen_cshape(n, 3, true, 4);
  CHECK(pooled.data.dim() == 4);
  CHECK(pooled.data.X.colwise().mean().cwiseAbs().maxCoeff() <= 1e-12);
  // Pooled standardization keeps the class separation on the first axis.
  CHECK(pooled.data.X.topRows(n).col(0).mean() < -0.5);
  CHECK(pooled.data.X.bottomRows(n).col(0).mean() > 0.5);
}

TEST_CASE("svm3d classes") {
  const Index n = 4000;
  const auto out = gen_svm3d(n, 5);
  CHECK(out.data.dim() == 3);
  CHECK(out.truth.dim() == 2);
  const Matrix a = out.data.X.topRows(n);
  const Matrix b = out.data.X.bottomRows(n);
  CHECK(a.col(1).mean() == doctest::Approx(-0.5).epsilon(0.1));
  CHECK(b.col(1).mean() == doctest::Approx(0.5).epsilon(0.1));
  const double var_a = (a.col(0).array() - a.col(0).mean()).square().mean();
  const double var_b = (b.col(0).array() - b.col(0).mean()).square().mean();
  CHECK(var_a == doctest::Approx(1.0).epsilon(0.1));
  CHECK(var_b == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("generators are bit-identical for a seed") {
  for (const auto model : {SyntheticModel::kI, SyntheticModel::kIV, SyntheticModel::kCShape, SyntheticModel::kSvm3d}) {
    SyntheticSpec spec;
    spec.model = model;
    spec.n = 50;
    spec.p = 6;
    spec.seed = 99;
    const auto first = generate(spec);
    const auto second = generate(spec);
    CHECK(first.data.X == second.data.X);
    CHECK(first.data.labels == second.data.labels);
    spec.seed = 100;
    CHECK_FALSE(generate(spec).data.X == first.data.X);
  }
}

TEST_CASE("model names") {
  CHECK(parse_synthetic_model("iii") == SyntheticModel::kIII);
  CHECK(parse_synthetic_model("4") == SyntheticModel::kIV);
  CHECK(parse_synthetic_model("CShape") == SyntheticModel::kCShape);
  CHECK(to_string(SyntheticModel::kII) == "II");
  CHECK(to_string(SyntheticModel::kSvm3d) == "svm3d");
  CHECK_THROWS_AS(parse_synthetic_model("V"), InvalidInputError);
}
