#include "potd/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "potd/errors.hpp"
#include "potd/rng.hpp"

namespace potd {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Signal part of the model formula, or NaN when the draw must be redrawn.
double model_signal(SyntheticModel model, const RowVector& x) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  switch (model) {
    case SyntheticModel::kI: {
      if (x(1) == 0.0) return nan;
      return std::sin(x(0)) / (x(1) * x(1));
    }
    case SyntheticModel::kII: {
      const double shifted = x(1) - 0.5;
      return (x(0) + 0.5) * shifted * shifted;
    }
    case SyntheticModel::kIII: {
      if (x(0) == 0.0) return nan;
      return std::log(x(0) * x(0)) * (x(1) * x(1) + x(2) * x(2) / 2.0 + x(3) * x(3) / 4.0);
    }
    case SyntheticModel::kIV: {
      const double denom = x(1) * x(2) * x(3);
      if (denom == 0.0) return nan;
      return std::sin(x(0)) / denom;
    }
    default:
      throw InvalidInputError("not a uniform-predictor model");
  }
}

// Column-wise (x - mean) / sd with the n-1 sample standard deviation.
void standardize_rows(Matrix& block) {
  const Index n = block.rows();
  const RowVector mean = block.colwise().mean();
  block.rowwise() -= mean;
  const RowVector sd =
      (block.colwise().squaredNorm() / static_cast<double>(n - 1)).cwiseSqrt();
  for (Index j = 0; j < block.cols(); ++j) {
    if (sd(j) > 0.0) block.col(j) /= sd(j);
  }
}

}  // namespace

std::string_view to_string(SyntheticModel model) {
  switch (model) {
    case SyntheticModel::kI:
      return "I";
    case SyntheticModel::kII:
      return "II";
    case SyntheticModel::kIII:
      return "III";
    case SyntheticModel::kIV:
      return "IV";
    case SyntheticModel::kCShape:
      return "cshape";
    case SyntheticModel::kSvm3d:
      return "svm3d";
  }
  return "?";
}

SyntheticModel parse_synthetic_model(std::string_view name) {
  const std::string key = lower(name);
  if (key == "i" || key == "1") return SyntheticModel::kI;
  if (key == "ii" || key == "2") return SyntheticModel::kII;
  if (key == "iii" || key == "3") return SyntheticModel::kIII;
  if (key == "iv" || key == "4") return SyntheticModel::kIV;
  if (key == "cshape") return SyntheticModel::kCShape;
  if (key == "svm3d") return SyntheticModel::kSvm3d;
  throw InvalidInputError("unknown synthetic model '" + std::string(name) +
                          "' (expected I, II, III, IV, cshape, svm3d)");
}

void SyntheticSpec::validate() const {
  const bool uniform_model = model == SyntheticModel::kI || model == SyntheticModel::kII ||
                             model == SyntheticModel::kIII || model == SyntheticModel::kIV;
  Index min_p = 2;
  if (model == SyntheticModel::kIII || model == SyntheticModel::kIV) min_p = 4;
  if (model == SyntheticModel::kSvm3d) min_p = 3;
  if (p < min_p) {
    std::ostringstream os;
    os << "model " << to_string(model) << " needs p >= " << min_p << " (got " << p << ")";
    throw InvalidInputError(os.str());
  }
  if (uniform_model && n < 4) throw InvalidInputError("models I-IV need n >= 4");
  if (model == SyntheticModel::kCShape && n < 10) {
    throw InvalidInputError("cshape needs at least 10 samples per class");
  }
  if (model == SyntheticModel::kSvm3d && n < 2) {
    throw InvalidInputError("svm3d needs at least 2 samples per class");
  }
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
    throw InvalidInputError("noise scale must be finite and nonnegative");
  }
}

SyntheticDataset gen_model(const SyntheticSpec& spec) {
  spec.validate();
  if (spec.model == SyntheticModel::kCShape || spec.model == SyntheticModel::kSvm3d) {
    throw InvalidInputError("gen_model handles models I-IV only");
  }
  Rng rng(spec.seed);
  SyntheticDataset out;
  out.data.X.resize(spec.n, spec.p);
  out.data.labels.resize(static_cast<std::size_t>(spec.n));
  out.data.class_names = {"-1", "1"};
  RowVector x(spec.p);
  for (Index i = 0; i < spec.n; ++i) {
    double value = 0.0;
    while (true) {
      for (Index j = 0; j < spec.p; ++j) x(j) = rng.uniform(-2.0, 2.0);
      const double eps = rng.normal();
      const double signal = model_signal(spec.model, x);
      if (std::isnan(signal)) continue;
      value = signal + spec.noise_scale * eps;
      break;
    }
    out.data.X.row(i) = x;
    out.data.labels[static_cast<std::size_t>(i)] = value >= 0.0 ? 1 : 0;
  }
  const Index r0 = (spec.model == SyntheticModel::kI || spec.model == SyntheticModel::kII) ? 2 : 4;
  out.truth = TrueSubspace::canonical(spec.p, r0);
  return out;
}

SyntheticDataset gen_cshape(Index n_per_class, std::uint64_t seed, bool pooled_standardization,
                            Index p) {
  SyntheticSpec spec;
  spec.model = SyntheticModel::kCShape;
  spec.n = n_per_class;
  spec.p = p;
  spec.seed = seed;
  spec.validate();

  constexpr double kPi = std::numbers::pi;
  Rng rng(seed);
  SyntheticDataset out;
  out.data.X.resize(2 * n_per_class, p);
  out.data.labels.resize(static_cast<std::size_t>(2 * n_per_class));
  out.data.class_names = {"1", "2"};
  for (int c = 0; c < 2; ++c) {
    const double theta_mean = c == 0 ? kPi : 0.0;
    const double shift = c == 0 ? 1.0 : 0.0;
    for (Index l = 0; l < n_per_class; ++l) {
      const Index i = c * n_per_class + l;
      const double theta = rng.normal(theta_mean, 0.25 * kPi);
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      out.data.X(i, 0) = 20.0 * std::cos(theta) + z1 + shift;
      out.data.X(i, 1) = 20.0 * std::sin(theta) + z2;
      for (Index j = 2; j < p; ++j) out.data.X(i, j) = rng.normal();
      out.data.labels[static_cast<std::size_t>(i)] = c;
    }
  }
  if (pooled_standardization) {
    standardize_rows(out.data.X);
  } else {
    for (int c = 0; c < 2; ++c) {
      Matrix block = out.data.X.middleRows(c * n_per_class, n_per_class);
      standardize_rows(block);
      out.data.X.middleRows(c * n_per_class, n_per_class) = block;
    }
  }
  out.truth = TrueSubspace::canonical(p, 2);
  return out;
}

SyntheticDataset gen_svm3d(Index n_per_class, std::uint64_t seed, Index p) {
  SyntheticSpec spec;
  spec.model = SyntheticModel::kSvm3d;
  spec.n = n_per_class;
  spec.p = p;
  spec.seed = seed;
  spec.validate();

  Rng rng(seed);
  SyntheticDataset out;
  out.data.X.resize(2 * n_per_class, p);
  out.data.labels.resize(static_cast<std::size_t>(2 * n_per_class));
  out.data.class_names = {"-1", "1"};
  for (int c = 0; c < 2; ++c) {
    const double mean2 = c == 0 ? -0.5 : 0.5;
    const double sd1 = c == 0 ? 1.0 : 2.0;
    for (Index l = 0; l < n_per_class; ++l) {
      const Index i = c * n_per_class + l;
      out.data.X(i, 0) = rng.normal(0.0, sd1);
      out.data.X(i, 1) = rng.normal(mean2, 1.0);
      for (Index j = 2; j < p; ++j) out.data.X(i, j) = rng.normal();
      out.data.labels[static_cast<std::size_t>(i)] = c;
    }
  }
  out.truth = TrueSubspace::canonical(p, 2);
  return out;
}

SyntheticDataset generate(const SyntheticSpec& spec) {
  switch (spec.model) {
    case SyntheticModel::kCShape:
      return gen_cshape(spec.n, spec.seed, spec.pooled_standardization, spec.p);
    case SyntheticModel::kSvm3d:
      return gen_svm3d(spec.n, spec.seed, spec.p);
    default:
      return gen_model(spec);
  }
}

}  // namespace potd
