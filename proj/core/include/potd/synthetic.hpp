#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "potd/dataset.hpp"
#include "potd/metrics.hpp"

namespace potd {

enum class SyntheticModel { kI, kII, kIII, kIV, kCShape, kSvm3d };

std::string_view to_string(SyntheticModel model);
/// Accepts "I".."IV" (case-insensitive), "cshape", "svm3d".
SyntheticModel parse_synthetic_model(std::string_view name);

struct SyntheticSpec {
  SyntheticModel model = SyntheticModel::kI;
  // Total sample size for models I-IV; samples per class for cshape/svm3d.
  Index n = 400;
  Index p = 10;
  std::uint64_t seed = 42;
  // Scale of the Gaussian label noise in models I-IV.
  double noise_scale = 0.2;
  // cshape only: standardize the pooled sample instead of each class.
  bool pooled_standardization = false;

  void validate() const;
};

struct SyntheticDataset {
  LabeledDataset data;
  TrueSubspace truth;
};

/// Binary-response models on X ~ UNIF[-2, 2]^p with eps ~ N(0, 1):
///   I:   Y = sign{ sin(X1) / X2^2 + s*eps }
///   II:  Y = sign{ (X1 + 0.5)(X2 - 0.5)^2 + s*eps }
///   III: Y = sign{ log(X1^2)(X2^2 + X3^2/2 + X4^2/4) + s*eps }
///   IV:  Y = sign{ sin(X1) / (X2 X3 X4) + s*eps }
/// sign{0} = +1. A draw whose formula hits a zero denominator (or log 0) is
/// redrawn. Labels are "-1" and "1".
SyntheticDataset gen_model(const SyntheticSpec& spec);

/// Two interleaved noisy arcs in the (X1, X2) plane plus p-2 standard
/// normal coordinates; each class is standardized separately by default.
SyntheticDataset gen_cshape(Index n_per_class, std::uint64_t seed, bool pooled_standardization = false,
                            Index p = 10);

/// Two Gaussian classes in R^p (p >= 3): means +-(0, 0.5, 0, ...), variance
/// 4 vs 1 in the first coordinate, unit elsewhere. Truth span(e1, e2).
SyntheticDataset gen_svm3d(Index n_per_class, std::uint64_t seed, Index p = 3);

/// Dispatches on spec.model.
SyntheticDataset generate(const SyntheticSpec& spec);

}  // namespace potd
