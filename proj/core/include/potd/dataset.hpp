#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "potd/types.hpp"

namespace potd {

/// Predictors with a categorical response. Labels are dense class ids
/// 0..k-1; `class_names[id]` keeps the original label text.
struct LabeledDataset {
  Matrix X;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  // Optional per-sample mass. Within each class the masses are rescaled to
  // unit L1 norm before use; unset means uniform 1/n_i.
  std::optional<Vector> sample_weights;
  std::vector<std::string> feature_names;

  /// Builds class ids from label text. Labels that all parse as numbers are
  /// ordered numerically, otherwise lexicographically.
  static LabeledDataset from_labels(Matrix X, const std::vector<std::string>& labels);

  Index size() const noexcept { return X.rows(); }
  Index dim() const noexcept { return X.cols(); }
  int num_classes() const noexcept { return static_cast<int>(class_names.size()); }

  /// Row indices of each class, in sample order.
  std::vector<std::vector<Index>> class_members() const;
  std::vector<Index> class_counts() const;

  /// Rows `rows` in the given order; class ids and names are preserved even
  /// if a class ends up empty.
  LabeledDataset subset(std::span<const Index> rows) const;

  /// Mass vector a_i for class `c`, unit L1 norm.
  Vector class_weights(int c) const;

  /// Throws InvalidInputError unless n >= 2, at least two classes are
  /// present and every declared class has a member.
  void validate() const;
};

}  // namespace potd
