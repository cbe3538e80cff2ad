#include "potd/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "potd/errors.hpp"

namespace potd {

namespace {

bool parse_number(const std::string& text, double& value) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end;
}

}  // namespace

LabeledDataset LabeledDataset::from_labels(Matrix X, const std::vector<std::string>& labels) {
  if (static_cast<Index>(labels.size()) != X.rows()) {
    std::ostringstream os;
    os << X.rows() << " predictor rows but " << labels.size() << " labels";
    throw InvalidInputError(os.str());
  }
  std::vector<std::string> names = labels;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  std::vector<double> numeric(names.size());
  bool all_numeric = true;
  for (std::size_t i = 0; i < names.size() && all_numeric; ++i) {
    all_numeric = parse_number(names[i], numeric[i]);
  }
  if (all_numeric) {
    std::vector<std::size_t> order(names.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return numeric[a] < numeric[b]; });
    std::vector<std::string> sorted;
    sorted.reserve(names.size());
    for (const std::size_t i : order) sorted.push_back(names[i]);
    names = std::move(sorted);
  }

  std::map<std::string, int> ids;
  for (std::size_t i = 0; i < names.size(); ++i) ids[names[i]] = static_cast<int>(i);

  LabeledDataset out;
  out.X = std::move(X);
  out.class_names = std::move(names);
  out.labels.reserve(labels.size());
  for (const auto& label : labels) out.labels.push_back(ids.at(label));
  return out;
}

std::vector<std::vector<Index>> LabeledDataset::class_members() const {
  std::vector<std::vector<Index>> members(class_names.size());
  for (Index i = 0; i < static_cast<Index>(labels.size()); ++i) {
    members[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  return members;
}

std::vector<Index> LabeledDataset::class_counts() const {
  std::vector<Index> counts(class_names.size(), 0);
  for (const int label : labels) ++counts[static_cast<std::size_t>(label)];
  return counts;
}

LabeledDataset LabeledDataset::subset(std::span<const Index> rows) const {
  LabeledDataset out;
  out.X.resize(static_cast<Index>(rows.size()), X.cols());
  out.labels.reserve(rows.size());
  if (sample_weights) out.sample_weights = Vector(static_cast<Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Index row = rows[k];
    out.X.row(static_cast<Index>(k)) = X.row(row);
    out.labels.push_back(labels[static_cast<std::size_t>(row)]);
    if (sample_weights) (*out.sample_weights)(static_cast<Index>(k)) = (*sample_weights)(row);
  }
  out.class_names = class_names;
  out.feature_names = feature_names;
  return out;
}

Vector LabeledDataset::class_weights(int c) const {
  std::vector<Index> rows;
  for (Index i = 0; i < static_cast<Index>(labels.size()); ++i) {
    if (labels[static_cast<std::size_t>(i)] == c) rows.push_back(i);
  }
  const Index n = static_cast<Index>(rows.size());
  if (n == 0) throw InvalidInputError("class '" + class_names.at(c) + "' has no samples");
  if (!sample_weights) return Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector w(n);
  for (Index k = 0; k < n; ++k) w(k) = (*sample_weights)(rows[static_cast<std::size_t>(k)]);
  const double total = w.lpNorm<1>();
  if (!(total > 0.0)) {
    throw InvalidInputError("class '" + class_names.at(c) + "' has zero total weight");
  }
  return w / total;
}

void LabeledDataset::validate() const {
  if (X.rows() < 2) throw InvalidInputError("dataset needs at least two samples");
  if (static_cast<Index>(labels.size()) != X.rows()) {
    throw InvalidInputError("label count does not match the number of rows");
  }
  if (!X.allFinite()) throw InvalidInputError("predictors contain non-finite values");
  if (class_names.size() < 2) throw InvalidInputError("at least two classes are required");
  for (const int label : labels) {
    if (label < 0 || label >= num_classes()) throw InvalidInputError("label id out of range");
  }
  const auto counts = class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) throw InvalidInputError("class '" + class_names[c] + "' is empty");
  }
  if (sample_weights) {
    if (sample_weights->size() != X.rows()) {
      throw InvalidInputError("sample weight count does not match the number of rows");
    }
    if (!sample_weights->allFinite() || (sample_weights->array() < 0.0).any()) {
      throw InvalidInputError("sample weights must be finite and nonnegative");
    }
  }
}

}  // namespace potd
