#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "potd/dataset.hpp"
#include "potd/ot.hpp"
#include "potd/potd.hpp"
#include "potd/report.hpp"
#include "potd/synthetic.hpp"

namespace potd {

/// Brute-force K nearest neighbours by Euclidean distance. Equal distances
/// are ordered by training row index (lower first); a tied vote goes to the
/// smallest class id.
std::vector<int> knn_predict(const LabeledDataset& train, const Matrix& test_points, Index K);

/// Fraction of positions where predicted == truth.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);
/// 1 - accuracy, computed from the same counts so the two sum to exactly 1.
double error_rate(const std::vector<int>& predicted, const std::vector<int>& truth);

struct SplitConfig {
  double test_fraction = 0.5;
  int replications = 100;
  std::uint64_t seed = 42;
  // Per-class split so every class keeps training samples; false gives a
  // plain random split.
  bool stratified = true;

  void validate() const;
};

struct TrainTestSplit {
  std::vector<Index> train;
  std::vector<Index> test;
};

/// Split for one replication. Depends only on (labels, config, replication),
/// so every method of a replication sees the same partition.
TrainTestSplit make_split(const std::vector<int>& labels, int num_classes,
                          const SplitConfig& config, int replication);

enum class Method { kPotd, kSir, kSave, kPca };

std::string_view to_string(Method method);
/// Case-insensitive; throws InvalidInputError listing the valid names.
Method parse_method(std::string_view name);
std::vector<Method> all_methods();

struct FitOptions {
  SolverConfig solver;
  bool whiten = true;  // POTD only; SIR and SAVE always whiten
};

/// Fits `method` at dimension r. SIR may return fewer columns (k-1 cap).
Basis fit_method(Method method, const LabeledDataset& data, Index r, const FitOptions& options = {});

/// One real-data replication: fit on the training rows only, project both
/// sides, classify the test rows with KNN. Requires 1 <= r < p. `fitted`, when given, receives
/// the basis.
double evaluate_split(const LabeledDataset& data, const TrainTestSplit& split, Method method,
                      Index r, Index K, const FitOptions& options = {}, Basis* fitted = nullptr);

struct SyntheticBenchmarkConfig {
  std::vector<SyntheticModel> models = {SyntheticModel::kI, SyntheticModel::kII,
                                        SyntheticModel::kIII, SyntheticModel::kIV};
  std::vector<Index> p_values = {10, 20, 30};
  std::vector<Method> methods = all_methods();
  Index n = 400;
  int replications = 100;
  std::uint64_t seed = 42;
  double noise_scale = 0.2;
  FitOptions fit;

  void validate() const;
};

/// Seed of the dataset generated for (model, p, replication); shared by all
/// methods so comparisons are paired.
std::uint64_t synthetic_replication_seed(std::uint64_t seed, SyntheticModel model, Index p,
                                         int replication);

/// Subspace distance to the true subspace for every (model, p, method),
/// fitted at the true dimension. Fit failures are recorded per row.
BenchmarkReport run_synthetic_benchmark(const SyntheticBenchmarkConfig& config);

inline constexpr Index kDefaultNeighbors = 10;

struct RealBenchmarkConfig {
  std::vector<Method> methods = all_methods();
  std::vector<Index> dims = {2, 4, 6, 8, 10};
  SplitConfig split;
  Index K = kDefaultNeighbors;
  FitOptions fit;
  std::string setting = "dataset";

  void validate() const;
};

/// Test accuracy of KNN on the projected data for every (method, r).
BenchmarkReport run_real_benchmark(const LabeledDataset& data, const RealBenchmarkConfig& config);

nlohmann::json to_json(const SyntheticBenchmarkConfig& config);
nlohmann::json to_json(const RealBenchmarkConfig& config);
nlohmann::json to_json(const SolverConfig& config);

}  // namespace potd
