#include "potd/harness.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "potd/baselines.hpp"
#include "potd/errors.hpp"
#include "potd/metrics.hpp"
#include "potd/parallel.hpp"
#include "potd/rng.hpp"

namespace potd {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void shuffle(std::vector<Index>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

Index true_dimension(SyntheticModel model) {
  switch (model) {
    case SyntheticModel::kIII:
    case SyntheticModel::kIV:
      return 4;
    default:
      return 2;
  }
}

std::size_t count_correct(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size()) {
    std::ostringstream os;
    os << "prediction length " << predicted.size() << " differs from truth length "
       << truth.size();
    throw InvalidInputError(os.str());
  }
  if (truth.empty()) throw InvalidInputError("cannot score an empty prediction");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) correct += predicted[i] == truth[i] ? 1 : 0;
  return correct;
}

std::string failure_message(int replication, const std::exception& error) {
  std::ostringstream os;
  os << "replication " << replication << ": ";
  if (const auto* typed = dynamic_cast<const Error*>(&error)) {
    os << to_string(typed->kind()) << ": ";
  }
  os << error.what();
  return os.str();
}

}  // namespace

std::vector<int> knn_predict(const LabeledDataset& train, const Matrix& test_points, Index K) {
  const Index n = train.size();
  if (n == 0) throw InvalidInputError("KNN needs a nonempty training set");
  if (K < 1 || K > n) {
    std::ostringstream os;
    os << "K must lie in [1, " << n << "] (got " << K << ")";
    throw InvalidInputError(os.str());
  }
  if (test_points.cols() != train.dim()) {
    throw InvalidInputError("test points and training set differ in dimension");
  }
  const int k = std::max(train.num_classes(), 1 + *std::max_element(train.labels.begin(),
                                                                     train.labels.end()));
  std::vector<int> predicted(static_cast<std::size_t>(test_points.rows()));
  std::vector<std::pair<double, Index>> order(static_cast<std::size_t>(n));
  std::vector<int> votes(static_cast<std::size_t>(k));
  for (Index t = 0; t < test_points.rows(); ++t) {
    for (Index i = 0; i < n; ++i) {
      order[static_cast<std::size_t>(i)] = {(train.X.row(i) - test_points.row(t)).squaredNorm(), i};
    }
    // Pairs compare by distance, then row index: the lower row wins ties.
    std::nth_element(order.begin(), order.begin() + (K - 1), order.end());
    std::fill(votes.begin(), votes.end(), 0);
    for (Index i = 0; i < K; ++i) {
      const Index row = order[static_cast<std::size_t>(i)].second;
      ++votes[static_cast<std::size_t>(train.labels[static_cast<std::size_t>(row)])];
    }
    // max_element returns the first maximum, i.e. the smallest class id.
    predicted[static_cast<std::size_t>(t)] =
        static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
  }
  return predicted;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  const std::size_t correct = count_correct(predicted, truth);
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

double error_rate(const std::vector<int>& predicted, const std::vector<int>& truth) {
  return 1.0 - accuracy(predicted, truth);
}

void SplitConfig::validate() const {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InvalidInputError("test fraction must lie strictly between 0 and 1");
  }
  if (replications < 1) throw InvalidInputError("replications must be at least 1");
}

TrainTestSplit make_split(const std::vector<int>& labels, int num_classes,
                          const SplitConfig& config, int replication) {
  config.validate();
  const auto n = static_cast<Index>(labels.size());
  if (n < 2) throw InvalidInputError("cannot split fewer than two samples");
  Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(replication)));
  TrainTestSplit split;
  auto take = [&](std::vector<Index>& rows) {
    shuffle(rows, rng);
    const Index size = static_cast<Index>(rows.size());
    Index n_test = static_cast<Index>(std::llround(config.test_fraction * static_cast<double>(size)));
    n_test = std::clamp<Index>(n_test, size > 1 ? 1 : 0, size - 1);
    split.test.insert(split.test.end(), rows.begin(), rows.begin() + n_test);
    split.train.insert(split.train.end(), rows.begin() + n_test, rows.end());
  };
  if (config.stratified) {
    std::vector<std::vector<Index>> members(static_cast<std::size_t>(num_classes));
    for (Index i = 0; i < n; ++i) {
      const int label = labels[static_cast<std::size_t>(i)];
      if (label < 0 || label >= num_classes) throw InvalidInputError("label id out of range");
      members[static_cast<std::size_t>(label)].push_back(i);
    }
    for (auto& rows : members) {
      if (!rows.empty()) take(rows);
    }
  } else {
    std::vector<Index> rows(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
    take(rows);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kPotd:
      return "POTD";
    case Method::kSir:
      return "SIR";
    case Method::kSave:
      return "SAVE";
    case Method::kPca:
      return "PCA";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  const std::string key = lower(name);
  if (key == "potd") return Method::kPotd;
  if (key == "sir") return Method::kSir;
  if (key == "save") return Method::kSave;
  if (key == "pca") return Method::kPca;
  throw InvalidInputError("unknown method '" + std::string(name) +
                          "' (valid: POTD, SIR, SAVE, PCA)");
}

std::vector<Method> all_methods() {
  return {Method::kPotd, Method::kSir, Method::kSave, Method::kPca};
}

Basis fit_method(Method method, const LabeledDataset& data, Index r, const FitOptions& options) {
  switch (method) {
    case Method::kPotd:
      return potd_fit(data, r, options.solver, options.whiten);
    case Method::kSir:
      return sir_fit(data, r);
    case Method::kSave:
      return save_fit(data, r);
    case Method::kPca:
      data.validate();
      return pca_fit(data.X, r);
  }
  throw InvalidInputError("unknown method");
}

double evaluate_split(const LabeledDataset& data, const TrainTestSplit& split, Method method,
                      Index r, Index K, const FitOptions& options, Basis* fitted) {
  if (r < 1 || r >= data.dim()) {
    std::ostringstream os;
    os << "r must lie in [1, p-1] = [1, " << data.dim() - 1 << "] (got " << r << ")";
    throw InvalidInputError(os.str());
  }
  const LabeledDataset train = data.subset(split.train);
  const LabeledDataset test = data.subset(split.test);
  for (std::size_t c = 0; c < train.class_counts().size(); ++c) {
    if (train.class_counts()[c] == 0) {
      throw InvalidInputError("class '" + train.class_names[c] + "' is absent from the training split");
    }
  }
  Basis basis = fit_method(method, train, r, options);
  LabeledDataset projected_train = train;
  projected_train.X = project(train.X, basis);
  const Matrix projected_test = project(test.X, basis);
  const auto predicted = knn_predict(projected_train, projected_test, std::min(K, train.size()));
  if (fitted != nullptr) *fitted = std::move(basis);
  return accuracy(predicted, test.labels);
}

void SyntheticBenchmarkConfig::validate() const {
  if (models.empty() || p_values.empty() || methods.empty()) {
    throw InvalidInputError("models, p values and methods must be nonempty");
  }
  if (replications < 1) throw InvalidInputError("replications must be at least 1");
  for (const auto model : models) {
    if (model == SyntheticModel::kCShape || model == SyntheticModel::kSvm3d) {
      throw InvalidInputError("the synthetic benchmark covers models I-IV");
    }
    for (const Index p : p_values) {
      SyntheticSpec spec;
      spec.model = model;
      spec.n = n;
      spec.p = p;
      spec.noise_scale = noise_scale;
      spec.validate();
      if (true_dimension(model) >= p) {
        throw InvalidInputError("p must exceed the true dimension of model " +
                                std::string(to_string(model)));
      }
    }
  }
  fit.solver.validate();
}

std::uint64_t synthetic_replication_seed(std::uint64_t seed, SyntheticModel model, Index p,
                                         int replication) {
  const auto cell = static_cast<std::uint64_t>(model) * 1'000'003ULL + static_cast<std::uint64_t>(p);
  return mix_seed(mix_seed(seed, cell), static_cast<std::uint64_t>(replication));
}

BenchmarkReport run_synthetic_benchmark(const SyntheticBenchmarkConfig& config) {
  config.validate();
  struct Cell {
    SyntheticModel model;
    Index p;
    int replication;
  };
  std::vector<Cell> cells;
  for (const auto model : config.models) {
    for (const Index p : config.p_values) {
      for (int rep = 0; rep < config.replications; ++rep) cells.push_back({model, p, rep});
    }
  }
  const std::size_t m = config.methods.size();
  // outcome[cell * m + method]: distance, or the failure message
  std::vector<double> distance(cells.size() * m, 0.0);
  std::vector<std::string> failure(cells.size() * m);
  std::vector<Index> fitted_r(cells.size() * m, 0);

  parallel_for(cells.size(), [&](std::size_t c) {
    const Cell& cell = cells[c];
    SyntheticSpec spec;
    spec.model = cell.model;
    spec.n = config.n;
    spec.p = cell.p;
    spec.noise_scale = config.noise_scale;
    spec.seed = synthetic_replication_seed(config.seed, cell.model, cell.p, cell.replication);
    SyntheticDataset generated;
    try {
      generated = generate(spec);
    } catch (const std::exception& error) {
      for (std::size_t k = 0; k < m; ++k) failure[c * m + k] = failure_message(cell.replication, error);
      return;
    }
    const Index r0 = generated.truth.dim();
    for (std::size_t k = 0; k < m; ++k) {
      try {
        const Basis basis = fit_method(config.methods[k], generated.data, r0, config.fit);
        distance[c * m + k] = subspace_distance(basis, generated.truth);
        fitted_r[c * m + k] = basis.rank();
      } catch (const std::exception& error) {
        failure[c * m + k] = failure_message(cell.replication, error);
      }
    }
  });

  BenchmarkReport report;
  report.kind = "synthetic";
  report.config = to_json(config);
  std::size_t c = 0;
  for (const auto model : config.models) {
    for (const Index p : config.p_values) {
      const Index r0 = true_dimension(model);
      for (std::size_t k = 0; k < m; ++k) {
        ReportRow row;
        row.method = std::string(to_string(config.methods[k]));
        row.setting = std::string(to_string(model)) + "-" + std::to_string(p);
        row.r = static_cast<long>(r0);
        row.effective_r = 0;
        row.replications = config.replications;
        row.metric_kind = MetricKind::kSubspaceDistance;
        for (int rep = 0; rep < config.replications; ++rep) {
          const std::size_t slot = (c + static_cast<std::size_t>(rep)) * m + k;
          if (failure[slot].empty()) {
            row.values.push_back(distance[slot]);
            row.effective_r = static_cast<long>(fitted_r[slot]);
          } else {
            row.failures.push_back(failure[slot]);
          }
        }
        aggregate(row);
        report.rows.push_back(std::move(row));
      }
      c += static_cast<std::size_t>(config.replications);
    }
  }
  return report;
}

void RealBenchmarkConfig::validate() const {
  if (methods.empty() || dims.empty()) throw InvalidInputError("methods and dims must be nonempty");
  for (const Index r : dims) {
    if (r < 1) throw InvalidInputError("dimensions must be positive");
  }
  if (K < 1) throw InvalidInputError("K must be at least 1");
  split.validate();
  fit.solver.validate();
}

BenchmarkReport run_real_benchmark(const LabeledDataset& data, const RealBenchmarkConfig& config) {
  config.validate();
  data.validate();
  const int reps = config.split.replications;
  const std::size_t m = config.methods.size();
  const std::size_t d = config.dims.size();
  std::vector<double> score(static_cast<std::size_t>(reps) * m * d, 0.0);
  std::vector<std::string> failure(score.size());
  std::vector<Index> fitted_r(score.size(), 0);

  parallel_for(static_cast<std::size_t>(reps), [&](std::size_t rep) {
    const int replication = static_cast<int>(rep);
    const TrainTestSplit split =
        make_split(data.labels, data.num_classes(), config.split, replication);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t j = 0; j < d; ++j) {
        const std::size_t slot = (rep * m + k) * d + j;
        try {
          Basis basis;
          score[slot] = evaluate_split(data, split, config.methods[k], config.dims[j], config.K,
                                       config.fit, &basis);
          fitted_r[slot] = basis.rank();
        } catch (const std::exception& error) {
          failure[slot] = failure_message(replication, error);
        }
      }
    }
  });

  BenchmarkReport report;
  report.kind = "real";
  report.config = to_json(config);
  report.config["dataset"] = {{"n", data.size()}, {"p", data.dim()}, {"classes", data.class_names}};
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      ReportRow row;
      row.method = std::string(to_string(config.methods[k]));
      row.setting = config.setting;
      row.r = static_cast<long>(config.dims[j]);
      // Expected fitted dimension even when every replication failed.
      row.effective_r = config.methods[k] == Method::kSir
                            ? static_cast<long>(std::min<Index>(config.dims[j], data.num_classes() - 1))
                            : row.r;
      row.replications = reps;
      row.metric_kind = MetricKind::kAccuracy;
      for (int rep = 0; rep < reps; ++rep) {
        const std::size_t slot = (static_cast<std::size_t>(rep) * m + k) * d + j;
        if (failure[slot].empty()) {
          row.values.push_back(score[slot]);
          row.effective_r = static_cast<long>(fitted_r[slot]);
        } else {
          row.failures.push_back(failure[slot]);
        }
      }
      aggregate(row);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

nlohmann::json to_json(const SolverConfig& config) {
  std::string mode = "auto";
  if (config.mode == SolverMode::kExact) mode = "exact";
  if (config.mode == SolverMode::kSinkhorn) mode = "sinkhorn";
  nlohmann::json out = {
      {"mode", mode},
      {"max_iterations", config.max_iterations},
      {"marginal_tolerance", config.marginal_tolerance},
  };
  if (config.epsilon) {
    out["epsilon"] = *config.epsilon;
  } else {
    out["epsilon"] = "0.05*median(cost)";
  }
  return out;
}

namespace {

nlohmann::json method_names(const std::vector<Method>& methods) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto method : methods) out.push_back(std::string(to_string(method)));
  return out;
}

}  // namespace

nlohmann::json to_json(const SyntheticBenchmarkConfig& config) {
  nlohmann::json models = nlohmann::json::array();
  for (const auto model : config.models) models.push_back(std::string(to_string(model)));
  return {
      {"models", models},
      {"p_values", config.p_values},
      {"methods", method_names(config.methods)},
      {"n", config.n},
      {"replications", config.replications},
      {"seed", config.seed},
      {"noise_scale", config.noise_scale},
      {"whiten", config.fit.whiten},
      {"solver", to_json(config.fit.solver)},
  };
}

nlohmann::json to_json(const RealBenchmarkConfig& config) {
  return {
      {"methods", method_names(config.methods)},
      {"dims", config.dims},
      {"test_fraction", config.split.test_fraction},
      {"replications", config.split.replications},
      {"seed", config.split.seed},
      {"stratified", config.split.stratified},
      {"K", config.K},
      {"whiten", config.fit.whiten},
      {"solver", to_json(config.fit.solver)},
      {"setting", config.setting},
  };
}

}  // namespace potd
