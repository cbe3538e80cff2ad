// potd: command-line front end.
//
// Exit codes: 0 success, 1 internal or numeric failure, 2 usage or input
// error. Failures print one JSON line on stderr:
//   {"error":{"kind":"file_not_found","message":"dataset not found: x.csv"}}

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "config_file.hpp"
#include "oracle_check.hpp"
#include "potd/baselines.hpp"
#include "potd/csv.hpp"
#include "potd/errors.hpp"
#include "potd/harness.hpp"
#include "potd/parallel.hpp"
#include "potd/potd.hpp"
#include "potd/report.hpp"
#include "potd/synthetic.hpp"

namespace {

using namespace potd;
using nlohmann::json;

enum class LogLevel { kError, kWarn, kInfo, kDebug };

LogLevel g_log_level = LogLevel::kWarn;

void log(LogLevel level, const std::string& message) {
  if (level > g_log_level) return;
  static constexpr const char* kNames[] = {"error", "warn", "info", "debug"};
  std::cerr << "[" << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

struct CommonOptions {
  std::uint64_t seed = 42;
  std::string config_path;
  std::string log_level = "warn";
};

struct DataOptions {
  std::string path;
  std::string label;
  std::string delimiter = ",";
};

struct SolverOptions {
  std::string mode = "auto";
  double epsilon = 0.0;  // 0 means the median-cost default
  int max_iterations = SolverConfig{}.max_iterations;
  double tolerance = SolverConfig{}.marginal_tolerance;
  bool no_whiten = false;

  FitOptions resolve() const {
    FitOptions fit;
    if (mode == "exact") fit.solver.mode = SolverMode::kExact;
    if (mode == "sinkhorn") fit.solver.mode = SolverMode::kSinkhorn;
    if (epsilon > 0.0) fit.solver.epsilon = epsilon;
    fit.solver.max_iterations = max_iterations;
    fit.solver.marginal_tolerance = tolerance;
    fit.whiten = !no_whiten;
    fit.solver.validate();
    return fit;
  }
};

void add_data_options(CLI::App& cmd, DataOptions& data) {
  cmd.add_option("--data", data.path, "Input CSV with a header row")->required();
  cmd.add_option("--label", data.label,
                 "Label column: header name or 0-based index (default: last column)");
  cmd.add_option("--delimiter", data.delimiter, "Field delimiter (one character)")
      ->check([](const std::string& text) {
        return text.size() == 1 ? std::string() : std::string("delimiter must be one character");
      });
}

void add_solver_options(CLI::App& cmd, SolverOptions& solver) {
  cmd.add_option("--solver", solver.mode,
                 "OT solver: auto (exact when n*m <= 250000), exact, sinkhorn")
      ->check(CLI::IsMember({"auto", "exact", "sinkhorn"}));
  cmd.add_option("--epsilon", solver.epsilon,
                 "Sinkhorn regularization in cost units (0: 0.05 * median cost)")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--max-iter", solver.max_iterations, "Sinkhorn iteration budget")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--tol", solver.tolerance, "Sinkhorn marginal L1 tolerance")
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--no-whiten", solver.no_whiten, "POTD: skip whitening of the predictors");
}

LabeledDataset load(const DataOptions& options) {
  CsvOptions csv;
  csv.label_column = options.label;
  csv.delimiter = options.delimiter.front();
  LabeledDataset data = load_csv_dataset(options.path, csv);
  std::ostringstream os;
  os << "loaded " << options.path << ": n=" << data.size() << " p=" << data.dim()
     << " classes=" << data.num_classes() << " (";
  const auto counts = data.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    os << (c ? ", " : "") << data.class_names[c] << ":" << counts[c];
  }
  os << ")";
  log(LogLevel::kInfo, os.str());
  return data;
}

std::vector<std::string> coordinate_names(const std::string& prefix, Index count) {
  std::vector<std::string> names;
  for (Index j = 0; j < count; ++j) names.push_back(prefix + std::to_string(j + 1));
  return names;
}

void write_json_file(const std::filesystem::path& path, const json& value) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write '" + path.string() + "'");
  out << value.dump(2) << '\n';
}

json metadata() {
  BenchmarkReport stamp;
  stamp_metadata(stamp);
  return stamp.metadata;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> methods;
  for (const auto& name : names) methods.push_back(parse_method(name));
  return methods;
}

// ---- fit ------------------------------------------------------------------

struct FitCommand {
  DataOptions data;
  SolverOptions solver;
  Index r = 0;
  std::optional<double> auto_dim;
  std::string output;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("fit", "Fit a POTD basis and write it as CSV");
    add_data_options(*cmd, data);
    add_solver_options(*cmd, solver);
    auto* dim = cmd->add_option("-r,--dim", r, "Subspace dimension");
    auto* auto_opt = cmd->add_option(
        "--auto-dim", auto_dim,
        "Choose r as the smallest dimension whose singular values reach this share of the total");
    dim->excludes(auto_opt);
    cmd->add_option("-o,--output", output,
                    "Basis CSV (p x r); singular values and config go to <output>.json")
        ->required();
  }

  int run(const CommonOptions& common) {
    if (r == 0 && !auto_dim) throw InvalidInputError("fit needs --dim or --auto-dim");
    const FitOptions fit = solver.resolve();
    const LabeledDataset dataset = load(data);
    Basis basis;
    Index chosen = r;
    if (auto_dim) {
      basis = potd_fit(dataset, dataset.dim(), fit.solver, fit.whiten);
      chosen = estimate_dimension(basis.singular_values, *auto_dim);
      // The basis is orthonormalized column by column, so its leading
      // columns are exactly the rank-r fit.
      basis.vectors = Matrix(basis.vectors.leftCols(chosen));
      log(LogLevel::kInfo, "auto-dim chose r=" + std::to_string(chosen));
    } else {
      basis = potd_fit(dataset, r, fit.solver, fit.whiten);
    }
    write_matrix_csv(output, basis.vectors, coordinate_names("b", chosen));
    json sidecar = {
        {"schema_version", kReportSchemaVersion},
        {"metadata", metadata()},
        {"config",
         {{"command", "fit"},
          {"data", data.path},
          {"label", data.label.empty() ? "<last column>" : data.label},
          {"delimiter", data.delimiter},
          {"r", r == 0 ? json(nullptr) : json(r)},
          {"auto_dim", auto_dim ? json(*auto_dim) : json(nullptr)},
          {"whiten", fit.whiten},
          {"solver", to_json(fit.solver)},
          {"seed", common.seed}}},
        {"chosen_r", chosen},
        {"singular_values", std::vector<double>(basis.singular_values.begin(),
                                                basis.singular_values.end())},
        {"feature_names", dataset.feature_names},
        {"warnings", basis.warnings},
    };
    write_json_file(output + ".json", sidecar);
    std::cout << "wrote " << output << " (p=" << basis.vectors.rows() << ", r=" << chosen << ")\n";
    return 0;
  }
};

// ---- embed ----------------------------------------------------------------

struct EmbedCommand {
  DataOptions data;
  SolverOptions solver;
  std::string method = "POTD";
  Index r = 2;
  std::string output;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("embed", "Project a dataset onto a fitted subspace (plot-ready CSV)");
    add_data_options(*cmd, data);
    add_solver_options(*cmd, solver);
    cmd->add_option("--method", method, "POTD, SIR, SAVE or PCA");
    cmd->add_option("-r,--dim", r, "Embedding dimension");
    cmd->add_option("-o,--output", output, "Output CSV: r coordinates plus the label")->required();
  }

  int run(const CommonOptions&) {
    const Method chosen = parse_method(method);
    const FitOptions fit = solver.resolve();
    const LabeledDataset dataset = load(data);
    if (r < 1 || r > dataset.dim()) {
      throw InvalidInputError("r must lie in [1, " + std::to_string(dataset.dim()) + "] (got " +
                              std::to_string(r) + ")");
    }
    const Basis basis = fit_method(chosen, dataset, r, fit);
    for (const auto& warning : basis.warnings) log(LogLevel::kWarn, warning);
    const Matrix Z = project(dataset.X, basis);

    std::ofstream out(output);
    if (!out) throw InvalidInputError("cannot write '" + output + "'");
    for (Index j = 0; j < Z.cols(); ++j) out << "z" << j + 1 << ',';
    out << "label\n";
    for (Index i = 0; i < Z.rows(); ++i) {
      for (Index j = 0; j < Z.cols(); ++j) out << format_double(Z(i, j)) << ',';
      out << dataset.class_names[static_cast<std::size_t>(dataset.labels[i])] << '\n';
    }
    if (!out) throw InvalidInputError("failed writing '" + output + "'");
    std::cout << "wrote " << output << " (" << Z.rows() << " x " << Z.cols() + 1 << ")\n";
    return 0;
  }
};

// ---- benchmarks -----------------------------------------------------------

void print_report(const BenchmarkReport& report) {
  std::cout << std::left;
  for (const auto& row : report.rows) {
    std::cout << std::setw(6) << row.method << std::setw(14) << row.setting << " r=" << std::setw(3)
              << row.r << " mean=" << std::fixed << std::setprecision(4) << row.mean
              << " sd=" << row.sd << std::defaultfloat;
    if (!row.failures.empty()) std::cout << " failures=" << row.failures.size();
    std::cout << '\n';
  }
}

void write_outputs(BenchmarkReport& report, const std::string& json_path,
                   const std::string& csv_path) {
  stamp_metadata(report);
  if (!json_path.empty()) write_report_json(json_path, report);
  if (!csv_path.empty()) write_report_csv(csv_path, report);
}

struct BenchSyntheticCommand {
  SolverOptions solver;
  std::vector<std::string> models = {"I", "II", "III", "IV"};
  std::vector<Index> p_values = {10, 20, 30};
  std::vector<std::string> methods = {"POTD", "SIR", "SAVE", "PCA"};
  Index n = 400;
  int reps = 100;
  double noise = 0.2;
  std::string output;
  std::string csv;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("bench-synthetic",
                                   "Subspace distances on the binary synthetic models");
    add_solver_options(*cmd, solver);
    cmd->add_option("--models", models, "Models among I, II, III, IV")->delimiter(',');
    cmd->add_option("--p", p_values, "Ambient dimensions")->delimiter(',');
    cmd->add_option("--methods", methods, "Methods among POTD, SIR, SAVE, PCA")->delimiter(',');
    cmd->add_option("--n", n, "Total sample size per dataset")->check(CLI::PositiveNumber);
    cmd->add_option("--reps", reps, "Replications per cell")->check(CLI::PositiveNumber);
    cmd->add_option("--noise", noise, "Label-noise scale")->check(CLI::NonNegativeNumber);
    cmd->add_option("-o,--output", output, "JSON report path");
    cmd->add_option("--csv", csv, "Aggregate CSV path");
  }

  int run(const CommonOptions& common) {
    SyntheticBenchmarkConfig config;
    config.models.clear();
    for (const auto& name : models) config.models.push_back(parse_synthetic_model(name));
    config.p_values = p_values;
    config.methods = parse_methods(methods);
    config.n = n;
    config.replications = reps;
    config.seed = common.seed;
    config.noise_scale = noise;
    config.fit = solver.resolve();
    log(LogLevel::kInfo, "running synthetic benchmark on " + std::to_string(worker_count()) +
                             " thread(s)");
    BenchmarkReport report = run_synthetic_benchmark(config);
    print_report(report);
    write_outputs(report, output, csv);
    return 0;
  }
};

struct BenchRealCommand {
  DataOptions data;
  SolverOptions solver;
  std::vector<std::string> methods = {"POTD", "SIR", "SAVE", "PCA"};
  std::vector<Index> dims = {2, 4, 6, 8, 10};
  int reps = 100;
  double test_fraction = 0.5;
  Index K = kDefaultNeighbors;
  bool random_split = false;
  std::string setting;
  std::string output;
  std::string csv;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("bench-real", "KNN accuracy on projected data from a CSV");
    add_data_options(*cmd, data);
    add_solver_options(*cmd, solver);
    cmd->add_option("--methods", methods, "Methods among POTD, SIR, SAVE, PCA")->delimiter(',');
    cmd->add_option("--dims", dims, "Projection dimensions")->delimiter(',');
    cmd->add_option("--reps", reps, "Random train/test splits")->check(CLI::PositiveNumber);
    cmd->add_option("--test-fraction", test_fraction, "Share of each split held out")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("-K,--neighbors", K, "Neighbours in the KNN vote")->check(CLI::PositiveNumber);
    cmd->add_flag("--random-split", random_split, "Plain random split instead of stratified");
    cmd->add_option("--setting", setting, "Dataset name in the report (default: file stem)");
    cmd->add_option("-o,--output", output, "JSON report path");
    cmd->add_option("--csv", csv, "Aggregate CSV path");
  }

  int run(const CommonOptions& common) {
    RealBenchmarkConfig config;
    config.methods = parse_methods(methods);
    config.dims = dims;
    config.split.replications = reps;
    config.split.test_fraction = test_fraction;
    config.split.seed = common.seed;
    config.split.stratified = !random_split;
    config.K = K;
    config.fit = solver.resolve();
    config.setting = setting.empty() ? std::filesystem::path(data.path).stem().string() : setting;
    config.validate();
    const LabeledDataset dataset = load(data);
    BenchmarkReport report = run_real_benchmark(dataset, config);
    report.config["data"] = data.path;
    print_report(report);
    write_outputs(report, output, csv);
    return 0;
  }
};

// ---- oracle-check / generate ----------------------------------------------

struct OracleCommand {
  cli::OracleCheckConfig config;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("oracle-check",
                                   "Check the OT solvers against brute force and print Sinkhorn gaps");
    cmd->add_option("--size", config.size, "Points per measure (at most 16)");
    cmd->add_option("--epsilons", config.epsilons, "Sinkhorn epsilons as multiples of max(cost)")
        ->delimiter(',');
    cmd->add_option("--instances", config.instances, "Random instances")
        ->check(CLI::PositiveNumber);
  }

  int run(const CommonOptions& common) {
    config.seed = common.seed;
    return cli::run_oracle_check(config, std::cout);
  }
};

struct GenerateCommand {
  std::string model = "I";
  Index n = 400;
  Index p = 10;
  double noise = 0.2;
  bool pooled = false;
  std::string dump;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
    cmd->add_option("--model", model, "I, II, III, IV, cshape or svm3d");
    cmd->add_option("--n", n, "Total samples (I-IV) or samples per class (cshape, svm3d)");
    cmd->add_option("--p", p, "Ambient dimension");
    cmd->add_option("--noise", noise, "Label-noise scale (I-IV)");
    cmd->add_flag("--pooled", pooled, "cshape: standardize the pooled sample");
    cmd->add_option("--dump", dump, "Output CSV path")->required();
  }

  int run(const CommonOptions& common) {
    SyntheticSpec spec;
    spec.model = parse_synthetic_model(model);
    spec.n = n;
    spec.p = p;
    spec.seed = common.seed;
    spec.noise_scale = noise;
    spec.pooled_standardization = pooled;
    const SyntheticDataset generated = generate(spec);
    write_csv_dataset(dump, generated.data);
    std::cout << "wrote " << dump << " (n=" << generated.data.size()
              << ", p=" << generated.data.dim() << ", true r=" << generated.truth.dim() << ")\n";
    return 0;
  }
};

void print_error(std::string_view kind, const std::string& message,
                 std::optional<std::pair<std::size_t, std::size_t>> where = std::nullopt) {
  json error = {{"kind", kind}, {"message", message}};
  if (where) {
    error["row"] = where->first;
    error["column"] = where->second;
  }
  std::cerr << json{{"error", error}}.dump() << '\n';
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConvergence:
    case ErrorKind::kNumeric:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Principal optimal transport direction (POTD) dimension reduction"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.fallthrough();

  CommonOptions common;
  app.add_option("--seed", common.seed, "Seed for every random draw");
  app.add_option("--config", common.config_path,
                 "key = value file; its values override command-line flags");
  app.add_option("--log-level", common.log_level, "error, warn, info or debug")
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}));

  FitCommand fit;
  EmbedCommand embed;
  BenchSyntheticCommand bench_synthetic;
  BenchRealCommand bench_real;
  OracleCommand oracle;
  GenerateCommand generate_cmd;
  fit.attach(app);
  embed.attach(app);
  bench_synthetic.attach(app);
  bench_real.attach(app);
  oracle.attach(app);
  generate_cmd.attach(app);

  try {
    app.parse(argc, argv);
    CLI::App* command = app.get_subcommands().front();
    if (!common.config_path.empty()) {
      cli::apply_config_overrides(app, command, common.config_path);
    }
  } catch (const CLI::ParseError& error) {
    if (error.get_exit_code() == 0) return app.exit(error);
    print_error("usage", error.what());
    return 2;
  }

  if (common.log_level == "error") g_log_level = LogLevel::kError;
  if (common.log_level == "info") g_log_level = LogLevel::kInfo;
  if (common.log_level == "debug") g_log_level = LogLevel::kDebug;

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "fit") return fit.run(common);
    if (name == "embed") return embed.run(common);
    if (name == "bench-synthetic") return bench_synthetic.run(common);
    if (name == "bench-real") return bench_real.run(common);
    if (name == "oracle-check") return oracle.run(common);
    if (name == "generate") return generate_cmd.run(common);
  } catch (const ParseError& error) {
    print_error(to_string(error.kind()), error.what(), std::pair{error.row(), error.column()});
    return 2;
  } catch (const Error& error) {
    print_error(to_string(error.kind()), error.what());
    return exit_code_for(error.kind());
  } catch (const std::exception& error) {
    print_error("internal", error.what());
    return 1;
  }
  print_error("usage", "unknown command " + name);
  return 2;
}
