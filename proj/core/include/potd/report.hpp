#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace potd {

inline constexpr int kReportSchemaVersion = 1;

enum class MetricKind { kSubspaceDistance, kAccuracy };

std::string_view to_string(MetricKind kind);

struct ReportRow {
  std::string method;
  std::string setting;  // model/p id or dataset name
  long r = 0;           // requested dimension
  long effective_r = 0; // dimension actually fitted
  double mean = 0.0;    // over successful replications; NaN if none
  double sd = 0.0;      // n-1 denominator; 0 with fewer than two values
  int replications = 0; // configured
  MetricKind metric_kind = MetricKind::kSubspaceDistance;
  std::vector<double> values;         // successful replications, in order
  std::vector<std::string> failures;  // one message per failed replication
};

/// Mean and n-1 standard deviation of `values`, stored into `row`.
void aggregate(ReportRow& row);

struct BenchmarkReport {
  std::string kind;  // "synthetic" or "real"
  std::vector<ReportRow> rows;
  nlohmann::json config = nlohmann::json::object();
  // Run-specific fields (timestamp, version). Everything outside this
  // object is a deterministic function of the configuration.
  nlohmann::json metadata = nlohmann::json::object();

  const ReportRow* find(std::string_view method, std::string_view setting, long r) const;
};

nlohmann::json to_json(const BenchmarkReport& report);
BenchmarkReport report_from_json(const nlohmann::json& json);

/// Library version string.
std::string_view library_version();

/// Stamps metadata.created_utc and metadata.version.
void stamp_metadata(BenchmarkReport& report);

void write_report_json(const std::filesystem::path& path, const BenchmarkReport& report);
/// Aggregate rows: method, setting, r, effective_r, mean, sd, reps,
/// failures, metric.
void write_report_csv(const std::filesystem::path& path, const BenchmarkReport& report);

}  // namespace potd
