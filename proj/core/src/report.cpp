#include "potd/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <numeric>

#include "potd/csv.hpp"
#include "potd/errors.hpp"

#ifndef POTD_VERSION
#define POTD_VERSION "0.0.0"
#endif

namespace potd {

namespace {

nlohmann::json number_or_null(double value) {
  if (std::isfinite(value)) return value;
  return nullptr;
}

double number_from(const nlohmann::json& value) {
  if (value.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return value.get<double>();
}

MetricKind parse_metric_kind(const std::string& text) {
  if (text == "subspace_distance") return MetricKind::kSubspaceDistance;
  if (text == "accuracy") return MetricKind::kAccuracy;
  throw InvalidInputError("unknown metric kind '" + text + "'");
}

}  // namespace

std::string_view to_string(MetricKind kind) {
  return kind == MetricKind::kAccuracy ? "accuracy" : "subspace_distance";
}

std::string_view library_version() { return POTD_VERSION; }

void aggregate(ReportRow& row) {
  const auto& v = row.values;
  if (v.empty()) {
    row.mean = std::numeric_limits<double>::quiet_NaN();
    row.sd = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const double n = static_cast<double>(v.size());
  row.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) {
    row.sd = 0.0;
    return;
  }
  double ss = 0.0;
  for (const double x : v) ss += (x - row.mean) * (x - row.mean);
  row.sd = std::sqrt(ss / (n - 1.0));
}

const ReportRow* BenchmarkReport::find(std::string_view method, std::string_view setting,
                                       long r) const {
  for (const auto& row : rows) {
    if (row.method == method && row.setting == setting && row.r == r) return &row;
  }
  return nullptr;
}

nlohmann::json to_json(const BenchmarkReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json values = nlohmann::json::array();
    for (const double x : row.values) values.push_back(number_or_null(x));
    rows.push_back({
        {"method", row.method},
        {"setting", row.setting},
        {"r", row.r},
        {"effective_r", row.effective_r},
        {"mean", number_or_null(row.mean)},
        {"sd", number_or_null(row.sd)},
        {"replications", row.replications},
        {"metric_kind", std::string(to_string(row.metric_kind))},
        {"values", values},
        {"failures", row.failures},
    });
  }
  return {
      {"schema_version", kReportSchemaVersion},
      {"kind", report.kind},
      {"metadata", report.metadata},
      {"config", report.config},
      {"rows", rows},
  };
}

BenchmarkReport report_from_json(const nlohmann::json& json) {
  const int version = json.at("schema_version").get<int>();
  if (version != kReportSchemaVersion) {
    throw InvalidInputError("unsupported report schema_version " + std::to_string(version));
  }
  BenchmarkReport report;
  report.kind = json.at("kind").get<std::string>();
  report.config = json.value("config", nlohmann::json::object());
  report.metadata = json.value("metadata", nlohmann::json::object());
  for (const auto& item : json.at("rows")) {
    ReportRow row;
    row.method = item.at("method").get<std::string>();
    row.setting = item.at("setting").get<std::string>();
    row.r = item.at("r").get<long>();
    row.effective_r = item.at("effective_r").get<long>();
    row.mean = number_from(item.at("mean"));
    row.sd = number_from(item.at("sd"));
    row.replications = item.at("replications").get<int>();
    row.metric_kind = parse_metric_kind(item.at("metric_kind").get<std::string>());
    for (const auto& x : item.at("values")) row.values.push_back(number_from(x));
    row.failures = item.at("failures").get<std::vector<std::string>>();
    report.rows.push_back(std::move(row));
  }
  return report;
}

void stamp_metadata(BenchmarkReport& report) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  report.metadata["created_utc"] = buffer;
  report.metadata["version"] = std::string(library_version());
}

void write_report_json(const std::filesystem::path& path, const BenchmarkReport& report) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write '" + path.string() + "'");
  out << to_json(report).dump(2) << '\n';
  if (!out) throw InvalidInputError("failed writing '" + path.string() + "'");
}

void write_report_csv(const std::filesystem::path& path, const BenchmarkReport& report) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write '" + path.string() + "'");
  out << "method,setting,r,effective_r,mean,sd,reps,failures,metric\n";
  for (const auto& row : report.rows) {
    out << row.method << ',' << row.setting << ',' << row.r << ',' << row.effective_r << ','
        << (std::isfinite(row.mean) ? format_double(row.mean) : "NA") << ','
        << (std::isfinite(row.sd) ? format_double(row.sd) : "NA") << ',' << row.replications
        << ',' << row.failures.size() << ',' << to_string(row.metric_kind) << '\n';
  }
  if (!out) throw InvalidInputError("failed writing '" + path.string() + "'");
}

}  // namespace potd
