#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "potd/errors.hpp"
#include "potd/report.hpp"

using namespace potd;
namespace fs = std::filesystem;

namespace {

ReportRow sample_row() {
  ReportRow row;
  row.method = "POTD";
  row.setting = "I-10";
  row.r = 2;
  row.effective_r = 2;
  row.replications = 4;
  row.values = {0.5, 0.7, 0.9};
  row.failures = {"replication 3: convergence: no"};
  aggregate(row);
  return row;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("aggregation uses the n-1 standard deviation") {
  const ReportRow row = sample_row();
  double sum = 0.0;
  for (const double v : row.values) sum += v;
  const double mean = sum / 3.0;
  double ss = 0.0;
  for (const double v : row.values) ss += (v - mean) * (v - mean);
  CHECK(std::abs(row.mean - mean) <= 1e-12);
  CHECK(std::abs(row.sd - std::sqrt(ss / 2.0)) <= 1e-12);
  CHECK(std::abs(row.sd - 0.2) <= 1e-12);

  ReportRow single;
  single.values = {3.0};
  aggregate(single);
  CHECK(single.mean == 3.0);
  CHECK(single.sd == 0.0);
  ReportRow empty;
  aggregate(empty);
  CHECK(std::isnan(empty.mean));
}

TEST_CASE("reports round trip through JSON") {
  BenchmarkReport report;
  report.kind = "synthetic";
  report.rows.push_back(sample_row());
  ReportRow failed;
  failed.method = "SAVE";
  failed.setting = "II-20";
  failed.r = 2;
  failed.replications = 1;
  failed.failures = {"replication 0: boom"};
  aggregate(failed);
  report.rows.push_back(failed);
  report.config = {{"n", 400}};
  stamp_metadata(report);

  const nlohmann::json json = to_json(report);
  CHECK(json["schema_version"] == kReportSchemaVersion);
  CHECK(json["metadata"]["version"] == std::string(library_version()));
  CHECK(json["metadata"].contains("created_utc"));
  CHECK(json["rows"][1]["mean"].is_null());

  const BenchmarkReport back = report_from_json(json);
  CHECK(back.kind == "synthetic");
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0].values == report.rows[0].values);
  CHECK(back.rows[0].mean == report.rows[0].mean);
  CHECK(back.rows[0].failures == report.rows[0].failures);
  CHECK(std::isnan(back.rows[1].mean));
  CHECK(back.config == report.config);
  CHECK(back.find("POTD", "I-10", 2) != nullptr);
  CHECK(back.find("POTD", "I-10", 3) == nullptr);

  nlohmann::json future = json;
  future["schema_version"] = 99;
  CHECK_THROWS_AS(report_from_json(future), InvalidInputError);
  CHECK_THROWS_AS(report_from_json(nlohmann::json::parse(R"({"schema_version":1,"rows":[{"metric":"bogus"}]})")),
                  std::exception);
}

TEST_CASE("CSV and JSON files") {
  BenchmarkReport report;
  report.kind = "real";
  ReportRow row = sample_row();
  row.metric_kind = MetricKind::kAccuracy;
  report.rows.push_back(row);
  ReportRow failed = row;
  failed.values.clear();
  aggregate(failed);
  report.rows.push_back(failed);

  const fs::path dir = fs::temp_directory_path() / ("potd_report_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  write_report_csv(dir / "r.csv", report);
  write_report_json(dir / "r.json", report);
  const std::string csv = slurp(dir / "r.csv");
  std::istringstream lines(csv);
  std::string header;
  std::string first;
  std::string second;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK(header == "method,setting,r,effective_r,mean,sd,reps,failures,metric");
  CHECK(first.rfind("POTD,I-10,2,2,0.7", 0) == 0);
  CHECK(first.find(",4,1,accuracy") != std::string::npos);
  CHECK(second.find(",NA,") != std::string::npos);
  const auto parsed = nlohmann::json::parse(slurp(dir / "r.json"));
  CHECK(report_from_json(parsed).rows.size() == 2);
  fs::remove_all(dir);
  CHECK_THROWS_AS(write_report_csv("/nonexistent/dir/r.csv", report), InvalidInputError);
}

TEST_CASE("metric names") {
  CHECK(to_string(MetricKind::kAccuracy) == "accuracy");
  CHECK(to_string(MetricKind::kSubspaceDistance) == "subspace_distance");
}
