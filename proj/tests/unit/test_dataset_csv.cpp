#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "potd/csv.hpp"
#include "potd/errors.hpp"
#include "test_support.hpp"

using namespace potd;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("potd_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST_CASE("three rows with two classes") {
  const auto data = parse_csv_dataset("x1,x2,y\n1,2,a\n3,4,a\n5,6,b\n");
  CHECK(data.size() == 3);
  CHECK(data.dim() == 2);
  CHECK(data.num_classes() == 2);
  CHECK(data.labels == std::vector<int>{0, 0, 1});
  CHECK(data.class_names == std::vector<std::string>{"a", "b"});
  CHECK(data.feature_names == std::vector<std::string>{"x1", "x2"});
  CHECK(data.X(2, 1) == 6.0);
}

TEST_CASE("a non-numeric cell reports its position") {
  try {
    (void)parse_csv_dataset("a,b,c,d,y\n1,2,3,NA,p\n1,2,3,4,q\n");
    FAIL("expected ParseError");
  } catch (const ParseError& error) {
    CHECK(error.row() == 2);
    CHECK(error.column() == 4);
    CHECK(error.kind() == ErrorKind::kParse);
  }
  try {
    (void)parse_csv_dataset("a,y\n1,p\n2\n");
    FAIL("expected ParseError");
  } catch (const ParseError& error) {
    CHECK(error.row() == 3);
  }
  CHECK_THROWS_AS(parse_csv_dataset(""), ParseError);
  CHECK_THROWS_AS(parse_csv_dataset("a,y\n"), ParseError);
  CHECK_THROWS_AS(parse_csv_dataset("a,y\n1,\"p\n"), ParseError);
}

TEST_CASE("file level errors have distinct kinds") {
  try {
    (void)load_csv_dataset("/nonexistent/data.csv");
    FAIL("expected FileNotFoundError");
  } catch (const FileNotFoundError& error) {
    CHECK(std::string(error.what()).find("dataset not found") != std::string::npos);
  }
  CsvOptions options;
  options.label_column = "target";
  CHECK_THROWS_AS(parse_csv_dataset("a,y\n1,p\n2,q\n", options), MissingColumnError);
  options.label_column = "7";
  CHECK_THROWS_AS(parse_csv_dataset("a,y\n1,p\n2,q\n", options), MissingColumnError);
  CHECK_THROWS_AS(parse_csv_dataset("a,y\n1,p\n2,p\n"), SingleClassError);
}

TEST_CASE("label column by name or index") {
  const std::string text = "y,a,b\nu,1,2\nv,3,4\n";
  CsvOptions by_name;
  by_name.label_column = "y";
  const auto named = parse_csv_dataset(text, by_name);
  CHECK(named.feature_names == std::vector<std::string>{"a", "b"});
  CHECK(named.X(1, 0) == 3.0);
  CsvOptions by_index;
  by_index.label_column = "0";
  CHECK(parse_csv_dataset(text, by_index).X == named.X);
  // A header literally named "0" wins over the index reading.
  CsvOptions zero;
  zero.label_column = "0";
  const auto literal = parse_csv_dataset("a,0\n1,x\n2,y\n", zero);
  CHECK(literal.dim() == 1);
  CHECK(literal.class_names == std::vector<std::string>{"x", "y"});
}

TEST_CASE("delimiters, quotes and line endings") {
  CsvOptions options;
  options.delimiter = ';';
  const auto data = parse_csv_dataset("\xEF\xBB\xBF\"a\";b;label\r\n1.5;-2e3;\"x;y\"\r\n\r\n0;1;z\r\n", options);
  CHECK(data.feature_names == std::vector<std::string>{"a", "b"});
  CHECK(data.X(0, 1) == -2000.0);
  CHECK(data.class_names == std::vector<std::string>{"x;y", "z"});
}

TEST_CASE("numeric labels are ordered numerically") {
  const auto data = parse_csv_dataset("a,y\n1,10\n2,9\n3,-1\n");
  CHECK(data.class_names == std::vector<std::string>{"-1", "9", "10"});
  CHECK(data.labels == std::vector<int>{2, 1, 0});
}

TEST_CASE("write and read back") {
  Rng rng(1);
  LabeledDataset data = test::two_blobs(rng, 5, 3, 1.0);
  data.X(0, 0) = 0.1;
  data.X(1, 1) = 1e-300;
  const fs::path path = temp_file("roundtrip.csv");
  write_csv_dataset(path, data);
  CsvOptions options;
  options.label_column = "label";
  const auto back = load_csv_dataset(path, options);
  CHECK(back.X == data.X);
  CHECK(back.labels == data.labels);
  CHECK(back.class_names == data.class_names);
  fs::remove(path);

  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("a 569 x 30 diagnostic-style table") {
  Rng rng(2);
  std::ostringstream os;
  for (int j = 0; j < 30; ++j) os << "f" << j << ',';
  os << "diagnosis\n";
  for (int i = 0; i < 569; ++i) {
    for (int j = 0; j < 30; ++j) os << (j == 0 ? "" : ",") << rng.uniform(0.0, 30.0);
    os << ',' << (i % 3 == 0 ? 'M' : 'B') << '\n';
  }
  const auto data = parse_csv_dataset(os.str());
  CHECK(data.size() == 569);
  CHECK(data.dim() == 30);
  CHECK(data.num_classes() == 2);
  CHECK(data.class_names == std::vector<std::string>{"B", "M"});
}

TEST_CASE("the bundled blobs file") {
  CsvOptions options;
  options.label_column = "class";
  const auto data = load_csv_dataset(fs::path(POTD_TEST_DATA_DIR) / "blobs.csv", options);
  CHECK(data.size() == 400);
  CHECK(data.dim() == 10);
  CHECK(data.class_counts() == std::vector<Index>{200, 200});
}

TEST_CASE("dataset validation and subsets") {
  LabeledDataset data = LabeledDataset::from_labels(Matrix::Identity(4, 2), {"b", "a", "b", "c"});
  CHECK(data.labels == std::vector<int>{1, 0, 1, 2});
  CHECK_NOTHROW(data.validate());
  const std::vector<Index> rows = {2, 0};
  const auto sub = data.subset(rows);
  CHECK(sub.labels == std::vector<int>{1, 1});
  CHECK(sub.class_names.size() == 3);
  CHECK_THROWS_AS(sub.validate(), InvalidInputError);
  CHECK_THROWS_AS(LabeledDataset::from_labels(Matrix::Zero(3, 1), {"a"}), InvalidInputError);

  LabeledDataset bad = data;
  bad.X(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(bad.validate(), InvalidInputError);
  bad = data;
  bad.sample_weights = Vector::Constant(4, -1.0);
  CHECK_THROWS_AS(bad.validate(), InvalidInputError);
  bad.sample_weights = Vector::Constant(3, 1.0);
  CHECK_THROWS_AS(bad.validate(), InvalidInputError);

  data.sample_weights = (Vector(4) << 1.0, 2.0, 3.0, 4.0).finished();
  const Vector w = data.class_weights(1);
  CHECK(w(0) == doctest::Approx(0.25));
  CHECK(w(1) == doctest::Approx(0.75));
}
