#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "potd/dataset.hpp"
#include "potd/types.hpp"

namespace potd {

struct CsvOptions {
  // Header name of the label column. When no header cell matches and the
  // text is a non-negative integer it is read as a 0-based column index.
  // Empty selects the last column.
  std::string label_column;
  char delimiter = ',';
};

/// Reads a header row followed by numeric feature cells and one label
/// column. Errors, all with distinct kinds:
///   FileNotFoundError   path missing ("dataset not found: ...")
///   ParseError          non-numeric cell or ragged row (1-based row/col,
///                       header is row 1)
///   MissingColumnError  label column not in the header
///   SingleClassError    fewer than two distinct labels
LabeledDataset load_csv_dataset(const std::filesystem::path& path, const CsvOptions& options = {});

/// Same format from an in-memory string; `source` names it in messages.
LabeledDataset parse_csv_dataset(const std::string& text, const CsvOptions& options = {},
                                 const std::string& source = "<memory>");

/// Features followed by a "label" column holding the class names. Values
/// are written with round-trip precision.
void write_csv_dataset(const std::filesystem::path& path, const LabeledDataset& data,
                       char delimiter = ',');

/// Plain numeric table with an optional header.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& values,
                      const std::vector<std::string>& header, char delimiter = ',');

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace potd
