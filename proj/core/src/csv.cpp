#include "potd/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "potd/errors.hpp"

namespace potd {

namespace {

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return std::string(text.substr(begin, end - begin));
}

// Splits one record. Double quotes group a field and "" inside quotes is a
// literal quote; nothing fancier (no embedded newlines).
std::vector<std::string> split_record(const std::string& line, char delimiter, std::size_t row) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == delimiter) {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  if (quoted) throw ParseError("unterminated quote", row, fields.size() + 1);
  fields.push_back(trim(field));
  return fields;
}

bool parse_double(const std::string& text, double& value) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end && std::isfinite(value);
}

bool is_index(const std::string& text, std::size_t& index) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), index);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::string quote_if_needed(const std::string& text, char delimiter) {
  if (text.find(delimiter) == std::string::npos && text.find('"') == std::string::npos) {
    return text;
  }
  std::string out = "\"";
  for (const char ch : text) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw NumericError("cannot format value");
  return std::string(buffer, ptr);
}

LabeledDataset parse_csv_dataset(const std::string& text, const CsvOptions& options,
                                 const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (row == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    header = split_record(line, options.delimiter, row);
    break;
  }
  if (header.empty() || (header.size() == 1 && header[0].empty())) {
    throw ParseError(source + ": missing header row", 1, 1);
  }
  if (header.size() < 2) {
    throw ParseError(source + ": need at least one feature column and a label column", 1, 2);
  }

  std::size_t label_index = header.size() - 1;
  if (!options.label_column.empty()) {
    const auto it = std::find(header.begin(), header.end(), options.label_column);
    std::size_t index = 0;
    if (it != header.end()) {
      label_index = static_cast<std::size_t>(it - header.begin());
    } else if (is_index(options.label_column, index) && index < header.size()) {
      label_index = index;
    } else {
      throw MissingColumnError(source + ": label column '" + options.label_column +
                               "' not found in header");
    }
  }

  const std::size_t p = header.size() - 1;
  std::vector<double> values;
  std::vector<std::string> labels;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_record(line, options.delimiter, row);
    if (fields.size() != header.size()) {
      std::ostringstream os;
      os << source << ": row " << row << " has " << fields.size() << " fields, header has "
         << header.size();
      throw ParseError(os.str(), row, std::min(fields.size(), header.size()) + 1);
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == label_index) {
        if (fields[c].empty()) throw ParseError(source + ": empty label", row, c + 1);
        labels.push_back(fields[c]);
        continue;
      }
      double value = 0.0;
      if (!parse_double(fields[c], value)) {
        std::ostringstream os;
        os << source << ": non-numeric value '" << fields[c] << "' at row " << row
           << ", column " << c + 1;
        throw ParseError(os.str(), row, c + 1);
      }
      values.push_back(value);
    }
  }
  if (labels.empty()) throw ParseError(source + ": no data rows", 2, 1);

  const Index n = static_cast<Index>(labels.size());
  Matrix X(n, static_cast<Index>(p));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < static_cast<Index>(p); ++j) {
      X(i, j) = values[static_cast<std::size_t>(i) * p + static_cast<std::size_t>(j)];
    }
  }
  const std::set<std::string> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) {
    throw SingleClassError(source + ": label column '" + header[label_index] +
                           "' has a single class");
  }

  LabeledDataset data = LabeledDataset::from_labels(std::move(X), labels);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_index) data.feature_names.push_back(header[c]);
  }
  return data;
}

LabeledDataset load_csv_dataset(const std::filesystem::path& path, const CsvOptions& options) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw FileNotFoundError("dataset not found: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError("dataset not found: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv_dataset(buffer.str(), options, path.string());
}

void write_csv_dataset(const std::filesystem::path& path, const LabeledDataset& data,
                       char delimiter) {
  std::ofstream out = open_output(path);
  for (Index j = 0; j < data.dim(); ++j) {
    const std::string name = static_cast<std::size_t>(j) < data.feature_names.size()
                                 ? data.feature_names[static_cast<std::size_t>(j)]
                                 : "x" + std::to_string(j + 1);
    out << quote_if_needed(name, delimiter) << delimiter;
  }
  out << "label\n";
  for (Index i = 0; i < data.size(); ++i) {
    for (Index j = 0; j < data.dim(); ++j) out << format_double(data.X(i, j)) << delimiter;
    out << quote_if_needed(data.class_names.at(static_cast<std::size_t>(data.labels[i])), delimiter)
        << '\n';
  }
  if (!out) throw InvalidInputError("failed writing '" + path.string() + "'");
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& values,
                      const std::vector<std::string>& header, char delimiter) {
  std::ofstream out = open_output(path);
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j > 0) out << delimiter;
    out << quote_if_needed(header[j], delimiter);
  }
  if (!header.empty()) out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j > 0) out << delimiter;
      out << format_double(values(i, j));
    }
    out << '\n';
  }
  if (!out) throw InvalidInputError("failed writing '" + path.string() + "'");
}

}  // namespace potd
