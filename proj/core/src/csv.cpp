#include "kmace/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "kmace/error.hpp"

namespace kmace {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& raw, const std::string& path,
                    std::size_t line_no) {
  const std::string cell = trim(raw);
  double value = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    fail(errc::io_error, path + ":" + std::to_string(line_no) +
                             ": cannot parse number '" + cell + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open '" + path + "' for reading");

  std::string line;
  if (!std::getline(in, line)) {
    fail(errc::io_error, path + ":1: missing header row");
  }
  const auto header = split_csv_line(line);
  if (header.empty()) fail(errc::io_error, path + ":1: empty header");
  const bool has_label = trim(header.back()) == "label";
  const std::size_t d = header.size() - (has_label ? 1 : 0);
  if (d == 0) fail(errc::io_error, path + ":1: no feature columns");

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      fail(errc::io_error, path + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " columns, got " +
                               std::to_string(cells.size()));
    }
    for (std::size_t j = 0; j < d; ++j) {
      values.push_back(parse_number(cells[j], path, line_no));
    }
    if (has_label) {
      const double l = parse_number(cells[d], path, line_no);
      labels.push_back(static_cast<int>(l));
    }
    ++rows;
  }
  if (rows == 0) fail(errc::empty_data, path + ": no data rows");

  Matrix samples(rows, d);
  samples.storage() = std::move(values);
  std::optional<std::vector<int>> opt_labels;
  if (has_label) opt_labels = std::move(labels);
  return validate_dataset(std::move(samples), std::move(opt_labels), path);
}

void save_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  std::ostringstream buf;
  for (std::size_t j = 0; j < data.dim(); ++j) {
    if (j) buf << ',';
    buf << 'f' << j;
  }
  if (data.labels) buf << ",label";
  buf << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto row = data.samples.row(i);
    for (std::size_t j = 0; j < data.dim(); ++j) {
      if (j) buf << ',';
      buf << format_double(row[j]);
    }
    if (data.labels) buf << ',' << (*data.labels)[i];
    buf << '\n';
  }
  out << buf.str();
  if (!out) fail(errc::io_error, "failed writing '" + path + "'");
}

}  // namespace kmace
