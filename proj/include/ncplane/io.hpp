#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ncplane/fock.hpp"

namespace ncplane::io {

// %.17g; NaN and infinities are written as empty fields.
std::string format_double(double v);

// One CSV cell.
class Field {
 public:
  Field(double v) : text_(format_double(v)) {}
  Field(int v) : text_(std::to_string(v)) {}
  Field(long long v) : text_(std::to_string(v)) {}
  Field(std::string v) : text_(std::move(v)) {}
  Field(const char* v) : text_(v) {}
  Field(std::optional<double> v) : text_(v ? format_double(*v) : std::string{}) {}

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

// Header row first, '\n' line endings. Throws Error(MissingInput) when the
// file cannot be opened.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  void row(std::initializer_list<Field> fields);
  void row(const std::vector<Field>& fields);
  const std::filesystem::path& path() const { return path_; }
  // Flushes and closes; further rows are an error.
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

// Reads a CSV written by CsvWriter: header names and the rows as strings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a column; throws MissingInput if absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

// Triplet dump: one `row col re im` line per entry with |entry| > drop, rows
// and columns 0-based, ordered column-major.
void write_triplets(std::ostream& os, const fock::Operator::Matrix& m, double drop = 0.0);
void write_triplets(const std::filesystem::path& path, const fock::Operator::Matrix& m,
                    double drop = 0.0);

fock::Operator::Matrix read_triplets(std::istream& is, Eigen::Index rows, Eigen::Index cols);

}  // namespace ncplane::io
