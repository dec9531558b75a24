#include "ncplane/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ncplane/error.hpp"

namespace ncplane::io {

std::string format_double(double v) {
  if (!std::isfinite(v)) return {};
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), out_(path), columns_(header.size()) {
  if (!out_) throw Error(ErrorKind::MissingInput, "cannot open " + path.string() + " for writing");
  std::vector<Field> h(header.begin(), header.end());
  row(h);
}

void CsvWriter::row(std::initializer_list<Field> fields) { row(std::vector<Field>(fields)); }

void CsvWriter::row(const std::vector<Field>& fields) {
  if (fields.size() != columns_) {
    throw Error(ErrorKind::DomainError, "CSV row width does not match the header");
  }
  if (!out_.is_open()) throw Error(ErrorKind::DomainError, "CSV writer already closed");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << fields[i].text();
  }
  out_ << '\n';
}

void CsvWriter::close() { out_.close(); }

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(ErrorKind::MissingInput, "CSV has no column '" + name + "'");
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MissingInput, "missing input " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::MissingInput, path.string() + " is empty");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (!line.empty()) t.rows.push_back(split(line));
  }
  return t;
}

void write_triplets(std::ostream& os, const fock::Operator::Matrix& m, double drop) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto z = m(i, j);
      if (std::abs(z) <= drop) continue;
      os << i << ' ' << j << ' ' << format_double(z.real()) << ' ' << format_double(z.imag())
         << '\n';
    }
  }
}

void write_triplets(const std::filesystem::path& path, const fock::Operator::Matrix& m,
                    double drop) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::MissingInput, "cannot open " + path.string() + " for writing");
  write_triplets(out, m, drop);
}

fock::Operator::Matrix read_triplets(std::istream& is, Eigen::Index rows, Eigen::Index cols) {
  fock::Operator::Matrix m = fock::Operator::Matrix::Zero(rows, cols);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    Eigen::Index i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(ss >> i >> j >> re >> im) || i < 0 || j < 0 || i >= rows || j >= cols) {
      throw Error(ErrorKind::InvalidConfig, "bad triplet line: " + line);
    }
    m(i, j) = {re, im};
  }
  return m;
}

}  // namespace ncplane::io
