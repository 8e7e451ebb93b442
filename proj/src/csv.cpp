#include "orlhom/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace orlhom {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : ncols_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ += ',';
    out_ += columns[i];
  }
  out_ += '\n';
}

void CsvWriter::sep() {
  if (in_row_) out_ += ',';
  ++in_row_;
}

CsvWriter& CsvWriter::cell(double v) {
  sep();
  out_ += format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long v) {
  sep();
  out_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& v) {
  sep();
  out_ += v;
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != ncols_) {
    throw std::logic_error("CsvWriter: row has " + std::to_string(in_row_) + " cells, expected " +
                           std::to_string(ncols_));
  }
  out_ += '\n';
  in_row_ = 0;
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("CsvWriter: cannot write " + path);
  out << out_;
}

}  // namespace orlhom
