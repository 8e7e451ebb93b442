#pragma once

#include <string>
#include <vector>

namespace orlhom {

// Deterministic CSV writer: fixed %.12g formatting so identical runs emit
// byte-identical files.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);

  CsvWriter& cell(double v);
  CsvWriter& cell(long v);
  CsvWriter& cell(const std::string& v);
  void end_row();

  const std::string& str() const { return out_; }
  void write(const std::string& path) const;

 private:
  void sep();
  std::size_t ncols_ = 0;
  std::size_t in_row_ = 0;
  std::string out_;
};

std::string format_double(double v);

}  // namespace orlhom
