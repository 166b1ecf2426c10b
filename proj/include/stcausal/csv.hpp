#pragma once

#include <string>
#include <vector>

namespace stcausal {

// Minimal comma-separated reader: UTF-8, '\n' line endings (trailing '\r'
// tolerated), no quoting. Field values are kept verbatim.
struct CsvRow {
  std::size_t line = 0;  // 1-based line number in the file
  std::vector<std::string> fields;
};

class CsvReader {
 public:
  // Throws Errc::Io when the file cannot be opened, Errc::MalformedRow when
  // the header does not match `expect_header` (comma-joined names).
  CsvReader(const std::string& path, const std::string& expect_header);

  // False at end of file. Throws Errc::MalformedRow on wrong field count.
  bool next(CsvRow& row);

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string data_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
  std::size_t n_fields_ = 0;
};

std::vector<std::string> split_fields(const std::string& line);

}  // namespace stcausal
