#include "stcausal/csv.hpp"

#include <fstream>
#include <sstream>

#include "stcausal/error.hpp"

namespace stcausal {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

CsvReader::CsvReader(const std::string& path, const std::string& expect_header)
    : path_(path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  data_ = ss.str();

  std::size_t eol = data_.find('\n');
  std::string header = eol == std::string::npos ? data_ : data_.substr(0, eol);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header != expect_header)
    throw Error(Errc::MalformedRow,
                path + ": expected header '" + expect_header + "', got '" + header + "'");
  pos_ = eol == std::string::npos ? data_.size() : eol + 1;
  line_ = 1;
  n_fields_ = split_fields(expect_header).size();
}

bool CsvReader::next(CsvRow& row) {
  while (pos_ < data_.size()) {
    std::size_t eol = data_.find('\n', pos_);
    std::string line = data_.substr(pos_, eol == std::string::npos ? std::string::npos
                                                                   : eol - pos_);
    pos_ = eol == std::string::npos ? data_.size() : eol + 1;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;  // skip blank lines
    row.line = line_;
    row.fields = split_fields(line);
    if (row.fields.size() != n_fields_)
      throw Error(Errc::MalformedRow, path_ + ":" + std::to_string(line_) +
                                          ": expected " + std::to_string(n_fields_) +
                                          " fields, got " + std::to_string(row.fields.size()));
    return true;
  }
  return false;
}

}  // namespace stcausal
