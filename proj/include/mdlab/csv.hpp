#pragma once

#include <string>
#include <vector>

namespace mdlab {

// Quotes a field when it contains a comma, quote, CR or LF; quotes double.
std::string csv_field(const std::string& s);
// Shortest round-trip decimal; "nan", "inf" and "-inf" for non-finite values.
std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  // Throws InvalidArgument when the row width differs from the header.
  void add(std::vector<std::string> row);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace mdlab
