#pragma once

#include <string>
#include <vector>

namespace acrnn {

// Header row plus numeric rows, comma-separated, LF endings. Doubles are
// written as shortest round-trip decimals, so read(write(t)) == t exactly.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  bool operator==(const CsvTable&) const = default;
};

std::string write_csv(const CsvTable& table);
CsvTable read_csv(const std::string& text);

void write_csv_file(const CsvTable& table, const std::string& path);
CsvTable read_csv_file(const std::string& path);

}  // namespace acrnn
