#include "acrnn/csv.hpp"

#include <fstream>
#include <sstream>

#include "acrnn/errors.hpp"
#include "acrnn/text.hpp"

namespace acrnn {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::string write_csv(const CsvTable& table) {
  if (table.header.empty()) throw CsvError("csv: header row is required");
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    const std::string& cell = table.header[i];
    if (cell.find_first_of(",\n\r\"") != std::string::npos)
      throw CsvError("csv: header cell '" + cell + "' contains a delimiter");
    if (i) out += ',';
    out += cell;
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw CsvError("csv: row has " + std::to_string(row.size()) + " cells, header has " +
                     std::to_string(table.header.size()));
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

CsvTable read_csv(const std::string& text) {
  CsvTable table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (line_no == 1) {
      for (auto c : cells) table.header.emplace_back(c);
      continue;
    }
    if (cells.size() != table.header.size())
      throw CsvError("csv line " + std::to_string(line_no) + ": expected " +
                     std::to_string(table.header.size()) + " cells, got " +
                     std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) {
      auto v = parse_double(c);
      if (!v)
        throw CsvError("csv line " + std::to_string(line_no) + ": bad number '" + std::string(c) +
                       "'");
      row.push_back(*v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw CsvError("csv: missing header row");
  return table;
}

void write_csv_file(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << write_csv(table);
  if (!out) throw IoError("failed writing " + path);
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_csv(buf.str());
}

}  // namespace acrnn
