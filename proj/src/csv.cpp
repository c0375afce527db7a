#include "statarb/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace statarb {

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int CsvTable::require_column(const std::string& name, const std::string& context) const {
  int c = column(name);
  if (c < 0) throw SchemaError(context + ": required column '" + name + "' not found");
  return c;
}

static std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

CsvTable parse_csv(const std::string& text, const std::string& context) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw InputError(context + ": empty file (header row required)");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path);
}

std::optional<double> parse_cell(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  const char* begin = cell.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin) return std::nullopt;
  while (*end == ' ' || *end == '\t') ++end;
  if (*end != '\0') return std::nullopt;
  if (std::isnan(v)) return std::nullopt;
  return v;
}

CsvWriter::CsvWriter(const std::string& path) : path_(path) {
  stream_ = std::fopen(path.c_str(), "wb");
  if (!stream_) throw InputError("cannot open file for writing: " + path);
}

CsvWriter::~CsvWriter() {
  if (stream_) std::fclose(static_cast<FILE*>(stream_));
}

void CsvWriter::comment(const std::string& text) {
  std::fprintf(static_cast<FILE*>(stream_), "# %s\n", text.c_str());
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  FILE* f = static_cast<FILE*>(stream_);
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) std::fputc(',', f);
    std::fputs(cells[i].c_str(), f);
  }
  std::fputc('\n', f);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "na";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

}  // namespace statarb
