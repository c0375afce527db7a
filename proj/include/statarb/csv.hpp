#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "statarb/common.hpp"

namespace statarb {

// Minimal CSV handling for the pipeline's long-format inputs and outputs.
// No quoting support: tickers, dates and field names never contain commas.
// Lines starting with '#' are metadata/comments and are skipped on read.

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
  int require_column(const std::string& name, const std::string& context) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text, const std::string& context);

// Parses a numeric cell; empty or unparseable cells come back as nullopt.
std::optional<double> parse_cell(const std::string& cell);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void comment(const std::string& text);
  void row(const std::vector<std::string>& cells);

 private:
  void* stream_;  // FILE*
  std::string path_;
};

std::string format_double(double v);  // deterministic %.12g, "na" for NaN

}  // namespace statarb
