#pragma once

// CSV data tables and small file helpers.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "netcca/linalg.hpp"

namespace netcca {

// Numeric table: first row holds the feature names, first column the sample
// ids, every other cell a finite number.
struct DataTable {
  std::vector<std::string> sampleIds;
  std::vector<std::string> featureNames;
  Matrix values;
};

DataTable parseDataCsv(std::string_view text, const std::string& source = "<memory>");
DataTable readDataCsv(const std::filesystem::path& path);
std::string dataCsv(const DataTable& table);

// Shortest round-tripping form is not needed; 17 significant digits always
// reproduce the double exactly.
std::string formatNumber(double value);
double parseNumber(std::string_view text);

// Splits one CSV record on commas (no quoting support); trims a trailing \r.
std::vector<std::string> splitCsvLine(std::string_view line);

std::string readFile(const std::filesystem::path& path);
// Writes to a sibling temporary file, then renames over the target.
void writeFileAtomic(const std::filesystem::path& path, std::string_view content);

}  // namespace netcca
