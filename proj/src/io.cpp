#include "netcca/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "netcca/error.hpp"

namespace netcca {

std::string formatNumber(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

double parseNumber(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kParseError, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> splitCsvLine(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

DataTable parseDataCsv(std::string_view text, const std::string& source) {
  DataTable table;
  std::vector<std::vector<double>> rows;
  std::size_t lineNumber = 0;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineNumber;
    if (line.empty() || line == "\r") continue;
    auto cells = splitCsvLine(line);
    if (header) {
      if (cells.size() < 2) {
        throw Error(ErrorCode::kParseError, source + ": header needs an id column and features",
                    lineNumber);
      }
      table.featureNames.assign(cells.begin() + 1, cells.end());
      header = false;
      continue;
    }
    if (cells.size() != table.featureNames.size() + 1) {
      throw Error(ErrorCode::kParseError,
                  source + ":" + std::to_string(lineNumber) + ": expected " +
                      std::to_string(table.featureNames.size() + 1) + " cells, found " +
                      std::to_string(cells.size()),
                  lineNumber);
    }
    std::vector<double> row;
    row.reserve(cells.size() - 1);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c].empty() || cells[c] == "NA" || cells[c] == "NaN") {
        throw Error(ErrorCode::kParseError,
                    source + ":" + std::to_string(lineNumber) + ": missing value in column '" +
                        table.featureNames[c - 1] + "'",
                    lineNumber);
      }
      double value = 0.0;
      try {
        value = parseNumber(cells[c]);
      } catch (const Error&) {
        throw Error(ErrorCode::kParseError,
                    source + ":" + std::to_string(lineNumber) + ": not a number: '" + cells[c] +
                        "'",
                    lineNumber);
      }
      if (!std::isfinite(value)) {
        throw Error(ErrorCode::kNonFinite,
                    source + ":" + std::to_string(lineNumber) + ": non-finite value", lineNumber);
      }
      row.push_back(value);
    }
    table.sampleIds.push_back(cells[0]);
    rows.push_back(std::move(row));
  }
  if (header) throw Error(ErrorCode::kParseError, source + ": empty file");
  table.values.resize(static_cast<Index>(rows.size()),
                      static_cast<Index>(table.featureNames.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      table.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return table;
}

DataTable readDataCsv(const std::filesystem::path& path) {
  return parseDataCsv(readFile(path), path.string());
}

std::string dataCsv(const DataTable& table) {
  std::string out = "id";
  for (const auto& name : table.featureNames) out += "," + name;
  out += "\n";
  for (Index i = 0; i < table.values.rows(); ++i) {
    out += i < static_cast<Index>(table.sampleIds.size())
               ? table.sampleIds[static_cast<std::size_t>(i)]
               : "s" + std::to_string(i + 1);
    for (Index j = 0; j < table.values.cols(); ++j) out += "," + formatNumber(table.values(i, j));
    out += "\n";
  }
  return out;
}

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void writeFileAtomic(const std::filesystem::path& path, std::string_view content) {
  const auto temp = path.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + temp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + temp);
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot rename " + temp + ": " + ec.message());
}

}  // namespace netcca
