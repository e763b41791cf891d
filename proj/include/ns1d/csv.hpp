#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ns1d {

/// Fixed-precision text for a CSV cell; non-finite values become "undefined".
std::string csv_number(double v);
std::string csv_number(const std::optional<double>& v, const char* missing = "unavailable");

/// Row-oriented table with a mandatory header. write() goes through a temporary file and a
/// rename so a failed write never leaves a truncated table behind.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

  std::string str() const;
  /// Throws IoError.
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Creates the directory (and parents). Throws IoError.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace ns1d
