#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace natmodes {

/// Shortest form is not used: every value carries 17 significant digits so
/// that reruns are byte-identical and values round-trip exactly.
std::string format_number(double value);
std::string format_number(const std::optional<double>& value);  // empty when unset

/// Provenance written as leading '#' lines of every CSV.
struct OutputMeta {
  std::string tool_version;
  std::uint64_t config_fingerprint = 0;
  std::uint64_t seed = 0;
  std::string command;
};

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(std::vector<std::string> cells);
  std::size_t rows() const noexcept { return rows_.size(); }
  std::string render(const OutputMeta& meta) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to a temporary file in the target directory and renames it over
/// the destination, so readers never see a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Version compiled into the library.
const char* tool_version() noexcept;

}  // namespace natmodes
