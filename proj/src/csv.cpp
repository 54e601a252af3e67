#include "natmodes/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <unistd.h>

#include "natmodes/config.hpp"
#include "natmodes/error.hpp"

namespace natmodes {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_number(const std::optional<double>& value) { return value ? format_number(*value) : std::string(); }

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) {
    throw Error(ErrorKind::InvalidArgument, "csv row has " + std::to_string(cells.size()) + " cells, expected " +
                                                std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(cells));
}

std::string CsvTable::render(const OutputMeta& meta) const {
  std::string out;
  out += "# tool: natmodes " + meta.tool_version + "\n";
  out += "# command: " + meta.command + "\n";
  out += "# config_fingerprint: " + hex64(meta.config_fingerprint) + "\n";
  out += "# seed: " + std::to_string(meta.seed) + "\n";
  const auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::InvalidArgument, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::InvalidArgument, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

const char* tool_version() noexcept { return NATMODES_VERSION; }

}  // namespace natmodes
