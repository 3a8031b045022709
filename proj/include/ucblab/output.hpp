#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace ucblab {

/// File-system failure; maps to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form. Non-finite values are a logic error and
/// throw std::domain_error: no CSV cell may hold NaN or Inf.
std::string format_double(double value);

/// One CSV cell.
class Cell {
 public:
  template <class T>
    requires std::is_integral_v<T>
  Cell(T value) : text_(std::to_string(value)) {}
  Cell(double value) : text_(format_double(value)) {}
  Cell(std::string text) : text_(std::move(text)) {}
  Cell(const char* text) : text_(text) {}

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

/// In-memory CSV with a fixed header; rows must match the column count.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add(std::vector<Cell> row);
  std::size_t rows() const { return rows_; }
  std::string str() const { return text_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

/// Writes `content` to `path` via a temporary file and rename, creating
/// parent directories. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Collects the files of one command invocation and writes manifest.json
/// last, listing every file with its digest.
class OutputSet {
 public:
  static constexpr int kFormatVersion = 1;

  OutputSet(std::filesystem::path dir, std::string command);

  const std::filesystem::path& dir() const { return dir_; }

  /// Writes dir/name and records its digest.
  void write(const std::string& name, const std::string& content);
  void write(const std::string& name, const CsvTable& table) { write(name, table.str()); }

  /// Writes manifest.json with format_version, command, params, seed,
  /// digests and a UTC timestamp.
  void finish(const std::map<std::string, std::string>& params, std::uint64_t seed);

  const std::map<std::string, std::string>& digests() const { return digests_; }

 private:
  std::filesystem::path dir_;
  std::string command_;
  std::map<std::string, std::string> digests_;
};

}  // namespace ucblab
