#include "ucblab/output.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ucblab {

std::string format_double(double value) {
  if (!std::isfinite(value)) throw std::domain_error("refusing to emit a non-finite number");
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) text_ += ',';
    text_ += columns[i];
  }
  text_ += '\n';
}

void CsvTable::add(std::vector<Cell> row) {
  if (row.size() != columns_) throw std::logic_error("CSV row width does not match header");
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) text_ += ',';
    text_ += row[i].text();
  }
  text_ += '\n';
  ++rows_;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory '" + path.parent_path().string() +
                    "': " + ec.message());
    }
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename to '" + path.string() + "': " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

OutputSet::OutputSet(std::filesystem::path dir, std::string command)
    : dir_(std::move(dir)), command_(std::move(command)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw IoError("cannot create output directory '" + dir_.string() + "'" +
                  (ec ? ": " + ec.message() : ""));
  }
}

void OutputSet::write(const std::string& name, const std::string& content) {
  write_file_atomic(dir_ / name, content);
  digests_[name] = "sha256:" + sha256_hex(content);
}

void OutputSet::finish(const std::map<std::string, std::string>& params, std::uint64_t seed) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

  nlohmann::ordered_json manifest;
  manifest["format_version"] = kFormatVersion;
  manifest["command"] = command_;
  manifest["seed"] = seed;
  manifest["params"] = params;
  manifest["digests"] = digests_;
  manifest["created_at"] = stamp;
  write_file_atomic(dir_ / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace ucblab
