#include "levydev/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "levydev/error.hpp"

namespace levydev {

std::string format_double(double v) { return fmt::format("{}", v); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& config_hash,
                     const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  buffer_ = "# config_hash=" + config_hash + "\n";
  for (std::size_t i = 0; i < header.size(); ++i) buffer_ += (i ? "," : "") + header[i];
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::logic_error("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_double(values[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::close() { write_text(path_, buffer_); }

std::vector<double> read_increment_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open increments file {}", path.string()));
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "increment") {
        throw ConfigError(fmt::format("{}: expected header 'increment', got '{}'", path.string(), line));
      }
      header = true;
      continue;
    }
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(line.c_str(), &end);
    // ERANGE on underflow still yields the (subnormal) value; only overflow is rejected.
    if (end == line.c_str() || *end != '\0' || !std::isfinite(v) || (errno == ERANGE && std::abs(v) > 1.0)) {
      throw ConfigError(fmt::format("{}:{}: not a finite number: '{}'", path.string(), lineno, line));
    }
    values.push_back(v);
  }
  if (!header) throw ConfigError(fmt::format("{}: missing header 'increment'", path.string()));
  if (values.empty()) throw ConfigError(fmt::format("{}: no increments", path.string()));
  return values;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw ConfigError(fmt::format("write failed for {}", path.string()));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace levydev
