#ifndef FRHEAT_REPORT_HPP
#define FRHEAT_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace frheat {

/// %.*g rendering with deterministic, locale-independent output.
std::string format_g(double x, int precision = 17);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
  std::string to_csv() const;
};

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

/// Writes content to dir/name, creating dir if needed; returns the full path.
std::string write_file(const std::string& dir, const std::string& name,
                       const std::string& content);

/// Writes manifest.csv (file, bytes, fnv1a64) covering the named outputs.
void write_manifest(const std::string& dir, const std::vector<std::string>& names);

}  // namespace frheat

#endif
