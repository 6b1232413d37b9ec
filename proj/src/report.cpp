#include "frheat/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace frheat {

std::string format_g(double x, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
  return buf;
}

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != header.size())
    throw std::invalid_argument("Table: row width does not match header");
  rows.push_back(std::move(cells));
}

std::string Table::to_csv() const {
  std::ostringstream out;
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << "\n";
  }
  return out.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
  return buf;
}

std::string write_file(const std::string& dir, const std::string& name,
                       const std::string& content) {
  std::filesystem::create_directories(dir);
  std::filesystem::path p = std::filesystem::path(dir) / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << content;
  return p.string();
}

void write_manifest(const std::string& dir, const std::vector<std::string>& names) {
  Table t;
  t.header = {"file", "bytes", "fnv1a64"};
  for (const auto& name : names) {
    std::filesystem::path p = std::filesystem::path(dir) / name;
    std::ifstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("manifest: missing output " + p.string());
    std::stringstream ss;
    ss << f.rdbuf();
    std::string bytes = ss.str();
    t.add_row({name, std::to_string(bytes.size()), hash_hex(fnv1a64(bytes))});
  }
  write_file(dir, "manifest.csv", t.to_csv());
}

}  // namespace frheat
