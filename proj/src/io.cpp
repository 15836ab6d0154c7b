#include "mr1l/io.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <ostream>

#include "mr1l/errors.hpp"

namespace mr1l {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) throw internal_error("double formatting failed");
  return std::string(buf, res.ptr);
}

std::string csv_body(const CsvTable& t) {
  std::string out;
  auto append_line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append_line(t.header);
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size())
      throw internal_error("csv row width differs from the header");
    append_line(row);
  }
  return out;
}

void write_csv(std::ostream& os, const CsvTable& t, bool timestamp) {
  for (const std::string& c : t.comments) os << "# " << c << "\n";
  if (timestamp) {
    std::time_t now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    os << "# generated " << buf << "\n";
  }
  os << csv_body(t);
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (char ch : s) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace mr1l
