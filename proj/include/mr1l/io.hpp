#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mr1l {

// Comment lines, a header row and pre-formatted data rows. Comments carry
// run metadata; the body (header + rows) is the deterministic content that
// output-equality tests hash.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Canonical body serialization: header line then row lines, comma separated,
// '\n' terminated. Excludes comments.
std::string csv_body(const CsvTable& t);

// Full file: '#'-prefixed comment lines, then the body. The optional
// timestamp comment is the only non-deterministic element and defaults off,
// so identical runs produce identical bytes.
void write_csv(std::ostream& os, const CsvTable& t, bool timestamp = false);

// FNV-1a, for content hashes of canonical bodies.
std::uint64_t fnv1a64(const std::string& s);

}  // namespace mr1l
