#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cflow {

// Shortest decimal representation that parses back to the same double
// (std::to_chars shortest form). nan/inf spelled out.
std::string format_double(double v);

// FNV-1a 64-bit hash, hex-encoded; used to stamp outputs with their config.
std::uint64_t fnv1a64(std::string_view s);
std::string fnv1a64_hex(std::string_view s);

// Write content to path atomically: temp file in the same directory, fsync'd
// stream close, then rename over the target.
void atomic_write(const std::string& path, const std::string& content);

// CSV assembly: header row, then a comment row carrying the config hash, then
// data rows. All doubles go through format_double so outputs are byte-stable.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header, std::string config_hash);
  void row(const std::vector<std::string>& cells);
  std::string cell(double v) const { return format_double(v); }
  const std::string& str() const { return out_; }

 private:
  std::string out_;
  std::size_t width_;
};

}  // namespace cflow
