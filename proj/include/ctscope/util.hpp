#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ctscope::util {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Reads a list file: one entry per line, '#' starts a comment, blank lines skipped,
/// surrounding whitespace trimmed.
std::vector<std::string> read_list_file(const std::filesystem::path& path);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Shortest decimal form that round-trips the double ("%.17g" trimmed).
std::string format_double(double v);

/// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_escape(std::string_view field);
/// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> csv_split(std::string_view line);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

// Little-endian binary helpers shared by the model and vector file formats.
void put_u16(std::string& out, std::uint16_t v);
void put_u32(std::string& out, std::uint32_t v);
void put_u64(std::string& out, std::uint64_t v);
void put_f32(std::string& out, float v);
void put_f64(std::string& out, double v);

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  float f32();
  double f64();
  std::string_view bytes(std::size_t n);
  bool at_end() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const;
  std::string_view data_;
  std::size_t pos_ = 0;
};

/// Parses a base-10 integer; nullopt on any trailing garbage or overflow.
std::optional<std::int64_t> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

}  // namespace ctscope::util
