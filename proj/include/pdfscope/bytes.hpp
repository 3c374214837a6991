#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pdfscope {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Raised when input data violates an operation's contract (empty stream,
/// malformed report, unreadable file). The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for caller mistakes: bad arguments, mismatched dimensions.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raw file contents plus where they came from.
struct ByteStream {
  std::string path;
  Bytes data;

  ByteView view() const { return data; }
  std::size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }
};

Bytes to_bytes(std::string_view text);
std::string to_string(ByteView bytes);

/// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(ByteView bytes);
std::string sha256_hex(std::string_view text);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, ByteView bytes);
void write_file(const std::filesystem::path& path, std::string_view text);

ByteStream load_stream(const std::filesystem::path& path);

}  // namespace pdfscope
