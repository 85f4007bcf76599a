#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace sofic {

/// Append-only byte sink for canonical encodings (LEB128 varints, zigzag for
/// signed values).
class ByteWriter {
 public:
  void put_byte(std::uint8_t b) { out_.push_back(static_cast<char>(b)); }
  void put_varint(std::uint64_t v);
  void put_signed(std::int64_t v);
  void put_bytes(std::string_view bytes);
  /// Length-prefixed blob.
  void put_blob(std::string_view bytes);

  const std::string& str() const& { return out_; }
  std::string str() && { return std::move(out_); }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view in) : in_(in) {}

  std::uint8_t get_byte();
  std::uint8_t peek_byte() const;
  std::uint64_t get_varint();
  std::int64_t get_signed();
  std::string get_blob();
  bool at_end() const { return pos_ == in_.size(); }
  std::size_t position() const { return pos_; }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

std::string to_hex(std::string_view bytes);
std::string from_hex(std::string_view hex);

}  // namespace sofic
