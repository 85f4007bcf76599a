#include "sofic/bytes.hpp"


#include "sofic/error.hpp"
#include "sofic/rational.hpp"

namespace sofic {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CarrierMismatch: return "carrier mismatch";
    case ErrorCode::FamilyMismatch: return "family mismatch";
    case ErrorCode::InvalidPermutation: return "invalid permutation";
    case ErrorCode::InconsistentPartial: return "inconsistent partial injection";
    case ErrorCode::Decode: return "decode failure";
    case ErrorCode::IncompleteWindow: return "incomplete window";
    case ErrorCode::MalformedWitness: return "malformed witness";
    case ErrorCode::Membership: return "subgroup membership failure";
    case ErrorCode::CapOverflow: return "carrier overflow";
    case ErrorCode::Contract: return "contract violation";
    case ErrorCode::Parse: return "parse error";
  }
  return "error";
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string to_decimal(const Rational& r, int digits) {
  std::int64_t num = r.numerator();
  const std::int64_t den = r.denominator();
  std::string out;
  if (num < 0) {
    out.push_back('-');
    num = -num;
  }
  out += std::to_string(num / den);
  std::int64_t rem = num % den;
  if (digits > 0) {
    out.push_back('.');
    for (int i = 0; i < digits; ++i) {
      rem *= 10;
      out.push_back(static_cast<char>('0' + rem / den));
      rem %= den;
    }
  }
  return out;
}

Rational parse_rational(const std::string& text) {
  auto parse_int = [&](const std::string& s) -> std::int64_t {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      fail(ErrorCode::Parse, "not a rational: '" + text + "'");
    }
    if (used != s.size()) fail(ErrorCode::Parse, "not a rational: '" + text + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text));
  const std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) fail(ErrorCode::Parse, "zero denominator in '" + text + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

void ByteWriter::put_varint(std::uint64_t v) {
  while (v >= 0x80) {
    put_byte(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  put_byte(static_cast<std::uint8_t>(v));
}

void ByteWriter::put_signed(std::int64_t v) {
  put_varint((static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63));
}

void ByteWriter::put_bytes(std::string_view bytes) { out_.append(bytes); }

void ByteWriter::put_blob(std::string_view bytes) {
  put_varint(bytes.size());
  put_bytes(bytes);
}

std::uint8_t ByteReader::get_byte() {
  if (pos_ >= in_.size()) fail(ErrorCode::Decode, "unexpected end of encoding");
  return static_cast<std::uint8_t>(in_[pos_++]);
}

std::uint8_t ByteReader::peek_byte() const {
  if (pos_ >= in_.size()) fail(ErrorCode::Decode, "unexpected end of encoding");
  return static_cast<std::uint8_t>(in_[pos_]);
}

std::uint64_t ByteReader::get_varint() {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    const std::uint8_t b = get_byte();
    v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
    if ((b & 0x80) == 0) return v;
  }
  fail(ErrorCode::Decode, "varint too long");
}

std::int64_t ByteReader::get_signed() {
  const std::uint64_t z = get_varint();
  return static_cast<std::int64_t>(z >> 1) ^ -static_cast<std::int64_t>(z & 1);
}

std::string ByteReader::get_blob() {
  const std::uint64_t n = get_varint();
  if (n > in_.size() - pos_) fail(ErrorCode::Decode, "blob length exceeds encoding");
  std::string out(in_.substr(pos_, n));
  pos_ += n;
  return out;
}

std::string to_hex(std::string_view bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 0xf]);
  }
  return out;
}

std::string from_hex(std::string_view hex) {
  auto nibble = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    fail(ErrorCode::Decode, "bad hex digit in '" + std::string(hex) + "'");
  };
  if (hex.size() % 2 != 0) fail(ErrorCode::Decode, "odd-length hex string");
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<char>(nibble(hex[i]) << 4 | nibble(hex[i + 1])));
  }
  return out;
}

}  // namespace sofic
