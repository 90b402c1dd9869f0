#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cdsim {

using Bit = std::uint8_t;              // 0 or 1
using BitString = std::vector<Bit>;    // one entry per bit
using Bytes = std::vector<std::uint8_t>;

// Bit 0 of a BitString is the most significant bit of the integer label.
std::uint64_t bits_to_label(const BitString& bits);
BitString label_to_bits(std::uint64_t label, std::size_t width);

BitString xor_bits(const BitString& a, const BitString& b);
Bit parity(const BitString& bits);
// Inner product over GF(2): parity of the bitwise AND.
Bit dot(const BitString& a, const BitString& b);
std::size_t hamming_weight(const BitString& bits);

// MSB-first packing; the final byte is zero-padded on the right.
Bytes pack_bits(const BitString& bits);
BitString unpack_bits(const Bytes& bytes, std::size_t num_bits);

// Streaming bit packer for non-byte-aligned encodings.
class BitWriter {
public:
  void append(const BitString& bits);
  void append_bit(Bit b);
  void append_label(std::uint64_t label, std::size_t width);
  const BitString& bits() const { return bits_; }
  Bytes packed() const { return pack_bits(bits_); }

private:
  BitString bits_;
};

class BitReader {
public:
  explicit BitReader(BitString bits) : bits_(std::move(bits)) {}
  Bit read_bit();
  BitString read(std::size_t count);
  std::uint64_t read_label(std::size_t width);
  bool exhausted() const { return pos_ == bits_.size(); }
  std::size_t remaining() const { return bits_.size() - pos_; }

private:
  BitString bits_;
  std::size_t pos_ = 0;
};

std::string format_bits(const BitString& bits);
BitString parse_bits(const std::string& text);

}  // namespace cdsim
