#include "cdsim/bits.hpp"

#include <stdexcept>

namespace cdsim {

std::uint64_t bits_to_label(const BitString& bits) {
  if (bits.size() > 64) throw std::invalid_argument("bits_to_label: width > 64");
  std::uint64_t label = 0;
  for (Bit b : bits) label = (label << 1) | (b & 1u);
  return label;
}

BitString label_to_bits(std::uint64_t label, std::size_t width) {
  if (width > 64) throw std::invalid_argument("label_to_bits: width > 64");
  if (width < 64 && (label >> width) != 0)
    throw std::invalid_argument("label_to_bits: label exceeds width");
  BitString bits(width);
  for (std::size_t i = 0; i < width; ++i)
    bits[i] = static_cast<Bit>((label >> (width - 1 - i)) & 1u);
  return bits;
}

BitString xor_bits(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) throw std::invalid_argument("xor_bits: length mismatch");
  BitString out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

Bit parity(const BitString& bits) {
  Bit p = 0;
  for (Bit b : bits) p ^= b;
  return p;
}

Bit dot(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  Bit p = 0;
  for (std::size_t i = 0; i < a.size(); ++i) p ^= static_cast<Bit>(a[i] & b[i]);
  return p;
}

std::size_t hamming_weight(const BitString& bits) {
  std::size_t w = 0;
  for (Bit b : bits) w += b;
  return w;
}

Bytes pack_bits(const BitString& bits) {
  Bytes out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  return out;
}

BitString unpack_bits(const Bytes& bytes, std::size_t num_bits) {
  if (bytes.size() * 8 < num_bits)
    throw std::invalid_argument("unpack_bits: not enough bytes");
  BitString bits(num_bits);
  for (std::size_t i = 0; i < num_bits; ++i)
    bits[i] = static_cast<Bit>((bytes[i / 8] >> (7 - i % 8)) & 1u);
  return bits;
}

void BitWriter::append(const BitString& bits) {
  bits_.insert(bits_.end(), bits.begin(), bits.end());
}

void BitWriter::append_bit(Bit b) { bits_.push_back(b & 1u); }

void BitWriter::append_label(std::uint64_t label, std::size_t width) {
  append(label_to_bits(label, width));
}

Bit BitReader::read_bit() {
  if (pos_ >= bits_.size()) throw std::out_of_range("BitReader: exhausted");
  return bits_[pos_++];
}

BitString BitReader::read(std::size_t count) {
  if (pos_ + count > bits_.size()) throw std::out_of_range("BitReader: exhausted");
  BitString out(bits_.begin() + static_cast<std::ptrdiff_t>(pos_),
                bits_.begin() + static_cast<std::ptrdiff_t>(pos_ + count));
  pos_ += count;
  return out;
}

std::uint64_t BitReader::read_label(std::size_t width) { return bits_to_label(read(width)); }

std::string format_bits(const BitString& bits) {
  std::string s;
  s.reserve(bits.size());
  for (Bit b : bits) s.push_back(b ? '1' : '0');
  return s;
}

BitString parse_bits(const std::string& text) {
  BitString bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c == '0') bits.push_back(0);
    else if (c == '1') bits.push_back(1);
    else throw std::invalid_argument("parse_bits: expected only '0'/'1'");
  }
  return bits;
}

}  // namespace cdsim
