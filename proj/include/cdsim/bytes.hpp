#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "cdsim/bits.hpp"

namespace cdsim {

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Big-endian byte writer; all multi-byte integers in this project are
// serialized big-endian.
class ByteWriter {
public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);  // IEEE-754 bit pattern, big-endian
  void raw(const Bytes& data) { out_.insert(out_.end(), data.begin(), data.end()); }
  void raw(const char* data, std::size_t len);
  // u32 length prefix followed by the bytes.
  void blob(const Bytes& data);
  void magic(const char tag[5]) { raw(tag, 4); }

  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

private:
  Bytes out_;
};

class ByteReader {
public:
  explicit ByteReader(const Bytes& data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  Bytes raw(std::size_t len);
  Bytes blob();
  void expect_magic(const char tag[5]);
  bool exhausted() const { return pos_ == data_.size(); }
  void expect_end() const;
  std::size_t remaining() const { return data_.size() - pos_; }

private:
  void need(std::size_t n) const;
  const Bytes& data_;
  std::size_t pos_ = 0;
};

std::string to_hex(const Bytes& data);
Bytes from_hex(const std::string& hex);

}  // namespace cdsim
