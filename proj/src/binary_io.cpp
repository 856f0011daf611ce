#include "beamforge/binary_io.hpp"

#include <bit>
#include <stdexcept>

namespace beamforge {

BinaryWriter::BinaryWriter(const std::string& path)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
  if (!out_) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
}

void BinaryWriter::bytes(const unsigned char* p, std::size_t n) {
  out_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n));
  if (!out_) {
    throw std::runtime_error("write failed on '" + path_ + "' at offset " +
                             std::to_string(offset_));
  }
  offset_ += n;
}

void BinaryWriter::u8(std::uint8_t v) { bytes(&v, 1); }

void BinaryWriter::u16(std::uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>(v >> 8)};
  bytes(b, 2);
}

void BinaryWriter::u32(std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  bytes(b, 4);
}

void BinaryWriter::u64(std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  bytes(b, 8);
}

void BinaryWriter::f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

void BinaryWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void BinaryWriter::close() {
  out_.close();
  if (!out_) {
    throw std::runtime_error("close failed on '" + path_ + "'");
  }
}

BinaryReader::BinaryReader(const std::string& path)
    : in_(path, std::ios::binary), path_(path) {
  if (!in_) {
    throw std::runtime_error("cannot open '" + path + "' for reading");
  }
}

void BinaryReader::bytes(unsigned char* p, std::size_t n) {
  in_.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n) {
    throw std::runtime_error("'" + path_ +
                             "': truncated file, unexpected end of data at "
                             "offset " +
                             std::to_string(offset_ + static_cast<std::uint64_t>(
                                                          in_.gcount())));
  }
  offset_ += n;
}

std::uint8_t BinaryReader::u8() {
  unsigned char b = 0;
  bytes(&b, 1);
  return b;
}

std::uint16_t BinaryReader::u16() {
  unsigned char b[2];
  bytes(b, 2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t BinaryReader::u32() {
  unsigned char b[4];
  bytes(b, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t BinaryReader::u64() {
  unsigned char b[8];
  bytes(b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

float BinaryReader::f32() { return std::bit_cast<float>(u32()); }

double BinaryReader::f64() { return std::bit_cast<double>(u64()); }

bool BinaryReader::at_eof() {
  return in_.peek() == std::ifstream::traits_type::eof();
}

}  // namespace beamforge
