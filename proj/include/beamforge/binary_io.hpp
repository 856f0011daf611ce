#ifndef BEAMFORGE_BINARY_IO_HPP
#define BEAMFORGE_BINARY_IO_HPP

#include <cstdint>
#include <fstream>
#include <string>

namespace beamforge {

// Little-endian binary writer/reader with offset tracking so corrupt or
// truncated files can be rejected with the exact byte offset.

class BinaryWriter {
 public:
  explicit BinaryWriter(const std::string& path);

  void u8(std::uint8_t v);
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f32(float v);
  void f64(double v);
  void close();

  std::uint64_t offset() const { return offset_; }

 private:
  void bytes(const unsigned char* p, std::size_t n);

  std::ofstream out_;
  std::string path_;
  std::uint64_t offset_ = 0;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::string& path);

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  float f32();
  double f64();

  std::uint64_t offset() const { return offset_; }
  bool at_eof();

 private:
  void bytes(unsigned char* p, std::size_t n);

  std::ifstream in_;
  std::string path_;
  std::uint64_t offset_ = 0;
};

}  // namespace beamforge

#endif
