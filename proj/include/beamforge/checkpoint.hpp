#ifndef BEAMFORGE_CHECKPOINT_HPP
#define BEAMFORGE_CHECKPOINT_HPP

#include <string>

#include "beamforge/conv_net.hpp"

namespace beamforge {

// "AMPN" checkpoint file, little-endian:
//   u32 magic 0x414D504E, u16 version = 1, u8 layer count,
//   per layer {u8 type (0=conv, 1=fc), u16 kernel, u16 in_ch, u16 out_ch},
//   then raw f64: per conv layer weights [out][in][tap] then biases,
//   then FC weights [out][in] then biases.
inline constexpr std::uint32_t kCheckpointMagic = 0x414D504E;
inline constexpr std::uint16_t kCheckpointVersion = 1;

struct Checkpoint {
  NetworkParameters params;
  ArchitectureSpec arch;
};

void save_checkpoint(const NetworkParameters& params,
                     const ArchitectureSpec& arch, const std::string& path);

Checkpoint load_checkpoint(const std::string& path);

}  // namespace beamforge

#endif
