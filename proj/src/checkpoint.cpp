#include "beamforge/checkpoint.hpp"

#include <stdexcept>
#include <string>

#include "beamforge/binary_io.hpp"

namespace beamforge {

void save_checkpoint(const NetworkParameters& params,
                     const ArchitectureSpec& arch, const std::string& path) {
  arch.validate();
  BinaryWriter out(path);
  out.u32(kCheckpointMagic);
  out.u16(kCheckpointVersion);
  out.u8(4);  // 3 conv + 1 fc
  for (const ConvParams& layer : params.conv) {
    out.u8(0);
    out.u16(static_cast<std::uint16_t>(layer.kernel));
    out.u16(static_cast<std::uint16_t>(layer.in_ch));
    out.u16(static_cast<std::uint16_t>(layer.out_ch));
  }
  out.u8(1);
  out.u16(1);
  out.u16(static_cast<std::uint16_t>(params.fc.in_dim));
  out.u16(static_cast<std::uint16_t>(params.fc.out_dim));

  params.for_each_array([&out](const std::vector<double>& a) {
    for (double v : a) out.f64(v);
  });
  out.close();
}

Checkpoint load_checkpoint(const std::string& path) {
  BinaryReader in(path);
  const std::uint32_t magic = in.u32();
  if (magic != kCheckpointMagic) {
    throw std::runtime_error("'" + path + "': bad checkpoint magic at offset 0");
  }
  const std::uint16_t version = in.u16();
  if (version != kCheckpointVersion) {
    throw std::runtime_error("'" + path + "': unsupported checkpoint version " +
                             std::to_string(version) + " at offset 4");
  }
  const int layer_count = in.u8();
  if (layer_count != 4) {
    throw std::runtime_error("'" + path + "': expected 4 layers (3 conv + fc), "
                             "got " + std::to_string(layer_count) +
                             " at offset 6");
  }

  struct LayerHeader {
    int type;
    int kernel;
    int in_ch;
    int out_ch;
  };
  LayerHeader headers[4];
  for (LayerHeader& h : headers) {
    h.type = in.u8();
    h.kernel = in.u16();
    h.in_ch = in.u16();
    h.out_ch = in.u16();
  }
  for (int s = 0; s < 3; ++s) {
    if (headers[s].type != 0) {
      throw std::runtime_error("'" + path + "': layer " + std::to_string(s) +
                               " is not a conv layer");
    }
  }
  if (headers[3].type != 1) {
    throw std::runtime_error("'" + path + "': final layer is not fully "
                             "connected");
  }

  Checkpoint ckpt;
  for (int s = 0; s < 3; ++s) {
    ConvParams& layer = ckpt.params.conv[s];
    layer.kernel = headers[s].kernel;
    layer.in_ch = headers[s].in_ch;
    layer.out_ch = headers[s].out_ch;
    layer.w.resize(static_cast<std::size_t>(layer.out_ch) * layer.in_ch *
                   layer.kernel);
    layer.b.resize(static_cast<std::size_t>(layer.out_ch));
  }
  ckpt.params.fc.in_dim = headers[3].in_ch;
  ckpt.params.fc.out_dim = headers[3].out_ch;
  ckpt.params.fc.w.resize(static_cast<std::size_t>(ckpt.params.fc.in_dim) *
                          ckpt.params.fc.out_dim);
  ckpt.params.fc.b.resize(static_cast<std::size_t>(ckpt.params.fc.out_dim));

  ckpt.params.for_each_array([&in](std::vector<double>& a) {
    for (double& v : a) v = in.f64();
  });
  if (!in.at_eof()) {
    throw std::runtime_error("'" + path + "': trailing bytes at offset " +
                             std::to_string(in.offset()));
  }

  ckpt.arch = derive_arch(ckpt.params);
  return ckpt;
}

}  // namespace beamforge
