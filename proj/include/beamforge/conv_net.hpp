#ifndef BEAMFORGE_CONV_NET_HPP
#define BEAMFORGE_CONV_NET_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "beamforge/rng.hpp"

namespace beamforge {

// Real-valued [channels x length] activation block, row-major.
struct Tensor {
  int ch = 0;
  int len = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(int channels, int length)
      : ch(channels), len(length),
        v(static_cast<std::size_t>(channels) * length, 0.0) {}

  double* row(int c) { return v.data() + static_cast<std::size_t>(c) * len; }
  const double* row(int c) const {
    return v.data() + static_cast<std::size_t>(c) * len;
  }
  double& at(int c, int i) { return v[static_cast<std::size_t>(c) * len + i]; }
  double at(int c, int i) const {
    return v[static_cast<std::size_t>(c) * len + i];
  }
};

enum class Preset { kNps1, kNps2, kCustom };

struct ConvSpec {
  int kernel = 0;
  int filters = 0;
};

// Three Conv(stride 1, "same" zero padding, ReLU) + MaxPool(2/2) stages
// followed by one fully connected layer producing raw logits.
struct ArchitectureSpec {
  int input_len = 0;  // 2M, one channel
  std::array<ConvSpec, 3> conv{};
  int output_dim = 0;  // N_A
  Preset preset = Preset::kCustom;

  static ArchitectureSpec nps1(int input_len, int output_dim);
  static ArchitectureSpec nps2(int input_len, int output_dim);
  static ArchitectureSpec custom(int input_len, int output_dim, int kernel,
                                 const std::array<int, 3>& filters);

  void validate() const;

  // Per-stage post-pool lengths: input_len/2, /4, /8.
  int stage_len(int stage) const { return input_len >> (stage + 1); }
  int flatten_len() const { return conv[2].filters * stage_len(2); }
};

std::string preset_name(Preset p);
Preset preset_from_name(const std::string& name);

struct ConvParams {
  int in_ch = 0;
  int out_ch = 0;
  int kernel = 0;
  std::vector<double> w;  // [out][in][tap]
  std::vector<double> b;  // [out]

  double& wt(int oc, int ic, int t) {
    return w[(static_cast<std::size_t>(oc) * in_ch + ic) * kernel + t];
  }
  double wt(int oc, int ic, int t) const {
    return w[(static_cast<std::size_t>(oc) * in_ch + ic) * kernel + t];
  }
};

struct FcParams {
  int in_dim = 0;
  int out_dim = 0;
  std::vector<double> w;  // [out][in]
  std::vector<double> b;  // [out]
};

struct NetworkParameters {
  std::array<ConvParams, 3> conv;
  FcParams fc;

  static NetworkParameters zeros(const ArchitectureSpec& arch);
  std::size_t count() const;

  // Visits every parameter array in a fixed order (conv w/b ascending, then
  // fc w/b); the update and serialization order everywhere.
  template <typename Fn>
  void for_each_array(Fn&& fn) {
    for (auto& layer : conv) {
      fn(layer.w);
      fn(layer.b);
    }
    fn(fc.w);
    fn(fc.b);
  }
  template <typename Fn>
  void for_each_array(Fn&& fn) const {
    for (const auto& layer : conv) {
      fn(layer.w);
      fn(layer.b);
    }
    fn(fc.w);
    fn(fc.b);
  }
};

// Everything backprop needs from one forward pass.
struct ForwardCache {
  Tensor input;                        // 1 x 2M
  std::array<Tensor, 3> preact;        // conv output before ReLU
  std::array<Tensor, 3> postact;       // after ReLU (pool input)
  std::array<Tensor, 3> pooled;        // after max pool
  std::array<std::vector<int>, 3> argmax;  // absolute pre-pool positions
  std::vector<double> flat;
  std::vector<double> logits;
};

// Cross-correlation (no kernel flip), stride 1, zero "same" padding
// (pad_left = floor((k-1)/2), pad_right = ceil((k-1)/2)). Output length equals
// input length. When preact is non-null the pre-ReLU values are stored there.
Tensor conv1d_forward(const Tensor& x, const ConvParams& p, bool apply_relu,
                      Tensor* preact = nullptr);
// Adjoint of the padded cross-correlation. dy is the gradient w.r.t. the layer
// output (post-ReLU when applied_relu). Fills grad and dx.
void conv1d_backward(const Tensor& x, const ConvParams& p, const Tensor& preact,
                     bool applied_relu, const Tensor& dy, Tensor& dx,
                     ConvParams& grad);

// Pool size 2, stride 2; ties keep the earlier position. Throws on odd length.
Tensor maxpool_forward(const Tensor& x, std::vector<int>& argmax);
Tensor maxpool_backward(const Tensor& dy, const std::vector<int>& argmax,
                        int input_len);

// y = Wx + b, raw logits (no activation; the loss applies the sigmoid).
std::vector<double> fc_forward(const std::vector<double>& x, const FcParams& p);
void fc_backward(const std::vector<double>& x, const FcParams& p,
                 const std::vector<double>& dy, std::vector<double>& dx,
                 FcParams& grad);

// conv1 -> pool -> conv2 -> pool -> conv3 -> pool -> flatten -> fc.
// Flatten order is channel-major then position (row-major [ch][len]).
const std::vector<double>& network_forward(const std::vector<double>& x,
                                           const NetworkParameters& params,
                                           ForwardCache& cache);

// Gradient of the mean sigmoid cross-entropy loss w.r.t. every parameter.
void network_backward(const ForwardCache& cache, const NetworkParameters& params,
                      const std::vector<double>& labels,
                      NetworkParameters& grads);

// He-uniform conv weights, Glorot-uniform FC weights, zero biases.
NetworkParameters init_params(const ArchitectureSpec& arch, RngStream& rng);

// Architecture implied by parameter shapes (three conv stages + fc).
ArchitectureSpec derive_arch(const NetworkParameters& params);

}  // namespace beamforge

#endif
