#include "beamforge/conv_net.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "beamforge/loss.hpp"

namespace beamforge {

ArchitectureSpec ArchitectureSpec::nps1(int input_len, int output_dim) {
  ArchitectureSpec a;
  a.input_len = input_len;
  a.conv = {ConvSpec{5, 16}, ConvSpec{5, 32}, ConvSpec{5, 64}};
  a.output_dim = output_dim;
  a.preset = Preset::kNps1;
  a.validate();
  return a;
}

ArchitectureSpec ArchitectureSpec::nps2(int input_len, int output_dim) {
  ArchitectureSpec a;
  a.input_len = input_len;
  a.conv = {ConvSpec{10, 32}, ConvSpec{10, 64}, ConvSpec{10, 128}};
  a.output_dim = output_dim;
  a.preset = Preset::kNps2;
  a.validate();
  return a;
}

ArchitectureSpec ArchitectureSpec::custom(int input_len, int output_dim,
                                          int kernel,
                                          const std::array<int, 3>& filters) {
  ArchitectureSpec a;
  a.input_len = input_len;
  a.conv = {ConvSpec{kernel, filters[0]}, ConvSpec{kernel, filters[1]},
            ConvSpec{kernel, filters[2]}};
  a.output_dim = output_dim;
  a.preset = Preset::kCustom;
  a.validate();
  return a;
}

void ArchitectureSpec::validate() const {
  if (input_len < 8 || input_len % 8 != 0) {
    throw std::invalid_argument("architecture: input length " +
                                std::to_string(input_len) +
                                " must be a positive multiple of 8");
  }
  if (output_dim < 1) {
    throw std::invalid_argument("architecture: output dim must be >= 1");
  }
  for (const ConvSpec& c : conv) {
    if (c.kernel < 1 || c.filters < 1) {
      throw std::invalid_argument("architecture: conv kernel and filter counts "
                                  "must be >= 1");
    }
  }
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::kNps1:
      return "nps1";
    case Preset::kNps2:
      return "nps2";
    default:
      return "custom";
  }
}

Preset preset_from_name(const std::string& name) {
  if (name == "nps1") return Preset::kNps1;
  if (name == "nps2") return Preset::kNps2;
  if (name == "custom") return Preset::kCustom;
  throw std::invalid_argument("unknown preset '" + name +
                              "' (expected nps1 or nps2)");
}

NetworkParameters NetworkParameters::zeros(const ArchitectureSpec& arch) {
  arch.validate();
  NetworkParameters p;
  int in_ch = 1;
  for (int s = 0; s < 3; ++s) {
    ConvParams& layer = p.conv[s];
    layer.in_ch = in_ch;
    layer.out_ch = arch.conv[s].filters;
    layer.kernel = arch.conv[s].kernel;
    layer.w.assign(static_cast<std::size_t>(layer.out_ch) * layer.in_ch *
                       layer.kernel,
                   0.0);
    layer.b.assign(static_cast<std::size_t>(layer.out_ch), 0.0);
    in_ch = layer.out_ch;
  }
  p.fc.in_dim = arch.flatten_len();
  p.fc.out_dim = arch.output_dim;
  p.fc.w.assign(static_cast<std::size_t>(p.fc.in_dim) * p.fc.out_dim, 0.0);
  p.fc.b.assign(static_cast<std::size_t>(p.fc.out_dim), 0.0);
  return p;
}

std::size_t NetworkParameters::count() const {
  std::size_t n = 0;
  for_each_array([&n](const std::vector<double>& a) { n += a.size(); });
  return n;
}

Tensor conv1d_forward(const Tensor& x, const ConvParams& p, bool apply_relu,
                      Tensor* preact) {
  if (x.ch != p.in_ch) {
    throw std::invalid_argument("conv1d_forward: input has " +
                                std::to_string(x.ch) + " channels, layer wants " +
                                std::to_string(p.in_ch));
  }
  const int len = x.len;
  const int k = p.kernel;
  const int pad_left = (k - 1) / 2;

  // Zero-padded copy of the input, one padded row per channel.
  Tensor xpad(x.ch, len + k - 1);
  for (int c = 0; c < x.ch; ++c) {
    const double* src = x.row(c);
    double* dst = xpad.row(c) + pad_left;
    for (int i = 0; i < len; ++i) dst[i] = src[i];
  }

  Tensor y(p.out_ch, len);
  for (int oc = 0; oc < p.out_ch; ++oc) {
    double* yrow = y.row(oc);
    const double bias = p.b[oc];
    for (int i = 0; i < len; ++i) yrow[i] = bias;
    for (int ic = 0; ic < p.in_ch; ++ic) {
      const double* xrow = xpad.row(ic);
      for (int t = 0; t < k; ++t) {
        const double wv = p.wt(oc, ic, t);
        const double* xs = xrow + t;
        for (int i = 0; i < len; ++i) yrow[i] += wv * xs[i];
      }
    }
  }

  if (preact != nullptr) *preact = y;
  if (apply_relu) {
    for (double& v : y.v) v = v > 0.0 ? v : 0.0;
  }
  return y;
}

void conv1d_backward(const Tensor& x, const ConvParams& p, const Tensor& preact,
                     bool applied_relu, const Tensor& dy, Tensor& dx,
                     ConvParams& grad) {
  if (dy.ch != p.out_ch || dy.len != x.len || x.ch != p.in_ch) {
    throw std::invalid_argument("conv1d_backward: shape mismatch");
  }
  const int len = x.len;
  const int k = p.kernel;
  const int pad_left = (k - 1) / 2;

  Tensor dz = dy;
  if (applied_relu) {
    if (preact.ch != dy.ch || preact.len != dy.len) {
      throw std::invalid_argument("conv1d_backward: stale cache");
    }
    // ReLU subgradient: 1 above zero, 0 below, 1/2 exactly at the kink (the
    // symmetric value central differences measure; exact zeros occur with
    // zero-initialized biases over dead receptive fields).
    for (std::size_t i = 0; i < dz.v.size(); ++i) {
      const double pre = preact.v[i];
      if (pre < 0.0) {
        dz.v[i] = 0.0;
      } else if (pre == 0.0) {
        dz.v[i] *= 0.5;
      }
    }
  }

  Tensor xpad(x.ch, len + k - 1);
  for (int c = 0; c < x.ch; ++c) {
    const double* src = x.row(c);
    double* dst = xpad.row(c) + pad_left;
    for (int i = 0; i < len; ++i) dst[i] = src[i];
  }

  grad.in_ch = p.in_ch;
  grad.out_ch = p.out_ch;
  grad.kernel = p.kernel;
  grad.w.assign(p.w.size(), 0.0);
  grad.b.assign(p.b.size(), 0.0);

  Tensor dxpad(x.ch, len + k - 1);
  for (int oc = 0; oc < p.out_ch; ++oc) {
    const double* dzrow = dz.row(oc);
    double acc = 0.0;
    for (int i = 0; i < len; ++i) acc += dzrow[i];
    grad.b[oc] = acc;
    for (int ic = 0; ic < p.in_ch; ++ic) {
      const double* xrow = xpad.row(ic);
      double* dxrow = dxpad.row(ic);
      for (int t = 0; t < k; ++t) {
        const double* xs = xrow + t;
        double wacc = 0.0;
        for (int i = 0; i < len; ++i) wacc += dzrow[i] * xs[i];
        grad.wt(oc, ic, t) = wacc;
        const double wv = p.wt(oc, ic, t);
        double* dxs = dxrow + t;
        for (int i = 0; i < len; ++i) dxs[i] += wv * dzrow[i];
      }
    }
  }

  dx = Tensor(x.ch, len);
  for (int c = 0; c < x.ch; ++c) {
    const double* src = dxpad.row(c) + pad_left;
    double* dst = dx.row(c);
    for (int i = 0; i < len; ++i) dst[i] = src[i];
  }
}

Tensor maxpool_forward(const Tensor& x, std::vector<int>& argmax) {
  if (x.len % 2 != 0) {
    throw std::invalid_argument("maxpool_forward: odd input length " +
                                std::to_string(x.len));
  }
  const int out_len = x.len / 2;
  Tensor y(x.ch, out_len);
  argmax.assign(static_cast<std::size_t>(x.ch) * out_len, 0);
  for (int c = 0; c < x.ch; ++c) {
    const double* xrow = x.row(c);
    double* yrow = y.row(c);
    int* arow = argmax.data() + static_cast<std::size_t>(c) * out_len;
    for (int i = 0; i < out_len; ++i) {
      const double a = xrow[2 * i];
      const double b = xrow[2 * i + 1];
      if (b > a) {  // tie keeps the earlier position
        yrow[i] = b;
        arow[i] = 2 * i + 1;
      } else {
        yrow[i] = a;
        arow[i] = 2 * i;
      }
    }
  }
  return y;
}

Tensor maxpool_backward(const Tensor& dy, const std::vector<int>& argmax,
                        int input_len) {
  if (argmax.size() != dy.v.size() || input_len != dy.len * 2) {
    throw std::invalid_argument("maxpool_backward: shape mismatch");
  }
  Tensor dx(dy.ch, input_len);
  for (int c = 0; c < dy.ch; ++c) {
    const double* dyrow = dy.row(c);
    const int* arow = argmax.data() + static_cast<std::size_t>(c) * dy.len;
    double* dxrow = dx.row(c);
    for (int i = 0; i < dy.len; ++i) dxrow[arow[i]] += dyrow[i];
  }
  return dx;
}

std::vector<double> fc_forward(const std::vector<double>& x, const FcParams& p) {
  if (static_cast<int>(x.size()) != p.in_dim) {
    throw std::invalid_argument("fc_forward: input length " +
                                std::to_string(x.size()) + " != " +
                                std::to_string(p.in_dim));
  }
  std::vector<double> y(static_cast<std::size_t>(p.out_dim));
  for (int o = 0; o < p.out_dim; ++o) {
    const double* wrow = p.w.data() + static_cast<std::size_t>(o) * p.in_dim;
    double acc = p.b[o];
    for (int i = 0; i < p.in_dim; ++i) acc += wrow[i] * x[i];
    y[o] = acc;
  }
  return y;
}

void fc_backward(const std::vector<double>& x, const FcParams& p,
                 const std::vector<double>& dy, std::vector<double>& dx,
                 FcParams& grad) {
  if (static_cast<int>(x.size()) != p.in_dim ||
      static_cast<int>(dy.size()) != p.out_dim) {
    throw std::invalid_argument("fc_backward: shape mismatch");
  }
  grad.in_dim = p.in_dim;
  grad.out_dim = p.out_dim;
  grad.w.assign(p.w.size(), 0.0);
  grad.b.assign(p.b.size(), 0.0);
  dx.assign(x.size(), 0.0);
  for (int o = 0; o < p.out_dim; ++o) {
    const double g = dy[o];
    grad.b[o] = g;
    const double* wrow = p.w.data() + static_cast<std::size_t>(o) * p.in_dim;
    double* gwrow = grad.w.data() + static_cast<std::size_t>(o) * p.in_dim;
    for (int i = 0; i < p.in_dim; ++i) {
      gwrow[i] = g * x[i];
      dx[i] += wrow[i] * g;
    }
  }
}

const std::vector<double>& network_forward(const std::vector<double>& x,
                                           const NetworkParameters& params,
                                           ForwardCache& cache) {
  const int input_len = params.conv[0].in_ch > 0
                            ? static_cast<int>(x.size())
                            : 0;
  if (params.conv[0].in_ch != 1) {
    throw std::invalid_argument("network_forward: first conv must take one "
                                "channel");
  }
  if (input_len == 0 || input_len % 8 != 0) {
    throw std::invalid_argument("network_forward: input length " +
                                std::to_string(x.size()) +
                                " is not a positive multiple of 8");
  }
  if (params.fc.in_dim !=
      params.conv[2].out_ch * (input_len / 8)) {
    throw std::invalid_argument("network_forward: input length " +
                                std::to_string(x.size()) +
                                " inconsistent with network shape");
  }

  cache.input = Tensor(1, input_len);
  cache.input.v = x;

  const Tensor* stage_in = &cache.input;
  for (int s = 0; s < 3; ++s) {
    cache.postact[s] =
        conv1d_forward(*stage_in, params.conv[s], true, &cache.preact[s]);
    cache.pooled[s] = maxpool_forward(cache.postact[s], cache.argmax[s]);
    stage_in = &cache.pooled[s];
  }

  cache.flat = cache.pooled[2].v;  // [ch][len] row-major == channel-major
  cache.logits = fc_forward(cache.flat, params.fc);
  return cache.logits;
}

void network_backward(const ForwardCache& cache, const NetworkParameters& params,
                      const std::vector<double>& labels,
                      NetworkParameters& grads) {
  if (labels.size() != cache.logits.size()) {
    throw std::invalid_argument("network_backward: label length mismatch");
  }

  std::vector<double> dlogits;
  sigmoid_ce_grad(cache.logits, labels, dlogits);

  std::vector<double> dflat;
  fc_backward(cache.flat, params.fc, dlogits, dflat, grads.fc);

  Tensor dpool(cache.pooled[2].ch, cache.pooled[2].len);
  dpool.v = dflat;

  for (int s = 2; s >= 0; --s) {
    const Tensor dpost =
        maxpool_backward(dpool, cache.argmax[s], cache.postact[s].len);
    const Tensor& stage_in = (s == 0) ? cache.input : cache.pooled[s - 1];
    Tensor dx;
    conv1d_backward(stage_in, params.conv[s], cache.preact[s], true, dpost, dx,
                    grads.conv[s]);
    dpool = std::move(dx);
  }
}

NetworkParameters init_params(const ArchitectureSpec& arch, RngStream& rng) {
  NetworkParameters p = NetworkParameters::zeros(arch);
  for (ConvParams& layer : p.conv) {
    const double bound =
        std::sqrt(6.0 / (static_cast<double>(layer.in_ch) * layer.kernel));
    for (double& w : layer.w) w = rng.uniform(-bound, bound);
  }
  const double fc_bound =
      std::sqrt(6.0 / (static_cast<double>(p.fc.in_dim) + p.fc.out_dim));
  for (double& w : p.fc.w) w = rng.uniform(-fc_bound, fc_bound);
  return p;
}

ArchitectureSpec derive_arch(const NetworkParameters& params) {
  ArchitectureSpec a;
  if (params.conv[0].in_ch != 1 ||
      params.conv[1].in_ch != params.conv[0].out_ch ||
      params.conv[2].in_ch != params.conv[1].out_ch) {
    throw std::invalid_argument("derive_arch: inconsistent conv channels");
  }
  if (params.fc.in_dim % params.conv[2].out_ch != 0) {
    throw std::invalid_argument("derive_arch: fc input not divisible by last "
                                "conv filter count");
  }
  a.input_len = 8 * (params.fc.in_dim / params.conv[2].out_ch);
  for (int s = 0; s < 3; ++s) {
    a.conv[s] = ConvSpec{params.conv[s].kernel, params.conv[s].out_ch};
  }
  a.output_dim = params.fc.out_dim;
  a.preset = Preset::kCustom;
  const ArchitectureSpec ref1 = ArchitectureSpec::nps1(a.input_len, a.output_dim);
  const ArchitectureSpec ref2 = ArchitectureSpec::nps2(a.input_len, a.output_dim);
  auto same_convs = [&a](const ArchitectureSpec& ref) {
    for (int s = 0; s < 3; ++s) {
      if (ref.conv[s].kernel != a.conv[s].kernel ||
          ref.conv[s].filters != a.conv[s].filters) {
        return false;
      }
    }
    return true;
  };
  if (same_convs(ref1)) {
    a.preset = Preset::kNps1;
  } else if (same_convs(ref2)) {
    a.preset = Preset::kNps2;
  }
  a.validate();
  return a;
}

}  // namespace beamforge
