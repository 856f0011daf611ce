#include "beamforge/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace beamforge {

AdamState AdamState::zeros_like(const ArchitectureSpec& arch) {
  AdamState s;
  s.m = NetworkParameters::zeros(arch);
  s.v = NetworkParameters::zeros(arch);
  s.step = 0;
  return s;
}

namespace {

void adam_update_array(std::vector<double>& p, const std::vector<double>& g,
                       std::vector<double>& m, std::vector<double>& v,
                       double lr, double bias1, double bias2) {
  if (p.size() != g.size() || p.size() != m.size() || p.size() != v.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = kAdamBeta1 * m[i] + (1.0 - kAdamBeta1) * g[i];
    v[i] = kAdamBeta2 * v[i] + (1.0 - kAdamBeta2) * g[i] * g[i];
    const double m_hat = m[i] / bias1;
    const double v_hat = v[i] / bias2;
    p[i] -= lr * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
  }
}

}  // namespace

void adam_step(NetworkParameters& params, const NetworkParameters& grads,
               AdamState& state, double lr) {
  state.step += 1;
  const double bias1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.step));
  for (int s = 0; s < 3; ++s) {
    adam_update_array(params.conv[s].w, grads.conv[s].w, state.m.conv[s].w,
                      state.v.conv[s].w, lr, bias1, bias2);
    adam_update_array(params.conv[s].b, grads.conv[s].b, state.m.conv[s].b,
                      state.v.conv[s].b, lr, bias1, bias2);
  }
  adam_update_array(params.fc.w, grads.fc.w, state.m.fc.w, state.v.fc.w, lr,
                    bias1, bias2);
  adam_update_array(params.fc.b, grads.fc.b, state.m.fc.b, state.v.fc.b, lr,
                    bias1, bias2);
}

}  // namespace beamforge
