#ifndef BEAMFORGE_GRADCHECK_HPP
#define BEAMFORGE_GRADCHECK_HPP

#include <cstdint>

#include "beamforge/conv_net.hpp"

namespace beamforge {

// Central finite differences of the mean sigmoid cross-entropy loss w.r.t.
// every parameter; uses only forward passes, independent of backprop.
NetworkParameters finite_difference_gradients(const NetworkParameters& params,
                                              const std::vector<double>& input,
                                              const std::vector<double>& labels,
                                              double h);

struct GradCheckResult {
  double max_rel_error = 0.0;  // per component: |a-b| / max(1, |a|, |b|)
  double max_abs_error = 0.0;
  std::uint64_t components = 0;
};

// Backprop vs central finite differences over `draws` random parameter draws
// on the given architecture with random inputs and labels.
GradCheckResult run_gradient_check(const ArchitectureSpec& arch, int draws,
                                   std::uint64_t seed, double h = 1e-6);

// The toy network used by the self-check: input 16, kernel 5, filters 2/2/2,
// 8 outputs.
ArchitectureSpec gradcheck_toy_arch();

}  // namespace beamforge

#endif
