#include "beamforge/gradcheck.hpp"

#include <cmath>

#include "beamforge/loss.hpp"

namespace beamforge {

NetworkParameters finite_difference_gradients(const NetworkParameters& params,
                                              const std::vector<double>& input,
                                              const std::vector<double>& labels,
                                              double h) {
  NetworkParameters work = params;
  NetworkParameters fd = params;
  ForwardCache cache;

  std::vector<std::vector<double>*> work_arrays;
  work.for_each_array([&](std::vector<double>& a) { work_arrays.push_back(&a); });
  std::vector<std::vector<double>*> fd_arrays;
  fd.for_each_array([&](std::vector<double>& a) { fd_arrays.push_back(&a); });

  for (std::size_t a = 0; a < work_arrays.size(); ++a) {
    std::vector<double>& arr = *work_arrays[a];
    std::vector<double>& out = *fd_arrays[a];
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const double saved = arr[i];
      arr[i] = saved + h;
      const double up = sigmoid_ce_loss(network_forward(input, work, cache),
                                        labels);
      arr[i] = saved - h;
      const double down = sigmoid_ce_loss(network_forward(input, work, cache),
                                          labels);
      arr[i] = saved;
      out[i] = (up - down) / (2.0 * h);
    }
  }
  return fd;
}

GradCheckResult run_gradient_check(const ArchitectureSpec& arch, int draws,
                                   std::uint64_t seed, double h) {
  GradCheckResult result;
  for (int d = 0; d < draws; ++d) {
    RngStream rng = derive_stream(seed, static_cast<std::uint64_t>(d));
    NetworkParameters params = init_params(arch, rng);

    std::vector<double> input(static_cast<std::size_t>(arch.input_len));
    for (double& v : input) v = rng.normal();
    std::vector<double> labels(static_cast<std::size_t>(arch.output_dim));
    for (double& v : labels) v = rng.bounded(2) ? 1.0 : 0.0;

    ForwardCache cache;
    network_forward(input, params, cache);
    NetworkParameters bp = NetworkParameters::zeros(arch);
    network_backward(cache, params, labels, bp);

    const NetworkParameters fd =
        finite_difference_gradients(params, input, labels, h);

    std::vector<const std::vector<double>*> bp_arrays;
    bp.for_each_array(
        [&](const std::vector<double>& a) { bp_arrays.push_back(&a); });
    std::vector<const std::vector<double>*> fd_arrays;
    fd.for_each_array(
        [&](const std::vector<double>& a) { fd_arrays.push_back(&a); });

    for (std::size_t a = 0; a < bp_arrays.size(); ++a) {
      const std::vector<double>& gb = *bp_arrays[a];
      const std::vector<double>& gf = *fd_arrays[a];
      for (std::size_t i = 0; i < gb.size(); ++i) {
        const double diff = std::abs(gb[i] - gf[i]);
        const double scale =
            std::max({1.0, std::abs(gb[i]), std::abs(gf[i])});
        result.max_rel_error = std::max(result.max_rel_error, diff / scale);
        result.max_abs_error = std::max(result.max_abs_error, diff);
        ++result.components;
      }
    }
  }
  return result;
}

ArchitectureSpec gradcheck_toy_arch() {
  return ArchitectureSpec::custom(16, 8, 5, {2, 2, 2});
}

}  // namespace beamforge
