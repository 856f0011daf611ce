#include "beamforge/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace beamforge {

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double sigmoid_ce_loss(const std::vector<double>& logits,
                       const std::vector<double>& labels) {
  if (logits.size() != labels.size() || logits.empty()) {
    throw std::invalid_argument("sigmoid_ce_loss: length mismatch");
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < logits.size(); ++n) {
    const double q_hat = logits[n];
    sum += std::max(q_hat, 0.0) - q_hat * labels[n] +
           std::log1p(std::exp(-std::abs(q_hat)));
  }
  return sum / static_cast<double>(logits.size());
}

void sigmoid_ce_grad(const std::vector<double>& logits,
                     const std::vector<double>& labels,
                     std::vector<double>& dlogits) {
  if (logits.size() != labels.size() || logits.empty()) {
    throw std::invalid_argument("sigmoid_ce_grad: length mismatch");
  }
  const double inv_n = 1.0 / static_cast<double>(logits.size());
  dlogits.resize(logits.size());
  for (std::size_t n = 0; n < logits.size(); ++n) {
    dlogits[n] = (sigmoid(logits[n]) - labels[n]) * inv_n;
  }
}

}  // namespace beamforge
