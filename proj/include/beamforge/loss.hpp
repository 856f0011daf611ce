#ifndef BEAMFORGE_LOSS_HPP
#define BEAMFORGE_LOSS_HPP

#include <vector>

namespace beamforge {

double sigmoid(double x);

// Mean sigmoid cross-entropy over the output vector:
//   (1/N) sum_n [ max(q_hat, 0) - q_hat*q + ln(1 + exp(-|q_hat|)) ].
// Stable for logits up to +-1e3 and beyond.
double sigmoid_ce_loss(const std::vector<double>& logits,
                       const std::vector<double>& labels);

// d loss / d logits: (sigmoid(q_hat) - q) / N.
void sigmoid_ce_grad(const std::vector<double>& logits,
                     const std::vector<double>& labels,
                     std::vector<double>& dlogits);

}  // namespace beamforge

#endif
