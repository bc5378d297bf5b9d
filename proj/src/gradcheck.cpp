#include "bd/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace bd::nn {

GradCheckReport gradient_check(const std::function<double()>& loss,
                               std::vector<GradCheckBlock>& blocks, double h) {
  GradCheckReport report;
  for (auto& block : blocks) {
    for (std::size_t i = 0; i < block.size; ++i) {
      const double saved = block.values[i];
      block.values[i] = saved + h;
      const double loss_plus = loss();
      block.values[i] = saved - h;
      const double loss_minus = loss();
      block.values[i] = saved;

      const double numeric = (loss_plus - loss_minus) / (2.0 * h);
      const double analytic = block.grads[i];
      const double denom = std::max(1e-8, std::abs(analytic) + std::abs(numeric));
      const double rel = std::abs(analytic - numeric) / denom;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_block = block.name;
        report.worst_index = i;
      }
    }
  }
  return report;
}

}  // namespace bd::nn
