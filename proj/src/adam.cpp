#include "bd/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace bd::nn {

void adam_step(std::vector<double>& param, const std::vector<double>& grad, AdamState& state,
               std::size_t step_count, const AdamHyper& hyper) {
  if (param.size() != grad.size()) throw std::invalid_argument("adam_step: size mismatch");
  if (state.m.empty()) {
    state.m.assign(param.size(), 0.0);
    state.v.assign(param.size(), 0.0);
  }
  const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(step_count));
  const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(step_count));
  for (std::size_t i = 0; i < param.size(); ++i) {
    state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * grad[i];
    state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    param[i] -= hyper.lr * m_hat / (std::sqrt(v_hat) + hyper.eps);
  }
}

}  // namespace bd::nn
