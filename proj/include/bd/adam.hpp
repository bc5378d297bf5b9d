#pragma once

#include <cstddef>
#include <vector>

namespace bd::nn {

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment estimates for one parameter block, lazily sized.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
};

// Standard Adam with bias correction; step_count is the 1-based update
// index shared by all blocks of one optimizer.
void adam_step(std::vector<double>& param, const std::vector<double>& grad, AdamState& state,
               std::size_t step_count, const AdamHyper& hyper);

}  // namespace bd::nn
