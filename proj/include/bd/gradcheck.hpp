#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bd::nn {

// A flat view of one parameter (or input) block and its analytic gradient.
struct GradCheckBlock {
  std::string name;
  double* values = nullptr;
  const double* grads = nullptr;
  std::size_t size = 0;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_block;
  std::size_t worst_index = 0;
};

// Central finite differences over every element of every block.
// `loss` must re-run the forward pass from the current block values;
// analytic gradients are read from the blocks as given (computed by the
// caller beforehand). Relative error is
// |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
GradCheckReport gradient_check(const std::function<double()>& loss,
                               std::vector<GradCheckBlock>& blocks, double h = 1e-6);

}  // namespace bd::nn
