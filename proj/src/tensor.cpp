#include "bd/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bd::nn {

Tensor::Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  data.assign(n, 0.0);
}

void require_finite([[maybe_unused]] const double* data, [[maybe_unused]] std::size_t n,
                    [[maybe_unused]] const char* what) {
#ifndef BD_NO_CHECKS
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(data[i]))
      throw std::runtime_error(std::string(what) + ": non-finite value at element " + std::to_string(i));
#endif
}

void require_finite(const Tensor& t, const char* what) { require_finite(t.data.data(), t.size(), what); }

}  // namespace bd::nn
