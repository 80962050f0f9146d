#pragma once

#include <vector>

#include "fspec/operator.hpp"

namespace fspec {

/// X_t for t = 0..period−1. Each entry of `values` is dim × realizations,
/// one column per realization.
struct ProcessSample {
  Eigen::Index dim = 0;
  int period = 0;
  Eigen::Index realizations = 0;
  std::vector<Operator> values;

  [[nodiscard]] const Operator& at(int t) const { return values[static_cast<std::size_t>(t)]; }
};

}  // namespace fspec
