#pragma once

#include <cstddef>

#include "seqfair/errors.hpp"

namespace seqfair {

// Midpoint quantile grid u_t = (t - 0.5) / T, t = 1..T. Every node lies
// strictly inside (0, 1). node() takes a zero-based index.
struct GridSpec {
  std::size_t nodes = 1000;

  double node(std::size_t t) const noexcept {
    return (static_cast<double>(t) + 0.5) / static_cast<double>(nodes);
  }

  void validate() const {
    if (nodes == 0) throw InvalidConfig("grid: T must be a positive integer");
  }
};

}  // namespace seqfair
