#pragma once

#include <cstddef>
#include <span>

namespace dnls {

/// Pairwise (tree) summation in a fixed order. Every reported sum goes
/// through here so results do not depend on thread count or vector width.
double pairwise_sum(std::span<const double> v) noexcept;

}  // namespace dnls
