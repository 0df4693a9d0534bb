#pragma once

#include <cstddef>
#include <span>

namespace transval {

/// Sum by recursive halving; the result depends only on the values and their
/// order, never on how the values were produced.
double pairwise_sum(std::span<const double> values);

struct MeanAndError {
    double mean = 0.0;
    /// Sample standard deviation / sqrt(count); zero for a single value.
    double std_error = 0.0;
    std::size_t count = 0;
};

MeanAndError mean_and_error(std::span<const double> values);

}  // namespace transval
