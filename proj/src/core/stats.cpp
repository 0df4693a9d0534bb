#include "transval/core/stats.hpp"

#include <cmath>
#include <vector>

namespace transval {

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MeanAndError mean_and_error(std::span<const double> values) {
    MeanAndError out;
    out.count = values.size();
    if (values.empty()) return out;
    const double n = static_cast<double>(values.size());
    out.mean = pairwise_sum(values) / n;
    if (values.size() < 2) return out;
    std::vector<double> squares(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - out.mean;
        squares[i] = d * d;
    }
    const double variance = pairwise_sum(squares) / (n - 1.0);
    out.std_error = std::sqrt(variance / n);
    return out;
}

}  // namespace transval
