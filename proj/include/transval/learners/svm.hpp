#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace transval {

/// exp(-gamma * ||a - b||), the unsquared-distance radial kernel.
double radial_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// Solution of the soft-margin dual
///   max  sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
///   s.t. 0 <= alpha_i <= C, sum_i y_i alpha_i = 0.
struct DualSolution {
    std::vector<double> alpha;
    double rho = 0.0;
    /// max_{I_up} -y G - min_{I_low} -y G at exit.
    double kkt_violation = 0.0;
    double objective = 0.0;
    std::size_t iterations = 0;
};

/// Two-variable dual coordinate optimisation with maximal-violating-pair
/// selection. `gram` is the dense n x n kernel matrix, `labels` are +-1.
/// Throws ConvergenceError when `max_iterations` is reached first.
DualSolution solve_svm_dual(std::span<const double> gram, std::span<const double> labels,
                            double C, double tolerance, std::size_t max_iterations);

/// Dual objective of an arbitrary feasible alpha.
double svm_dual_objective(std::span<const double> gram, std::span<const double> labels,
                          std::span<const double> alpha);

}  // namespace transval
