#include "transval/learners/svm.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "transval/core/error.hpp"

namespace transval {

double radial_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::exp(-gamma * std::sqrt(sq));
}

double svm_dual_objective(std::span<const double> gram, std::span<const double> labels,
                          std::span<const double> alpha) {
    const std::size_t n = labels.size();
    double linear = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        linear += alpha[i];
        for (std::size_t j = 0; j < n; ++j) {
            quad += alpha[i] * alpha[j] * labels[i] * labels[j] * gram[i * n + j];
        }
    }
    return linear - 0.5 * quad;
}

DualSolution solve_svm_dual(std::span<const double> gram, std::span<const double> labels,
                            double C, double tolerance, std::size_t max_iterations) {
    const std::size_t n = labels.size();
    if (gram.size() != n * n) throw ContractError("solve_svm_dual: gram matrix size mismatch");
    constexpr double tau = 1e-12;
    auto Q = [&](std::size_t i, std::size_t j) { return labels[i] * labels[j] * gram[i * n + j]; };

    DualSolution sol;
    sol.alpha.assign(n, 0.0);
    std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a
    auto& alpha = sol.alpha;
    auto in_up = [&](std::size_t t) {
        return (labels[t] > 0 && alpha[t] < C) || (labels[t] < 0 && alpha[t] > 0);
    };
    auto in_low = [&](std::size_t t) {
        return (labels[t] < 0 && alpha[t] < C) || (labels[t] > 0 && alpha[t] > 0);
    };

    for (;;) {
        double g_max = -std::numeric_limits<double>::infinity();
        double g_min = std::numeric_limits<double>::infinity();
        std::size_t i = n, j = n;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -labels[t] * grad[t];
            if (in_up(t) && v > g_max) {
                g_max = v;
                i = t;
            }
            if (in_low(t) && v < g_min) {
                g_min = v;
                j = t;
            }
        }
        sol.kkt_violation = (i == n || j == n) ? 0.0 : g_max - g_min;
        if (i == n || j == n || sol.kkt_violation < tolerance) break;
        if (sol.iterations >= max_iterations) {
            throw ConvergenceError("SVM dual solver hit the iteration cap of " +
                                       std::to_string(max_iterations) +
                                       " with KKT violation " +
                                       std::to_string(sol.kkt_violation),
                                   sol.kkt_violation);
        }
        ++sol.iterations;

        const double old_i = alpha[i];
        const double old_j = alpha[j];
        if (labels[i] != labels[j]) {
            double quad = Q(i, i) + Q(j, j) + 2.0 * Q(i, j);
            if (quad <= 0) quad = tau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0) {
                if (alpha[j] < 0) {
                    alpha[j] = 0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = -diff;
            }
            if (diff > 0) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = C - diff;
                }
            } else if (alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = C + diff;
            }
        } else {
            double quad = Q(i, i) + Q(j, j) - 2.0 * Q(i, j);
            if (quad <= 0) quad = tau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = sum - C;
                }
            } else if (alpha[j] < 0) {
                alpha[j] = 0;
                alpha[i] = sum;
            }
            if (sum > C) {
                if (alpha[j] > C) {
                    alpha[j] = C;
                    alpha[i] = sum - C;
                }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = sum;
            }
        }
        const double di = alpha[i] - old_i;
        const double dj = alpha[j] - old_j;
        for (std::size_t t = 0; t < n; ++t) grad[t] += Q(t, i) * di + Q(t, j) * dj;
    }

    // rho from free variables, else the midpoint of the feasible interval.
    double sum_free = 0.0;
    std::size_t free_count = 0;
    double upper = std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = labels[t] * grad[t];
        if (alpha[t] > 0 && alpha[t] < C) {
            sum_free += yg;
            ++free_count;
        } else if ((alpha[t] >= C && labels[t] < 0) || (alpha[t] <= 0 && labels[t] > 0)) {
            upper = std::min(upper, yg);
        } else {
            lower = std::max(lower, yg);
        }
    }
    if (free_count > 0) {
        sol.rho = sum_free / static_cast<double>(free_count);
    } else if (std::isfinite(upper) && std::isfinite(lower)) {
        sol.rho = 0.5 * (upper + lower);
    } else {
        sol.rho = std::isfinite(upper) ? upper : (std::isfinite(lower) ? lower : 0.0);
    }
    sol.objective = svm_dual_objective(gram, labels, alpha);
    return sol;
}

}  // namespace transval
