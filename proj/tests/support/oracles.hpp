#pragma once

// Test-side helpers: a property-case generator independent of the library RNG,
// plus small reference solvers used as oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

class Cases {
public:
    explicit Cases(std::uint64_t seed) : rng_(seed) {}

    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t integer(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    bool coin() { return integer(0, 1) == 1; }
    std::vector<double> reals(std::size_t n, double lo, double hi) {
        std::vector<double> out(n);
        for (double& v : out) v = real(lo, hi);
        return out;
    }
    std::uint64_t seed() { return rng_(); }

private:
    std::mt19937_64 rng_;
};

// Runs `body(cases, i)` for `count` generated cases.
inline void for_all(std::size_t count, std::uint64_t seed,
                    const std::function<void(Cases&, std::size_t)>& body) {
    Cases cases(seed);
    for (std::size_t i = 0; i < count; ++i) body(cases, i);
}

// Dense Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<std::vector<double>> solve(std::vector<std::vector<double>> a,
                                                std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-12) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

// Maximum of the soft-margin dual by enumerating every {0, C, free}
// assignment and solving the equality-constrained stationarity system on
// the free set. Exponential; meant for n <= 8.
struct QpOptimum {
    double objective = -INFINITY;
    std::vector<double> alpha;
};

inline QpOptimum brute_force_svm_dual(const std::vector<double>& gram,
                                      const std::vector<double>& y, double C) {
    const std::size_t n = y.size();
    auto objective = [&](const std::vector<double>& a) {
        double lin = 0, quad = 0;
        for (std::size_t i = 0; i < n; ++i) {
            lin += a[i];
            for (std::size_t j = 0; j < n; ++j) quad += a[i] * a[j] * y[i] * y[j] * gram[i * n + j];
        }
        return lin - 0.5 * quad;
    };
    QpOptimum best;
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<int> state(n);
        std::size_t c = code;
        for (std::size_t i = 0; i < n; ++i) {
            state[i] = static_cast<int>(c % 3);
            c /= 3;
        }
        std::vector<std::size_t> free;
        std::vector<double> alpha(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (state[i] == 1) alpha[i] = C;
            if (state[i] == 2) free.push_back(i);
        }
        if (free.empty()) {
            double eq = 0;
            for (std::size_t i = 0; i < n; ++i) eq += y[i] * alpha[i];
            if (std::abs(eq) > 1e-9) continue;
        } else {
            // Q_FF a_F + b y_F = 1 - Q_FU a_U ; y_F . a_F = -y_U . a_U
            const std::size_t f = free.size();
            std::vector<std::vector<double>> A(f + 1, std::vector<double>(f + 1, 0.0));
            std::vector<double> rhs(f + 1, 0.0);
            for (std::size_t r = 0; r < f; ++r) {
                const std::size_t i = free[r];
                for (std::size_t s = 0; s < f; ++s) {
                    const std::size_t j = free[s];
                    A[r][s] = y[i] * y[j] * gram[i * n + j];
                }
                A[r][f] = y[i];
                A[f][r] = y[i];
                rhs[r] = 1.0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (state[j] == 1) rhs[r] -= y[i] * y[j] * gram[i * n + j] * C;
                }
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (state[j] == 1) rhs[f] -= y[j] * C;
            }
            const auto x = solve(A, rhs);
            if (!x) continue;
            bool feasible = true;
            for (std::size_t r = 0; r < f; ++r) {
                if ((*x)[r] < -1e-12 || (*x)[r] > C + 1e-12) feasible = false;
                alpha[free[r]] = std::clamp((*x)[r], 0.0, C);
            }
            if (!feasible) continue;
        }
        const double obj = objective(alpha);
        if (obj > best.objective) {
            best.objective = obj;
            best.alpha = alpha;
        }
    }
    return best;
}

}  // namespace oracle
