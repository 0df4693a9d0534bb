#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "transval/core/dataset.hpp"

namespace transval {

/// Coefficients c0..cd of c0 + c1 x + ... + cd x^d.
struct PolyModel {
    std::vector<double> coefficients;

    double predict(std::span<const double> x) const;
};

struct KnnModel {
    std::shared_ptr<const Dataset> training;
    std::size_t k = 1;

    double predict(std::span<const double> x) const;
    /// Training rows of the k nearest neighbours, nearest first; distance
    /// ties go to the lower training index.
    std::vector<std::size_t> neighbours(std::span<const double> x) const;
};

/// One binary machine of an SVM: f(x) = sum_i coef_i K(sv_i, x) - rho.
struct SvmMachine {
    std::vector<double> support;      // row-major support vectors
    std::vector<double> coefficients; // alpha_i * y_i
    double rho = 0.0;
    double kkt_violation = 0.0;
    double dual_objective = 0.0;
    std::size_t iterations = 0;

    double decision(std::span<const double> x, std::size_t dim, double gamma) const;
};

/// Binary (one machine, positive class 1) or one-vs-rest (one per class).
struct SvmModel {
    std::vector<SvmMachine> machines;
    std::size_t dim = 0;
    std::size_t class_count = 2;
    double gamma = 1.0;

    double predict(std::span<const double> x) const;
};

/// Row-major class_count x (dim + 1) weights; the last column is the bias.
struct LogisticModel {
    std::vector<double> weights;
    std::size_t dim = 0;
    std::size_t class_count = 2;

    double predict(std::span<const double> x) const;
    /// Per-class scores w_c . x + b_c.
    std::vector<double> scores(std::span<const double> x) const;
};

struct ConstantModel {
    double value = 0.0;

    double predict(std::span<const double>) const { return value; }
};

/// A trained hypothesis. Immutable; safe to share across threads.
class FittedModel {
public:
    using State = std::variant<PolyModel, KnnModel, SvmModel, LogisticModel, ConstantModel>;

    FittedModel(TaskKind task, State state, std::uint64_t training_fingerprint)
        : task_(task), state_(std::move(state)), fingerprint_(training_fingerprint) {}

    TaskKind task() const noexcept { return task_; }
    double predict(std::span<const double> x) const {
        return std::visit([&](const auto& m) { return m.predict(x); }, state_);
    }
    const State& state() const noexcept { return state_; }
    std::uint64_t training_fingerprint() const noexcept { return fingerprint_; }

    template <class M>
    const M& as() const {
        return std::get<M>(state_);
    }

private:
    TaskKind task_;
    State state_;
    std::uint64_t fingerprint_;
};

}  // namespace transval
