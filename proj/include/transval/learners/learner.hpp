#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>

#include "transval/core/dataset.hpp"
#include "transval/core/loss.hpp"
#include "transval/core/random.hpp"
#include "transval/learners/models.hpp"

namespace transval {

/// Least squares over polynomial features of a single input.
struct PolyRegParams {
    std::size_t degree = 1;
    /// Added to the diagonal of the normal equations for non-intercept terms.
    double ridge = 1e-8;
};

struct KnnParams {
    std::size_t k = 1;
};

/// Soft-margin SVM with kernel exp(-gamma * ||xi - xj||).
struct SvmParams {
    double gamma = 1.0;
    double C = 1.0;
    double tolerance = 1e-3;
    std::size_t max_iterations = 100000;
};

/// Softmax (multinomial logistic) regression trained by minibatch SGD.
struct SgdParams {
    double learning_rate = 0.1;
    std::size_t epochs = 10;
    std::size_t batch_size = 8;
};

/// Ignores its training data; used as the zero-stability baseline.
struct ConstantParams {
    double value = 0.0;
};

using Learner = std::variant<PolyRegParams, KnnParams, SvmParams, SgdParams, ConstantParams>;

/// Throws ContractError when hyperparameters violate their invariants.
void validate(const Learner& learner);

/// Short kind name: polyreg, knn, svm-rbf, sgd-logistic, constant.
std::string kind_name(const Learner& learner);

/// Kind plus hyperparameters, e.g. "polyreg(degree=3,ridge=1e-08)".
std::string describe(const Learner& learner);

/// Task kind the learner accepts, or nullopt if it accepts both (constant).
std::optional<TaskKind> learner_task(const Learner& learner);

/// Fits `learner` on `data`. The seed only matters for learners that draw
/// randomness (SGD builds its batch order from it).
FittedModel fit(const Learner& learner, const Dataset& data, const Seed& seed);

FittedModel train_polyreg(const Dataset& data, std::size_t degree, double ridge);
FittedModel train_knn(const Dataset& data, std::size_t k);
FittedModel train_svm_rbf(const Dataset& data, const SvmParams& params);
FittedModel train_constant(const Dataset& data, double value);

/// Mean loss of the model's predictions over `data`.
inline double evaluate(const FittedModel& model, const Dataset& data, LossKind loss) {
    return empirical_loss(model, data, loss);
}

}  // namespace transval
