#pragma once

#include "transval/core/split.hpp"
#include "transval/learners/learner.hpp"
#include "transval/samplers.hpp"

namespace transval {

/// Softmax regression from zero weights, one constant-step update per batch
/// of `schedule`, consumed in order. Batches index into split.train or
/// split.validation according to their source.
FittedModel train_sgd_logistic(const BatchSchedule& schedule, const Split& split,
                               double learning_rate);

/// Same, for a schedule that never sources from V.
FittedModel train_sgd_logistic(const BatchSchedule& schedule, const Dataset& train,
                               double learning_rate);

/// Number of iterations a learner config asks for on a training set of size n.
std::size_t sgd_iterations(const SgdParams& params, std::size_t n);

}  // namespace transval
