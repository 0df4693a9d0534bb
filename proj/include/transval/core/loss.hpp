#pragma once

#include <concepts>
#include <span>
#include <string_view>

#include "transval/core/dataset.hpp"
#include "transval/core/error.hpp"

namespace transval {

enum class LossKind { zero_one, squared_error };

const char* to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view text);

/// The task each loss is defined for.
TaskKind task_of(LossKind kind);

/// Per-example loss of a prediction against the truth.
double pointwise_loss(LossKind kind, double prediction, double truth);

/// Anything with a task kind and a point predictor.
template <class P>
concept Predictor = requires(const P& p, std::span<const double> x) {
    { p.task() } -> std::convertible_to<TaskKind>;
    { p.predict(x) } -> std::convertible_to<double>;
};

/// Mean per-example loss of `model` over `data`.
template <Predictor P>
double empirical_loss(const P& model, const Dataset& data, LossKind loss) {
    if (model.task() != data.task() || task_of(loss) != data.task()) {
        throw ContractError(std::string("empirical_loss: ") + to_string(loss) + " loss with a " +
                            to_string(model.task()) + " model on " + to_string(data.task()) +
                            " data");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        sum += pointwise_loss(loss, model.predict(data.row(i)), data.target(i));
    }
    return sum / static_cast<double>(data.size());
}

/// 1 - zero-one loss; the form results are reported in for classification.
inline double accuracy_from_loss(double zero_one_loss) { return 1.0 - zero_one_loss; }

}  // namespace transval
