#include "transval/core/loss.hpp"

#include <string>

namespace transval {

const char* to_string(LossKind kind) {
    return kind == LossKind::zero_one ? "zero-one" : "squared-error";
}

LossKind parse_loss_kind(std::string_view text) {
    if (text == "zero-one") return LossKind::zero_one;
    if (text == "squared-error") return LossKind::squared_error;
    throw ContractError("unknown loss kind '" + std::string(text) + "'");
}

TaskKind task_of(LossKind kind) {
    return kind == LossKind::zero_one ? TaskKind::classification : TaskKind::regression;
}

double pointwise_loss(LossKind kind, double prediction, double truth) {
    if (kind == LossKind::zero_one) return prediction == truth ? 0.0 : 1.0;
    const double r = prediction - truth;
    return r * r;
}

}  // namespace transval
