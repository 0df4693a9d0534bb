#include "transval/learners/sgd_logistic.hpp"

#include <algorithm>
#include <cmath>

#include "transval/core/error.hpp"

namespace transval {

namespace {

FittedModel run_sgd(const BatchSchedule& schedule, const Dataset& train,
                    const Dataset* validation, double learning_rate) {
    if (!(learning_rate > 0.0)) throw ContractError("sgd-logistic: learning rate must be > 0");
    if (train.task() != TaskKind::classification ||
        (validation && validation->task() != TaskKind::classification)) {
        throw ContractError("sgd-logistic: needs classification data");
    }
    if (validation && validation->dim() != train.dim()) {
        throw ContractError("sgd-logistic: train and validation dimensions differ");
    }
    if (schedule.train_size != train.size() ||
        (validation && schedule.validation_size != validation->size())) {
        throw ContractError("sgd-logistic: schedule was drawn for different set sizes");
    }

    LogisticModel model;
    model.dim = train.dim();
    model.class_count = std::max<std::size_t>(
        {train.class_count(), validation ? validation->class_count() : 0, 2});
    const std::size_t stride = model.dim + 1;
    model.weights.assign(model.class_count * stride, 0.0);

    std::vector<double> grad(model.weights.size());
    std::vector<double> prob(model.class_count);
    for (const Batch& batch : schedule.batches) {
        const Dataset* source = &train;
        if (batch.source == BatchSource::validation) {
            if (!validation) throw ContractError("sgd-logistic: schedule sources V but none given");
            source = validation;
        }
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t idx : batch.indices) {
            auto x = source->row(idx);
            prob = model.scores(x);
            const double top = *std::max_element(prob.begin(), prob.end());
            double norm = 0.0;
            for (double& s : prob) {
                s = std::exp(s - top);
                norm += s;
            }
            const std::size_t label = source->label(idx);
            for (std::size_t c = 0; c < model.class_count; ++c) {
                const double residual = prob[c] / norm - (c == label ? 1.0 : 0.0);
                double* g = grad.data() + c * stride;
                for (std::size_t d = 0; d < model.dim; ++d) g[d] += residual * x[d];
                g[model.dim] += residual;
            }
        }
        const double step = learning_rate / static_cast<double>(batch.indices.size());
        for (std::size_t w = 0; w < grad.size(); ++w) model.weights[w] -= step * grad[w];
    }
    std::uint64_t fingerprint = train.fingerprint();
    if (validation) fingerprint ^= validation->fingerprint() * 0x9E3779B97F4A7C15ULL;
    return FittedModel(TaskKind::classification, std::move(model), fingerprint);
}

}  // namespace

std::size_t sgd_iterations(const SgdParams& params, std::size_t n) {
    return params.epochs * std::max<std::size_t>(1, n / params.batch_size);
}

FittedModel train_sgd_logistic(const BatchSchedule& schedule, const Split& split,
                               double learning_rate) {
    return run_sgd(schedule, split.train, &split.validation, learning_rate);
}

FittedModel train_sgd_logistic(const BatchSchedule& schedule, const Dataset& train,
                               double learning_rate) {
    return run_sgd(schedule, train, nullptr, learning_rate);
}

}  // namespace transval
