#include "transval/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "transval/core/parallel.hpp"
#include "transval/core/stats.hpp"

namespace transval {

namespace {

// Runs one scalar-valued trial per index and summarises the values.
template <class Trial>
StabilityEstimate run_trials(Quantity quantity, const EstimatorOptions& options, Trial trial) {
    if (options.trials < 2) throw ContractError("stability estimators need at least 2 trials");
    std::vector<double> values(options.trials);
    parallel_for(options.trials, options.workers, [&](std::size_t i) {
        try {
            values[i] = trial(options.seed.derive("trial", i));
        } catch (const TrialError&) {
            throw;
        } catch (const std::exception& e) {
            throw TrialError(i, e.what());
        }
    });
    const MeanAndError summary = mean_and_error(values);
    return {summary.mean, summary.std_error, summary.count, quantity};
}

void check_task(const Learner& learner, const Generator& gen) {
    const auto task = learner_task(learner);
    if (task && *task != gen.task()) {
        throw ContractError(kind_name(learner) + " learner does not match the " +
                            to_string(gen.task()) + " generator '" + gen.name() + "'");
    }
}

}  // namespace

Generator discrete_generator(std::vector<Example> support, std::vector<double> weights,
                             TaskKind task, std::size_t class_count) {
    if (support.empty() || support.size() != weights.size()) {
        throw ContractError("discrete_generator: support and weights must be nonempty and equal");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw ContractError("discrete_generator: negative weight");
        total += w;
    }
    if (!(total > 0.0)) throw ContractError("discrete_generator: weights sum to zero");
    std::vector<double> cumulative(weights.size());
    std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
    for (double& c : cumulative) c /= total;
    cumulative.back() = 1.0;
    Dataset::from_examples(task, support, class_count);  // validates the support

    return Generator("discrete", task,
                     [support = std::move(support), cumulative = std::move(cumulative), task,
                      class_count](std::size_t count, const Seed& seed) {
                         Stream stream(seed);
                         std::vector<Example> drawn;
                         drawn.reserve(count);
                         for (std::size_t i = 0; i < count; ++i) {
                             const double u = stream.uniform();
                             auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
                             drawn.push_back(support[static_cast<std::size_t>(
                                 std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                          static_cast<std::ptrdiff_t>(
                                                              support.size() - 1)))]);
                         }
                         return Dataset::from_examples(task, drawn, class_count);
                     });
}

LossKind natural_loss(TaskKind task) {
    return task == TaskKind::classification ? LossKind::zero_one : LossKind::squared_error;
}

const char* to_string(Quantity q) {
    switch (q) {
        case Quantity::oaros_eps1: return "oaros-eps1";
        case Quantity::oavs: return "oavs";
        case Quantity::erm_gap_eps2: return "erm-gap-eps2";
        case Quantity::gen_gap: return "gen-gap";
    }
    return "unknown";
}

StabilityEstimate estimate_oaros(const Learner& learner, const Generator& gen, std::size_t n,
                                 const EstimatorOptions& options) {
    check_task(learner, gen);
    if (n < 1) throw ContractError("estimate_oaros: n must be >= 1");
    const LossKind loss = natural_loss(gen.task());
    return run_trials(Quantity::oaros_eps1, options, [&](const Seed& trial) {
        const Dataset train = gen.sample(n, trial.derive("train"));
        const Example fresh = gen.draw(trial.derive("fresh"));
        const std::size_t z = Stream(trial.derive("pick")).index(n);
        const Dataset replaced = train.with_replaced(z, fresh);
        const FittedModel original = fit(learner, train, trial.derive("fit", 0));
        const FittedModel perturbed = fit(learner, replaced, trial.derive("fit", 1));
        const double y = train.target(z);
        return std::abs(pointwise_loss(loss, original.predict(train.row(z)), y) -
                        pointwise_loss(loss, perturbed.predict(train.row(z)), y));
    });
}

StabilityEstimate estimate_oavs(const Learner& learner, const Generator& gen, std::size_t n,
                                std::size_t m, const EstimatorOptions& options) {
    check_task(learner, gen);
    if (n < 1 || m < 1) throw ContractError("estimate_oavs: n and m must be >= 1");
    const LossKind loss = natural_loss(gen.task());
    return run_trials(Quantity::oavs, options, [&](const Seed& trial) {
        const Dataset train = gen.sample(n, trial.derive("train"));
        const Dataset validation = gen.sample(m, trial.derive("validation"));
        Stream pick(trial.derive("pick"));
        const std::size_t y = pick.index(m);
        const std::size_t y_added = pick.index(m);
        const FittedModel original = fit(learner, train, trial.derive("fit", 0));
        const FittedModel augmented =
            fit(learner, train.with_example(validation.example(y_added)), trial.derive("fit", 1));
        const double truth = validation.target(y);
        return pointwise_loss(loss, original.predict(validation.row(y)), truth) -
               pointwise_loss(loss, augmented.predict(validation.row(y)), truth);
    });
}

StabilityEstimate estimate_erm_gap(const Learner& learner, const Generator& gen, std::size_t n,
                                   const EstimatorOptions& options) {
    check_task(learner, gen);
    if (n < 1) throw ContractError("estimate_erm_gap: n must be >= 1");
    const LossKind loss = natural_loss(gen.task());
    return run_trials(Quantity::erm_gap_eps2, options, [&](const Seed& trial) {
        const Dataset train = gen.sample(n, trial.derive("train"));
        const Dataset extended = train.with_example(gen.draw(trial.derive("fresh")));
        const FittedModel original = fit(learner, train, trial.derive("fit", 0));
        const FittedModel grown = fit(learner, extended, trial.derive("fit", 1));
        return empirical_loss(original, train, loss) - empirical_loss(grown, extended, loss);
    });
}

StabilityEstimate estimate_generalization_gap(const Learner& learner, const Generator& gen,
                                              std::size_t n, const EstimatorOptions& options) {
    check_task(learner, gen);
    if (n < 1) throw ContractError("estimate_generalization_gap: n must be >= 1");
    if (options.risk_sample < 1) throw ContractError("risk_sample must be >= 1");
    const LossKind loss = natural_loss(gen.task());
    return run_trials(Quantity::gen_gap, options, [&](const Seed& trial) {
        const Dataset sample = gen.sample(n, trial.derive("train"));
        const Dataset fresh = gen.sample(options.risk_sample, trial.derive("risk"));
        const FittedModel model = fit(learner, sample, trial.derive("fit", 0));
        return empirical_loss(model, fresh, loss) - empirical_loss(model, sample, loss);
    });
}

double combined_std_error(std::span<const double> std_errors, std::span<const double> weights) {
    double total = 0.0;
    for (std::size_t i = 0; i < std_errors.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        total += w * w * std_errors[i] * std_errors[i];
    }
    return std::sqrt(total);
}

GeneralizationCheck check_generalization(const Learner& learner, const Generator& gen,
                                         std::size_t n, const EstimatorOptions& options) {
    EstimatorOptions gap_options = options;
    gap_options.seed = options.seed.derive("gen-gap");
    EstimatorOptions oaros_options = options;
    oaros_options.seed = options.seed.derive("oaros");

    GeneralizationCheck check;
    check.gap = estimate_generalization_gap(learner, gen, n, gap_options);
    check.oaros = estimate_oaros(learner, gen, n, oaros_options);
    const double errors[] = {check.gap.std_error, check.oaros.std_error};
    check.combined_std_error = combined_std_error(errors);
    check.holds = check.gap.mean <= check.oaros.mean + 3.0 * check.combined_std_error;
    return check;
}

double theorem1_bound(double eps1, double eps2, std::size_t m) {
    if (!(eps1 >= 0.0) || !(eps2 >= 0.0)) {
        throw ContractError("theorem1_bound: rates must be non-negative");
    }
    if (m < 1) throw ContractError("theorem1_bound: m must be >= 1");
    return (3.0 + 1.0 / static_cast<double>(m)) * eps1 + eps2;
}

ValidationStabilityCheck check_validation_stability(const Learner& learner,
                                                    const Generator& gen, std::size_t n,
                                                    std::size_t m,
                                                    const EstimatorOptions& options) {
    auto with_seed = [&](const char* tag) {
        EstimatorOptions o = options;
        o.seed = options.seed.derive(tag);
        return o;
    };
    ValidationStabilityCheck check;
    check.oavs = estimate_oavs(learner, gen, n, m, with_seed("oavs"));
    check.eps1 = estimate_oaros(learner, gen, n, with_seed("oaros"));
    check.eps2 = estimate_erm_gap(learner, gen, n, with_seed("erm-gap"));
    check.bound = theorem1_bound(check.eps1.mean, std::max(check.eps2.mean, 0.0), m);
    const double errors[] = {check.oavs.std_error, check.eps1.std_error, check.eps2.std_error};
    const double weights[] = {1.0, 3.0 + 1.0 / static_cast<double>(m), 1.0};
    check.combined_std_error = combined_std_error(errors, weights);
    check.holds = check.oavs.mean <= check.bound + 3.0 * check.combined_std_error;
    return check;
}

double min_selection_gap(std::span<const double> validation_losses) {
    if (validation_losses.size() < 2) {
        throw ContractError("min_selection_gap: needs at least two models");
    }
    std::vector<double> sorted(validation_losses.begin(), validation_losses.end());
    std::sort(sorted.begin(), sorted.end());
    double gap = sorted[1] - sorted[0];
    for (std::size_t i = 2; i < sorted.size(); ++i) gap = std::min(gap, sorted[i] - sorted[i - 1]);
    return gap;
}

double markov_confidence_bound(double eps, double delta) {
    if (!(eps >= 0.0)) throw ContractError("markov_confidence_bound: eps must be >= 0");
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw ContractError("markov_confidence_bound: delta must be in (0, 1]");
    }
    return eps / delta;
}

}  // namespace transval
