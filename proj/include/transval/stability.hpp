#pragma once

// Monte-Carlo estimators for the stability rates used to certify that
// leaking validation data into training does not corrupt model selection.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "transval/core/dataset.hpp"
#include "transval/core/error.hpp"
#include "transval/core/random.hpp"
#include "transval/learners/learner.hpp"

namespace transval {

/// A sampling distribution D over examples. Draws with distinct seeds are
/// independent; equal seeds give equal draws.
class Generator {
public:
    using Sampler = std::function<Dataset(std::size_t count, const Seed& seed)>;

    Generator(std::string name, TaskKind task, Sampler sampler)
        : name_(std::move(name)), task_(task), sampler_(std::move(sampler)) {}

    const std::string& name() const noexcept { return name_; }
    TaskKind task() const noexcept { return task_; }

    Dataset sample(std::size_t count, const Seed& seed) const { return sampler_(count, seed); }
    Example draw(const Seed& seed) const { return sample(1, seed).example(0); }

private:
    std::string name_;
    TaskKind task_;
    Sampler sampler_;
};

/// Finite distribution: support[i] is drawn with probability weights[i] / sum.
Generator discrete_generator(std::vector<Example> support, std::vector<double> weights,
                             TaskKind task, std::size_t class_count = 0);

/// Zero-one for classification, squared error for regression.
LossKind natural_loss(TaskKind task);

enum class Quantity { oaros_eps1, oavs, erm_gap_eps2, gen_gap };

const char* to_string(Quantity q);

struct StabilityEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
    Quantity quantity = Quantity::oaros_eps1;
};

struct EstimatorOptions {
    std::size_t trials = 1000;
    /// Trial i uses seed.derive("trial", i).
    Seed seed{};
    std::size_t workers = 1;
    /// Fresh draw size standing in for the true risk L_D.
    std::size_t risk_sample = 10000;
};

/// A learner failure inside a Monte-Carlo trial.
class TrialError : public Error {
public:
    TrialError(std::size_t trial, const std::string& what)
        : Error("trial " + std::to_string(trial) + ": " + what), trial_(trial) {}
    std::size_t trial() const noexcept { return trial_; }

private:
    std::size_t trial_;
};

/// E |l(A(T), z) - l(A(T with z replaced by x'), z)|, T ~ D^n, x' ~ D, z ~ U(T).
StabilityEstimate estimate_oaros(const Learner& learner, const Generator& gen, std::size_t n,
                                 const EstimatorOptions& options);

/// E [l(A(T), y) - l(A(T + {y'}), y)], T ~ D^n, V ~ D^m, y, y' ~ U(V). Signed.
StabilityEstimate estimate_oavs(const Learner& learner, const Generator& gen, std::size_t n,
                                std::size_t m, const EstimatorOptions& options);

/// E [L_T(A(T)) - L_T~(A(T~))], T~ = T + {x'}. Signed.
StabilityEstimate estimate_erm_gap(const Learner& learner, const Generator& gen, std::size_t n,
                                   const EstimatorOptions& options);

/// E [L_D(A(S)) - L_S(A(S))], with L_D from a fresh `risk_sample` draw per trial.
StabilityEstimate estimate_generalization_gap(const Learner& learner, const Generator& gen,
                                              std::size_t n, const EstimatorOptions& options);

/// sqrt of the sum of squared standard errors, each scaled by its weight.
double combined_std_error(std::span<const double> std_errors,
                          std::span<const double> weights = {});

struct GeneralizationCheck {
    StabilityEstimate gap;
    StabilityEstimate oaros;
    double combined_std_error = 0.0;
    /// gap.mean <= oaros.mean + 3 * combined_std_error
    bool holds = false;
};

/// Checks that the expected generalisation gap of an ERM learner is bounded
/// by its replace-one stability rate.
GeneralizationCheck check_generalization(const Learner& learner, const Generator& gen,
                                         std::size_t n, const EstimatorOptions& options);

/// (3 + 1/m) eps1 + eps2.
double theorem1_bound(double eps1, double eps2, std::size_t m);

struct ValidationStabilityCheck {
    StabilityEstimate oavs;
    StabilityEstimate eps1;
    StabilityEstimate eps2;
    double bound = 0.0;  // theorem1_bound(eps1, max(eps2, 0), m)
    double combined_std_error = 0.0;
    /// oavs.mean <= bound + 3 * combined_std_error
    bool holds = false;
};

/// Co-estimates OAVS, eps1 (OAROS) and eps2 (ERM gap) on independent trial
/// streams and checks the validation-stability rate bound.
ValidationStabilityCheck check_validation_stability(const Learner& learner,
                                                    const Generator& gen, std::size_t n,
                                                    std::size_t m,
                                                    const EstimatorOptions& options);

/// min_{i != j} |losses[i] - losses[j]|; needs at least two losses.
double min_selection_gap(std::span<const double> validation_losses);

/// Deviation bound eps / delta holding with probability >= 1 - delta (Markov).
double markov_confidence_bound(double eps, double delta);

}  // namespace transval
